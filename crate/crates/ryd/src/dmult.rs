//! The product rule for the even orthogonal Grassmannian `OG(2,2n)`.
//!
//! Even orthogonal diagrams occupy two layers of rows, so they are first
//! flattened to profiles in a planar `2 x (2n-4)` rectangle.  Most profiles
//! name one class; for each size in the ambiguous range a single profile
//! names two, told apart by a charge.  The product of two classes is then
//! computed in stages on flattened profiles: a Lagrangian-style closed rule
//! ([`diamond`]), a multiplier [`eta`] on terms with a full first row, a
//! `2^fsh` rescale on every term, and finally a disambiguation step that
//! turns each profile back into classes, splitting ambiguous ones in half
//! or assigning them a charge outright depending on the inputs.  The one
//! exception is the product of the two charged one-row classes, which is
//! given directly by four small case formulas.
//!
//! [`star_trace`] exposes each stage; [`star`] returns just the result.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::Zero;

use crate::amult::{pow_base, ClassCombo};
use crate::shapes::{Charge, Family, FlatShape, Shape};
use crate::RydError;

/// A formal sum of flattened profiles with exact rational coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FlatCombo {
    terms: BTreeMap<FlatShape, Rational64>,
}

impl FlatCombo {
    pub fn new() -> FlatCombo {
        FlatCombo::default()
    }

    pub fn add(&mut self, shape: FlatShape, coeff: Rational64) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(shape).or_insert_with(Rational64::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&shape);
        }
    }

    pub fn coeff(&self, shape: &FlatShape) -> Rational64 {
        self.terms.get(shape).copied().unwrap_or_else(Rational64::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FlatShape, &Rational64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// The product of flattened profiles: the Lagrangian closed rule
/// transplanted to the `2 x (2n-4)` rectangle.  With `M` the smaller of the
/// two row differences and rows added coordinatewise, two unmarked profiles
/// within the unmarked capacity `2n-4` fill a strip of unmarked profiles;
/// beyond the capacity they shed one box to the top box, with the interior
/// of the strip doubled; a single marked profile keeps the strip and the
/// marker; two marked profiles annihilate.  Terms that do not fit the
/// rectangle are dropped.
pub fn diamond(alpha: FlatShape, beta: FlatShape, n: u32) -> FlatCombo {
    let mut out = FlatCombo::new();
    let mut put = |r1: i64, r2: i64, on: bool, coeff: i64| {
        if r1 >= 0 && r2 >= 0 {
            let shape = FlatShape::new(r1 as u32, r2 as u32, on);
            if shape.valid(n) {
                out.add(shape, Rational64::from_integer(coeff));
            }
        }
    };
    let m = i64::from((alpha.r1 - alpha.r2).min(beta.r1 - beta.r2));
    let s1 = i64::from(alpha.r1 + beta.r1);
    let s2 = i64::from(alpha.r2 + beta.r2);
    match (alpha.on, beta.on) {
        (true, true) => {}
        (true, false) | (false, true) => {
            for k in 0..=m {
                put(s1 - k, s2 + k, true, 1);
            }
        }
        (false, false) => {
            if alpha.size() + beta.size() <= 2 * n - 4 {
                for k in 0..=m {
                    put(s1 - k, s2 + k, false, 1);
                }
            } else {
                put(s1, s2 - 1, true, 1);
                for k in 1..=m {
                    put(s1 - k, s2 + k - 1, true, 2);
                }
                put(s1 - m - 1, s2 + m, true, 1);
            }
        }
    }
    out
}

/// The multiplier applied to product terms whose first row fills the
/// rectangle: `2` when both inputs are charged and their charges agree with
/// the parity of `n` (matching charges for even `n`, opposite for odd),
/// `0` when both are charged and they disagree, and `1` when either input
/// is neutral.
pub fn eta(lam: &Shape, mu: &Shape) -> i64 {
    if lam.charge == Charge::Neutral || mu.charge == Charge::Neutral {
        return 1;
    }
    let matched = lam.charge == mu.charge;
    let n_even = lam.family.n() % 2 == 0;
    if matched == n_even {
        2
    } else {
        0
    }
}

/// The stages of an even orthogonal product.  When the product is the
/// special case of the two charged one-row classes, `base_case` is set and
/// the staged fields stay empty; otherwise `diamond`, `after_eta` and
/// `after_fsh` hold the flattened expansion after each successive stage.
#[derive(Clone, Debug)]
pub struct StarTrace {
    pub base_case: bool,
    pub diamond: FlatCombo,
    pub after_eta: FlatCombo,
    pub after_fsh: FlatCombo,
    pub result: ClassCombo,
}

/// Multiplies two even orthogonal classes.
pub fn star(lam: &Shape, mu: &Shape) -> Result<ClassCombo, RydError> {
    Ok(star_trace(lam, mu)?.result)
}

/// Multiplies two even orthogonal classes, keeping every intermediate
/// stage.
pub fn star_trace(lam: &Shape, mu: &Shape) -> Result<StarTrace, RydError> {
    let family = lam.family;
    if mu.family != family || !matches!(family, Family::OGeven { .. }) {
        return Err(RydError::FamilyMismatch(format!(
            "cannot multiply {} ({}) by {} ({}) as even orthogonal classes",
            lam, lam.family, mu, mu.family
        )));
    }
    family.validate()?;
    let n = family.n();
    let lflat = lam.flatten()?;
    let mflat = mu.flatten()?;

    if lflat == FlatShape::new(n - 2, 0, false) && lflat == mflat {
        return Ok(StarTrace {
            base_case: true,
            diamond: FlatCombo::new(),
            after_eta: FlatCombo::new(),
            after_fsh: FlatCombo::new(),
            result: charged_row_product(lam, mu)?,
        });
    }

    let expansion = diamond(lflat, mflat, n);

    let full_row_scale = Rational64::from_integer(eta(lam, mu));
    let mut after_eta = FlatCombo::new();
    for (kappa, coeff) in expansion.iter() {
        if kappa.r1 == 2 * n - 4 {
            after_eta.add(*kappa, coeff * full_row_scale);
        } else {
            after_eta.add(*kappa, *coeff);
        }
    }

    let input_fsh = i64::from(lflat.fsh(n)) + i64::from(mflat.fsh(n));
    let mut after_fsh = FlatCombo::new();
    for (kappa, coeff) in after_eta.iter() {
        let scale = pow_base(2, i64::from(kappa.fsh(n)) - input_fsh);
        after_fsh.add(*kappa, coeff * scale);
    }

    let mut result = ClassCombo::new(family);
    for (kappa, coeff) in after_fsh.iter() {
        if !kappa.is_ambiguous(n) {
            result.add(kappa.resolve(n, Charge::Neutral)?, *coeff);
            continue;
        }
        match disambiguate(lam, mu, *kappa) {
            None => {
                let half = coeff / 2;
                result.add(kappa.resolve(n, Charge::Down)?, half);
                result.add(kappa.resolve(n, Charge::Up)?, half);
            }
            Some(charge) => result.add(kappa.resolve(n, charge)?, *coeff),
        }
    }
    result.integer_terms()?;

    Ok(StarTrace {
        base_case: false,
        diamond: expansion,
        after_eta,
        after_fsh,
        result,
    })
}

/// The product of the two charged one-row classes, by direct case formulas
/// on the parity of `n` and whether the charges match.  Every coefficient
/// is `1`; in the matching cases the final, ambiguous term inherits the
/// shared input charge, and in the opposite cases no ambiguous term occurs.
fn charged_row_product(lam: &Shape, mu: &Shape) -> Result<ClassCombo, RydError> {
    let family = lam.family;
    let n = family.n();
    let matched = lam.charge == mu.charge;
    let terms: Vec<(u32, u32)> = match (n % 2 == 0, matched) {
        (true, true) => (0..=(n - 2) / 2).map(|k| (2 * n - 4 - 2 * k, 2 * k)).collect(),
        (true, false) => (0..=(n - 4) / 2)
            .map(|k| (2 * n - 5 - 2 * k, 2 * k + 1))
            .collect(),
        (false, true) => (0..=(n - 3) / 2)
            .map(|k| (2 * n - 5 - 2 * k, 2 * k + 1))
            .collect(),
        (false, false) => (0..=(n - 3) / 2).map(|k| (2 * n - 4 - 2 * k, 2 * k)).collect(),
    };
    let mut result = ClassCombo::new(family);
    for (r1, r2) in terms {
        let flat = FlatShape::new(r1, r2, false);
        let charge = if flat.is_ambiguous(n) {
            debug_assert!(matched, "ambiguous term in an opposite-charge row product");
            lam.charge
        } else {
            Charge::Neutral
        };
        result.add(flat.resolve(n, charge)?, Rational64::from_integer(1));
    }
    Ok(result)
}

/// How an ambiguous product term is resolved: `Some(charge)` assigns the
/// charge outright, `None` splits the term in half between the charges.
fn disambiguate(lam: &Shape, mu: &Shape, kappa: FlatShape) -> Option<Charge> {
    let n = lam.family.n();
    let lam_neutral = lam.charge == Charge::Neutral;
    let mu_neutral = mu.charge == Charge::Neutral;

    if !lam.is_pieri() && !mu.is_pieri() {
        return None;
    }

    if (lam.is_pieri() && lam_neutral) || (mu.is_pieri() && mu_neutral) {
        let other = if lam.is_pieri() && lam_neutral { mu } else { lam };
        return match other.charge {
            Charge::Neutral => None,
            charge => Some(charge),
        };
    }

    // Every one-row input is now charged, and the charged pair was handled
    // as the base case, so exactly one input is the charged one-row class.
    let (pieri, other) = if lam.is_pieri() { (lam, mu) } else { (mu, lam) };
    debug_assert_eq!(pieri.flatten().unwrap(), FlatShape::new(n - 2, 0, false));
    debug_assert!(!other.is_pieri());

    if other.charge == Charge::Neutral && other.on && other.r1 + other.r2 == 2 * n - 4 {
        debug_assert_eq!(kappa, FlatShape::new(2 * n - 4, n - 2, true));
        return Some(if other.r1 % 2 == 0 {
            pieri.charge
        } else {
            pieri.charge.opposite()
        });
    }

    match other.charge {
        Charge::Neutral => None,
        charge => Some(charge),
    }
}
