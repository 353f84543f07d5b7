//! Products of Schubert classes for the families whose diagrams live in a
//! single planar poset: the two-step flag variety, the Lagrangian and odd
//! orthogonal Grassmannians of 2-planes, the two chain families and both
//! `G2` quotients.  The even orthogonal Grassmannian needs the flattening
//! machinery of [`crate::dmult`]; [`multiply`] dispatches there.
//!
//! Each two-row rule is driven by the assignment [`a_op`], which converts a
//! two-row Littlewood-Richardson target into classes: away from the middle
//! degree the target is copied verbatim, while a target that overshoots the
//! unmarked capacity sheds one box to the top box (the "jump").  Closed
//! summation forms of the resulting rules are implemented directly, with the
//! Littlewood-Richardson route kept alongside as an internal cross-check.
//!
//! Coefficients are exact rationals while the dual rescalings
//! `2^{sh}` / `3^{sh}` are in play; every public rule checks integrality
//! before returning.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::Zero;

use crate::lr2::{lr1_coeff, lr2_expand, Partition2};
use crate::shapes::{enumerate_shapes, Family, Shape};
use crate::RydError;

/// A formal sum of classes of one family with exact rational coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCombo {
    family: Family,
    terms: BTreeMap<Shape, Rational64>,
}

impl ClassCombo {
    pub fn new(family: Family) -> ClassCombo {
        ClassCombo {
            family,
            terms: BTreeMap::new(),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Adds `coeff * shape`, dropping the entry if the total cancels.
    pub fn add(&mut self, shape: Shape, coeff: Rational64) {
        assert_eq!(shape.family, self.family, "combo families must match");
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(shape).or_insert_with(Rational64::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&shape);
        }
    }

    pub fn add_scaled(&mut self, other: &ClassCombo, scale: Rational64) {
        assert_eq!(other.family, self.family, "combo families must match");
        for (shape, coeff) in &other.terms {
            self.add(*shape, coeff * scale);
        }
    }

    pub fn coeff(&self, shape: &Shape) -> Rational64 {
        self.terms.get(shape).copied().unwrap_or_else(Rational64::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Shape, &Rational64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The terms as integers, erroring if any coefficient is fractional.
    pub fn integer_terms(&self) -> Result<Vec<(Shape, i64)>, RydError> {
        self.terms
            .iter()
            .map(|(shape, coeff)| {
                if coeff.is_integer() {
                    Ok((*shape, coeff.to_integer()))
                } else {
                    Err(RydError::NonIntegral {
                        coeff: coeff.to_string(),
                        shape: shape.to_string(),
                    })
                }
            })
            .collect()
    }
}

fn require_same_family(lam: &Shape, mu: &Shape) -> Result<Family, RydError> {
    if lam.family != mu.family {
        return Err(RydError::FamilyMismatch(format!(
            "cannot multiply {} ({}) by {} ({})",
            lam, lam.family, mu, mu.family
        )));
    }
    Ok(lam.family)
}

fn one(combo: &mut ClassCombo, r1: u32, r2: u32, on: bool, coeff: i64) {
    if let Some(shape) = Shape::neutral_class(combo.family, r1, r2, on) {
        combo.add(shape, Rational64::from_integer(coeff));
    }
}

/// Integer power of a small base with a possibly negative exponent.
pub(crate) fn pow_base(base: i64, exp: i64) -> Rational64 {
    let p = base.pow(exp.unsigned_abs() as u32);
    if exp >= 0 {
        Rational64::from_integer(p)
    } else {
        Rational64::new(1, p)
    }
}

/// Rescaling exponent between the members of a dual pair: short-root count
/// of the product class minus those of the two factors.
fn sh_exponent(lam: &Shape, mu: &Shape, nu: &Shape) -> i64 {
    i64::from(nu.sh()) - i64::from(lam.sh()) - i64::from(mu.sh())
}

/// The marker-and-degree assignment sending a two-row target `nu` to
/// classes.  With both factors marked the result is zero; with exactly one
/// marked the target keeps its rows and gains the marker; with both
/// unmarked the target is copied when the factors fit the unmarked capacity
/// and otherwise sheds one box (from either row) to the top box.  Any
/// out-of-range term is dropped.
pub fn a_op(lam: &Shape, mu: &Shape, nu: Partition2) -> Result<ClassCombo, RydError> {
    let family = require_same_family(lam, mu)?;
    if !matches!(
        family,
        Family::Flag { .. } | Family::LG { .. } | Family::OGodd { .. }
    ) {
        return Err(RydError::FamilyMismatch(format!(
            "{family} does not use two-row targets"
        )));
    }
    let mut out = ClassCombo::new(family);
    match (lam.on, mu.on) {
        (true, true) => {}
        (true, false) | (false, true) => one(&mut out, nu.0, nu.1, true, 1),
        (false, false) => {
            if lam.size() + mu.size() <= family.half() {
                one(&mut out, nu.0, nu.1, false, 1);
            } else {
                if let Some(top) = nu.0.checked_sub(1) {
                    one(&mut out, top, nu.1, true, 1);
                }
                if let Some(bottom) = nu.1.checked_sub(1) {
                    one(&mut out, nu.0, bottom, true, 1);
                }
            }
        }
    }
    Ok(out)
}

/// Product rule for the two-step flag variety `Fl(1, n-1; n)`: the arm sums
/// are taken independently and fed through [`a_op`], so the product is a
/// single unmarked class, a single marked class, or the two-term jump.
pub fn mult_flag(lam: &Shape, mu: &Shape) -> Result<ClassCombo, RydError> {
    let family = require_same_family(lam, mu)?;
    if !matches!(family, Family::Flag { .. }) {
        return Err(RydError::FamilyMismatch(format!(
            "mult_flag does not apply to {family}"
        )));
    }
    a_op(lam, mu, (lam.r1 + mu.r1, lam.r2 + mu.r2))
}

/// Closed product rule for the Lagrangian Grassmannian `LG(2,2n)`.
///
/// With `M = min(lam1 - lam2, mu1 - mu2)` and rows added coordinatewise,
/// the product runs over the strip `k = 0..=M`: unmarked factors within the
/// unmarked capacity stay unmarked; unmarked factors beyond it emit both
/// one-box-shorter marked targets for every `k`; a single marked factor
/// keeps the strip and the marker; two marked factors annihilate.  Terms
/// leaving the `2 x (2n-3)` box are dropped.
pub fn mult_lg(lam: &Shape, mu: &Shape) -> Result<ClassCombo, RydError> {
    let family = require_same_family(lam, mu)?;
    if !matches!(family, Family::LG { .. }) {
        return Err(RydError::FamilyMismatch(format!(
            "mult_lg does not apply to {family}"
        )));
    }
    let mut out = ClassCombo::new(family);
    let m = (lam.r1 - lam.r2).min(mu.r1 - mu.r2);
    let (s1, s2) = (lam.r1 + mu.r1, lam.r2 + mu.r2);
    match (lam.on, mu.on) {
        (true, true) => {}
        (true, false) | (false, true) => {
            for k in 0..=m {
                one(&mut out, s1 - k, s2 + k, true, 1);
            }
        }
        (false, false) => {
            if lam.size() + mu.size() <= family.half() {
                for k in 0..=m {
                    one(&mut out, s1 - k, s2 + k, false, 1);
                }
            } else {
                for k in 0..=m {
                    if let Some(bottom) = (s2 + k).checked_sub(1) {
                        one(&mut out, s1 - k, bottom, true, 1);
                    }
                    if let Some(top) = (s1 - k).checked_sub(1) {
                        one(&mut out, top, s2 + k, true, 1);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The same product through the Littlewood-Richardson expansion: every
/// two-row target of the row partitions inside the `(2n-2, 2n-3)` box is fed
/// through [`a_op`] with its coefficient.  Kept as an independent route and
/// tested equal to [`mult_lg`].
pub fn mult_lg_via_a(lam: &Shape, mu: &Shape) -> Result<ClassCombo, RydError> {
    let family = require_same_family(lam, mu)?;
    if !matches!(family, Family::LG { .. }) {
        return Err(RydError::FamilyMismatch(format!(
            "mult_lg_via_a does not apply to {family}"
        )));
    }
    let n = family.n();
    let bbox = (2 * n - 2, 2 * n - 3);
    let mut out = ClassCombo::new(family);
    for (nu, c) in lr2_expand((lam.r1, lam.r2), (mu.r1, mu.r2), bbox) {
        let piece = a_op(lam, mu, nu)?;
        out.add_scaled(&piece, Rational64::from_integer(c.into()));
    }
    Ok(out)
}

/// Product rule for the odd orthogonal Grassmannian `OG(2,2n+1)`: the
/// Lagrangian coefficients rescaled by `2` to the short-root exponent.  The
/// exponent can be negative, but the result is always integral and is
/// checked to be so.
pub fn mult_og_odd(lam: &Shape, mu: &Shape) -> Result<ClassCombo, RydError> {
    let family = require_same_family(lam, mu)?;
    if !matches!(family, Family::OGodd { .. }) {
        return Err(RydError::FamilyMismatch(format!(
            "mult_og_odd does not apply to {family}"
        )));
    }
    let base = mult_lg(&lam.dual(), &mu.dual())?;
    let mut out = ClassCombo::new(family);
    for (shape, coeff) in base.iter() {
        let nu = shape.dual();
        out.add(nu, coeff * pow_base(2, sh_exponent(lam, mu, &nu)));
    }
    out.integer_terms()?;
    Ok(out)
}

/// Product rule for the chain families: the odd quadric `Q^{2n-1}` behaves
/// as a rank-1 Grassmannian on box counts, except that two unmarked factors
/// overshooting the unmarked capacity produce the one-box-shorter marked
/// class with coefficient `2`; projective space `P^{2n-1}` is the `2^{sh}`
/// rescale of the quadric (every coefficient lands in `{0,1}`).
pub fn mult_chain(lam: &Shape, mu: &Shape) -> Result<ClassCombo, RydError> {
    let family = require_same_family(lam, mu)?;
    if !matches!(family, Family::ChainB { .. } | Family::ChainC { .. }) {
        return Err(RydError::FamilyMismatch(format!(
            "mult_chain does not apply to {family}"
        )));
    }
    let quadric = chain_quadric_rule(Family::ChainB { n: family.n() }, lam, mu);
    match family {
        Family::ChainB { .. } => Ok(quadric),
        _ => rescale_to_dual(&quadric, lam, mu, 2),
    }
}

/// Product rule for the `G2` quotients: the five-dimensional quadric
/// `G2/P1` follows the same rank-1 pattern as the odd quadric, and the
/// adjoint space `G2/P2` is its `3^{sh}` rescale.
pub fn mult_g2(lam: &Shape, mu: &Shape) -> Result<ClassCombo, RydError> {
    let family = require_same_family(lam, mu)?;
    if !matches!(family, Family::G2P1 | Family::G2P2) {
        return Err(RydError::FamilyMismatch(format!(
            "mult_g2 does not apply to {family}"
        )));
    }
    let quadric = chain_quadric_rule(Family::G2P1, lam, mu);
    match family {
        Family::G2P1 => Ok(quadric),
        _ => rescale_to_dual(&quadric, lam, mu, 3),
    }
}

/// The rank-1 pattern shared by the odd quadric and `G2/P1`, stated through
/// rank-1 Grassmannian coefficients on the single row: a lone marked factor
/// multiplies as `Gr_1` of the row capacity; two unmarked factors either
/// stay within the unmarked capacity or shed a box to the top box with the
/// quadric doubling.
fn chain_quadric_rule(target: Family, lam: &Shape, mu: &Shape) -> ClassCombo {
    let mut out = ClassCombo::new(target);
    let s = lam.r1 + mu.r1;
    let row = target.row_len();
    match (lam.on, mu.on) {
        (true, true) => {}
        (true, false) | (false, true) => {
            let c = lr1_coeff(lam.r1, mu.r1, s, row);
            one(&mut out, s, 0, true, c.into());
        }
        (false, false) => {
            if s <= target.half() {
                let c = lr1_coeff(lam.r1, mu.r1, s, row);
                one(&mut out, s, 0, false, c.into());
            } else {
                let c = 2 * lr1_coeff(lam.r1, mu.r1, s, row + 1);
                one(&mut out, s - 1, 0, true, c.into());
            }
        }
    }
    out
}

/// Transfers a product from the quadric-side member of a dual pair to the
/// other member by the `base^{sh}` rescale, checking integrality.
fn rescale_to_dual(
    quadric: &ClassCombo,
    lam: &Shape,
    mu: &Shape,
    base: i64,
) -> Result<ClassCombo, RydError> {
    let mut out = ClassCombo::new(lam.family);
    for (shape, coeff) in quadric.iter() {
        let nu = Shape {
            family: lam.family,
            ..*shape
        };
        out.add(nu, coeff * pow_base(base, sh_exponent(lam, mu, &nu)));
    }
    out.integer_terms()?;
    Ok(out)
}

/// Multiplies two classes of any supported family.
pub fn multiply(lam: &Shape, mu: &Shape) -> Result<ClassCombo, RydError> {
    let family = require_same_family(lam, mu)?;
    match family {
        Family::Flag { .. } => mult_flag(lam, mu),
        Family::LG { .. } => mult_lg(lam, mu),
        Family::OGodd { .. } => mult_og_odd(lam, mu),
        Family::OGeven { .. } => crate::dmult::star(lam, mu),
        Family::ChainB { .. } | Family::ChainC { .. } => mult_chain(lam, mu),
        Family::G2P1 | Family::G2P2 => mult_g2(lam, mu),
    }
}

/// Exhaustively checks the rescaling identity between the two members of
/// the dual pair containing `family`: the coadjoint coefficient equals the
/// adjoint one times `base^{sh(lam) + sh(mu) - sh(nu)}`.  Returns the
/// number of violating triples (zero when the identity holds; the identity
/// is trivial for the self-dual families).
pub fn verify_coadjoint_relation(family: Family) -> Result<u64, RydError> {
    family.validate()?;
    let (adjoint, coadjoint) = if family.is_adjoint() {
        (family, family.dual())
    } else {
        (family.dual(), family)
    };
    let base = adjoint.duality_base();
    let shapes = enumerate_shapes(coadjoint)?;
    let mut violations = 0;
    for lam in &shapes {
        for mu in &shapes {
            let co = multiply(lam, mu)?;
            let ad = multiply(&to_family(lam, adjoint), &to_family(mu, adjoint))?;
            for nu in &shapes {
                let expected =
                    ad.coeff(&to_family(nu, adjoint)) * pow_base(base, -sh_exponent(lam, mu, nu));
                if co.coeff(nu) != expected {
                    violations += 1;
                }
            }
        }
    }
    Ok(violations)
}

fn to_family(shape: &Shape, family: Family) -> Shape {
    Shape { family, ..*shape }
}
