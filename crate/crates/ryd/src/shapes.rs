//! Diagrams indexing Schubert classes, and their embedding into root systems.
//!
//! Every supported space carries a set `Lambda` of positive roots arranged
//! into one, two or four rows plus a distinguished top box.  A Schubert class
//! is recorded as row lengths together with a marker saying whether the top
//! box is used; for the even orthogonal Grassmannian some row profiles name
//! two different classes and carry an extra up/down charge.

use std::collections::BTreeSet;
use std::fmt;

use crate::rootsys::{minimal_coset_reps, RootSystem, SysFamily, WeylElement};
use crate::RydError;

/// The supported homogeneous spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Two-step flag variety `Fl(1, n-1; n)` (type `A_{n-1}`, nodes 1 and `n-1`).
    Flag { n: u32 },
    /// Lagrangian Grassmannian `LG(2, 2n)` (type `C_n`, node 2).
    LG { n: u32 },
    /// Odd orthogonal Grassmannian `OG(2, 2n+1)` (type `B_n`, node 2).
    OGodd { n: u32 },
    /// Even orthogonal Grassmannian `OG(2, 2n)` (type `D_n`, node 2).
    OGeven { n: u32 },
    /// Odd quadric `Q^{2n-1}` (type `B_n`, node 1).
    ChainB { n: u32 },
    /// Projective space `P^{2n-1}` (type `C_n`, node 1).
    ChainC { n: u32 },
    /// The five-dimensional quadric `G2/P_1`.
    G2P1,
    /// The adjoint variety `G2/P_2`.
    G2P2,
}

impl Family {
    /// The defining parameter; for the `G2` spaces this is the rank 2.
    pub fn n(self) -> u32 {
        match self {
            Family::Flag { n }
            | Family::LG { n }
            | Family::OGodd { n }
            | Family::OGeven { n }
            | Family::ChainB { n }
            | Family::ChainC { n } => n,
            Family::G2P1 | Family::G2P2 => 2,
        }
    }

    pub fn validate(self) -> Result<(), RydError> {
        let (min, label) = match self {
            Family::Flag { .. } => (3, "Flag"),
            Family::LG { .. } => (2, "LG"),
            Family::OGodd { .. } => (2, "OGodd"),
            Family::OGeven { .. } => (4, "OGeven"),
            Family::ChainB { .. } => (2, "ChainB"),
            Family::ChainC { .. } => (2, "ChainC"),
            Family::G2P1 | Family::G2P2 => return Ok(()),
        };
        if self.n() < min {
            return Err(RydError::Invalid(format!(
                "{label} requires n >= {min}, got {}",
                self.n()
            )));
        }
        Ok(())
    }

    /// Lie type and rank of the ambient group.
    pub fn sys(self) -> (SysFamily, usize) {
        let n = self.n() as usize;
        match self {
            Family::Flag { .. } => (SysFamily::A, n - 1),
            Family::LG { .. } | Family::ChainC { .. } => (SysFamily::C, n),
            Family::OGodd { .. } | Family::ChainB { .. } => (SysFamily::B, n),
            Family::OGeven { .. } => (SysFamily::D, n),
            Family::G2P1 | Family::G2P2 => (SysFamily::G2, 2),
        }
    }

    /// Marked Dynkin nodes (0-indexed) cutting out the parabolic subgroup.
    pub fn marked(self) -> Vec<usize> {
        let n = self.n() as usize;
        match self {
            Family::Flag { .. } => vec![0, n - 2],
            Family::LG { .. } | Family::OGodd { .. } | Family::OGeven { .. } => vec![1],
            Family::ChainB { .. } | Family::ChainC { .. } => vec![0],
            Family::G2P1 => vec![0],
            Family::G2P2 => vec![1],
        }
    }

    /// Half the non-top boxes: unmarked diagrams hold at most this many
    /// boxes, marked diagrams at least this many plus the top box.
    pub fn half(self) -> u32 {
        (self.lambda_size() - 1) / 2
    }

    /// Number of boxes available to diagrams (always odd).
    pub fn lambda_size(self) -> u32 {
        let n = self.n();
        match self {
            Family::Flag { .. } => 2 * n - 3,
            Family::LG { .. } | Family::OGodd { .. } => 4 * n - 5,
            Family::OGeven { .. } => 4 * n - 7,
            Family::ChainB { .. } | Family::ChainC { .. } => 2 * n - 1,
            Family::G2P1 | Family::G2P2 => 5,
        }
    }

    /// Length of each diagram row.
    pub fn row_len(self) -> u32 {
        let n = self.n();
        match self {
            Family::Flag { .. } => n - 2,
            Family::LG { .. } | Family::OGodd { .. } => 2 * n - 3,
            Family::OGeven { .. } => 2 * n - 4,
            Family::ChainB { .. } | Family::ChainC { .. } => 2 * n - 2,
            Family::G2P1 | Family::G2P2 => 4,
        }
    }

    /// Number of diagram rows (`1` for the chain families).
    pub fn num_rows(self) -> u32 {
        match self {
            Family::ChainB { .. } | Family::ChainC { .. } | Family::G2P1 | Family::G2P2 => 1,
            _ => 2,
        }
    }

    /// Whether the space is the adjoint member of its dual pair.  The two
    /// simply-laced spaces are both adjoint and coadjoint.
    pub fn is_adjoint(self) -> bool {
        matches!(
            self,
            Family::Flag { .. }
                | Family::OGodd { .. }
                | Family::OGeven { .. }
                | Family::ChainC { .. }
                | Family::G2P2
        )
    }

    /// The partner space with the same Weyl group data and dual marking.
    pub fn dual(self) -> Family {
        match self {
            Family::LG { n } => Family::OGodd { n },
            Family::OGodd { n } => Family::LG { n },
            Family::ChainB { n } => Family::ChainC { n },
            Family::ChainC { n } => Family::ChainB { n },
            Family::G2P1 => Family::G2P2,
            Family::G2P2 => Family::G2P1,
            other => other,
        }
    }

    /// Ratio of squared root lengths, the base of the duality rescaling.
    pub fn duality_base(self) -> i64 {
        match self {
            Family::G2P1 | Family::G2P2 => 3,
            Family::Flag { .. } | Family::OGeven { .. } => 1,
            _ => 2,
        }
    }

    /// Total number of Schubert classes.
    pub fn num_classes(self) -> u32 {
        let n = self.n();
        match self {
            Family::Flag { .. } => n * (n - 1),
            Family::LG { .. } | Family::OGodd { .. } | Family::OGeven { .. } => 2 * n * (n - 1),
            Family::ChainB { .. } | Family::ChainC { .. } => 2 * n,
            Family::G2P1 | Family::G2P2 => 6,
        }
    }

    pub fn name(self) -> String {
        match self {
            Family::Flag { n } => format!("Fl(1,{};{})", n - 1, n),
            Family::LG { n } => format!("LG(2,{})", 2 * n),
            Family::OGodd { n } => format!("OG(2,{})", 2 * n + 1),
            Family::OGeven { n } => format!("OG(2,{})", 2 * n),
            Family::ChainB { n } => format!("Q^{}", 2 * n - 1),
            Family::ChainC { n } => format!("P^{}", 2 * n - 1),
            Family::G2P1 => "G2/P1".to_string(),
            Family::G2P2 => "G2/P2".to_string(),
        }
    }

    /// Parses a family name (several aliases are accepted) plus parameter.
    pub fn from_parts(name: &str, n: Option<u32>) -> Result<Family, RydError> {
        let lower = name.to_ascii_lowercase();
        let need = |n: Option<u32>| {
            n.ok_or_else(|| RydError::Invalid(format!("family {name} requires --n")))
        };
        let family = match lower.as_str() {
            "flag" | "a" => Family::Flag { n: need(n)? },
            "lg" => Family::LG { n: need(n)? },
            "ogodd" | "b" => Family::OGodd { n: need(n)? },
            "ogeven" | "d" => Family::OGeven { n: need(n)? },
            "chainb" | "qodd" => Family::ChainB { n: need(n)? },
            "chainc" | "c" | "proj" => Family::ChainC { n: need(n)? },
            "g2p1" => Family::G2P1,
            "g2p2" | "g2" => Family::G2P2,
            _ => {
                return Err(RydError::Parse {
                    what: "family",
                    input: name.to_string(),
                })
            }
        };
        family.validate()?;
        Ok(family)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Disambiguating charge for even orthogonal classes whose flattened rows
/// coincide; all other classes are neutral.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Charge {
    #[default]
    Neutral,
    Down,
    Up,
}

impl Charge {
    pub fn opposite(self) -> Charge {
        match self {
            Charge::Neutral => Charge::Neutral,
            Charge::Down => Charge::Up,
            Charge::Up => Charge::Down,
        }
    }
}

/// A Schubert class: row lengths, top-box marker and (possibly) a charge.
///
/// For the chain families and `G2` only `r1` is used.  For `OGeven` the rows
/// are the flattened profile; [`Shape::two_layer`] recovers the underlying
/// four-row diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape {
    pub family: Family,
    pub r1: u32,
    pub r2: u32,
    pub on: bool,
    pub charge: Charge,
}

/// The four-row form of an even orthogonal diagram: bottom rows `a1 >= a2`,
/// top rows `b1 >= b2`, plus the top-box marker.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwoLayer {
    pub a1: u32,
    pub a2: u32,
    pub b1: u32,
    pub b2: u32,
    pub on: bool,
}

/// A flattened even orthogonal profile: rows inside the planarized
/// `2 x (2n-4)` rectangle plus the top-box marker, with any charge forgotten.
/// Most profiles name a single class; the ambiguous ones name two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlatShape {
    pub r1: u32,
    pub r2: u32,
    pub on: bool,
}

impl FlatShape {
    pub fn new(r1: u32, r2: u32, on: bool) -> FlatShape {
        FlatShape { r1, r2, on }
    }

    /// Whether the rows fit `OG(2,2n)`: inside the rectangle, weakly
    /// decreasing, and sized compatibly with the marker.
    pub fn valid(self, n: u32) -> bool {
        pre_valid(Family::OGeven { n }, self.r1, self.r2, self.on)
    }

    /// Boxes used, counting the top box.
    pub fn size(self) -> u32 {
        self.r1 + self.r2 + u32::from(self.on)
    }

    /// Whether two classes share this profile.
    pub fn is_ambiguous(self, n: u32) -> bool {
        if self.on {
            self.r2 == n - 2
        } else {
            self.r1 == n - 2
        }
    }

    /// Number of boxes in the middle column of the rectangle, except that the
    /// full-width unmarked square counts one, not two.
    pub fn fsh(self, n: u32) -> u32 {
        if !self.on && self.r1 == n - 2 && self.r2 == n - 2 {
            1
        } else {
            u32::from(self.r1 >= n - 2) + u32::from(self.r2 >= n - 2)
        }
    }

    /// The classes with this profile: one neutral class, or the charged pair.
    pub fn unflatten(self, n: u32) -> Result<Vec<Shape>, RydError> {
        let family = Family::OGeven { n };
        if self.is_ambiguous(n) {
            Ok(vec![
                Shape::with_charge(family, self.r1, self.r2, self.on, Charge::Down)?,
                Shape::with_charge(family, self.r1, self.r2, self.on, Charge::Up)?,
            ])
        } else {
            Ok(vec![Shape::new(family, self.r1, self.r2, self.on)?])
        }
    }

    /// The single class with this profile and charge; the charge must be
    /// neutral exactly when the profile is not ambiguous.
    pub fn resolve(self, n: u32, charge: Charge) -> Result<Shape, RydError> {
        Shape::with_charge(Family::OGeven { n }, self.r1, self.r2, self.on, charge)
    }
}

impl fmt::Display for FlatShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{}|{}",
            self.r1,
            self.r2,
            if self.on { "on" } else { "off" }
        )
    }
}

/// Row/marker constraints that do not involve charges: rows fit in the box,
/// rows are weakly decreasing where required, and the total number of boxes
/// is on the correct side of `(lambda_size - 1) / 2`.
pub(crate) fn pre_valid(family: Family, r1: u32, r2: u32, on: bool) -> bool {
    let half = (family.lambda_size() - 1) / 2;
    if r1 > family.row_len() || r2 > family.row_len() {
        return false;
    }
    if family.num_rows() == 1 && r2 != 0 {
        return false;
    }
    let ordered = match family {
        // The two arms of the flag diagram are independent.
        Family::Flag { .. } => true,
        _ => r2 <= r1,
    };
    if !ordered {
        return false;
    }
    if on {
        r1 + r2 >= half
    } else {
        r1 + r2 <= half
    }
}

/// Whether the rows and marker describe a class of the family (charges are
/// checked separately, by [`Shape::with_charge`]).
pub fn validate_shape(family: Family, r1: u32, r2: u32, on: bool) -> bool {
    family.validate().is_ok() && pre_valid(family, r1, r2, on)
}

impl Shape {
    /// A neutral class; fails when the rows are invalid or a charge is required.
    pub fn new(family: Family, r1: u32, r2: u32, on: bool) -> Result<Shape, RydError> {
        Shape::with_charge(family, r1, r2, on, Charge::Neutral)
    }

    pub fn with_charge(
        family: Family,
        r1: u32,
        r2: u32,
        on: bool,
        charge: Charge,
    ) -> Result<Shape, RydError> {
        family.validate()?;
        let shape = Shape {
            family,
            r1,
            r2,
            on,
            charge,
        };
        shape.check()?;
        Ok(shape)
    }

    /// Neutral class if the rows are valid for the family, otherwise `None`.
    /// Intended for product rules that discard out-of-range terms.
    pub(crate) fn neutral_class(family: Family, r1: u32, r2: u32, on: bool) -> Option<Shape> {
        let shape = Shape {
            family,
            r1,
            r2,
            on,
            charge: Charge::Neutral,
        };
        shape.check().ok().map(|()| shape)
    }

    fn check(&self) -> Result<(), RydError> {
        if !pre_valid(self.family, self.r1, self.r2, self.on) {
            return Err(RydError::InvalidShape(format!(
                "{} is not a diagram for {}",
                self, self.family
            )));
        }
        let ambiguous = self.is_ambiguous();
        match (ambiguous, self.charge) {
            (true, Charge::Neutral) => Err(RydError::InvalidShape(format!(
                "{} needs an up or down charge",
                self
            ))),
            (false, Charge::Up | Charge::Down) => Err(RydError::InvalidShape(format!(
                "{} must be neutral",
                self
            ))),
            _ => Ok(()),
        }
    }

    /// Whether the flattened profile corresponds to two distinct classes.
    pub fn is_ambiguous(&self) -> bool {
        match self.family {
            Family::OGeven { n } => {
                if self.on {
                    self.r2 == n - 2
                } else {
                    self.r1 == n - 2
                }
            }
            _ => false,
        }
    }

    /// Number of boxes, equal to the length of the indexing Weyl group element.
    pub fn size(&self) -> u32 {
        self.r1 + self.r2 + u32::from(self.on)
    }

    /// The same profile with the charge forgotten.
    pub fn neutral(&self) -> Shape {
        Shape {
            charge: Charge::Neutral,
            ..*self
        }
    }

    /// Number of short roots covered by the diagram, counted in the adjoint
    /// member of the dual pair (zero for the simply-laced families).  This is
    /// the exponent driving the rescaling between dual product rules.
    pub fn sh(&self) -> u32 {
        let n = self.family.n();
        match self.family {
            Family::Flag { .. } | Family::OGeven { .. } => 0,
            Family::LG { .. } | Family::OGodd { .. } => {
                // The odd orthogonal rows have their short root at slot n-1.
                u32::from(self.r1 >= n - 1) + u32::from(self.r2 >= n - 1)
            }
            // Every box of the projective-space chain is short.
            Family::ChainB { .. } | Family::ChainC { .. } => self.r1,
            // Slots 2 and 3 of the adjoint G2 row are short.
            Family::G2P1 | Family::G2P2 => {
                u32::from(self.r1 >= 2) + u32::from(self.r1 >= 3)
            }
        }
    }

    /// The corresponding class of the dual space (same rows and marker).
    pub fn dual(&self) -> Shape {
        Shape {
            family: self.family.dual(),
            ..*self
        }
    }

    /// Whether this is a one-row profile of an even orthogonal diagram.
    pub fn is_pieri(&self) -> bool {
        matches!(self.family, Family::OGeven { .. }) && self.r2 == 0
    }

    /// The flattened profile of an even orthogonal class.
    pub fn flatten(&self) -> Result<FlatShape, RydError> {
        match self.family {
            Family::OGeven { .. } => Ok(FlatShape::new(self.r1, self.r2, self.on)),
            _ => Err(RydError::FamilyMismatch(format!(
                "{} does not flatten",
                self.family
            ))),
        }
    }

    /// Four-row form of an even orthogonal class.
    pub fn two_layer(&self) -> Result<TwoLayer, RydError> {
        let Family::OGeven { n } = self.family else {
            return Err(RydError::FamilyMismatch(format!(
                "{} has no four-row form",
                self.family
            )));
        };
        let split = |kappa: u32| -> (u32, u32) {
            if kappa == n - 2 && self.charge != Charge::Neutral {
                match self.charge {
                    Charge::Down => (n - 2, 0),
                    Charge::Up => (n - 3, 1),
                    Charge::Neutral => unreachable!(),
                }
            } else {
                let a = kappa.min(n - 2);
                (a, kappa - a)
            }
        };
        let (a1, b1) = split(self.r1);
        let (a2, b2) = split(self.r2);
        Ok(TwoLayer {
            a1,
            a2,
            b1,
            b2,
            on: self.on,
        })
    }

    /// Rebuilds a class from a four-row diagram, inferring the charge.
    pub fn from_two_layer(family: Family, t: TwoLayer) -> Result<Shape, RydError> {
        let Family::OGeven { n } = family else {
            return Err(RydError::FamilyMismatch(format!(
                "{family} does not use four-row diagrams"
            )));
        };
        family.validate()?;
        let fits = t.a1 <= n - 2 && t.b1 <= n - 2 && t.a1 >= t.a2 && t.b1 >= t.b2;
        let fork = |a: u32, b: u32| (b == 0) || (b == 1 && a >= n - 3) || (b >= 2 && a == n - 2);
        if !(fits && fork(t.a1, t.b1) && fork(t.a2, t.b2)) {
            return Err(RydError::InvalidShape(format!(
                "[{},{}/{},{}] is not a diagram for {family}",
                t.a1, t.a2, t.b1, t.b2
            )));
        }
        let r1 = t.a1 + t.b1;
        let r2 = t.a2 + t.b2;
        let mut charge = Charge::Neutral;
        for (kappa, a) in [(r1, t.a1), (r2, t.a2)] {
            if kappa == n - 2 {
                let c = if a == n - 2 { Charge::Down } else { Charge::Up };
                if charge != Charge::Neutral && charge != c {
                    return Err(RydError::InvalidShape(format!(
                        "[{},{}/{},{}] mixes fork choices",
                        t.a1, t.a2, t.b1, t.b2
                    )));
                }
                charge = c;
            }
        }
        let shape = Shape {
            family,
            r1,
            r2,
            on: t.on,
            charge,
        };
        // Only profiles that require a charge may carry one.
        if !shape.is_ambiguous() {
            charge = Charge::Neutral;
        }
        Shape::with_charge(family, r1, r2, t.on, charge)
    }

    /// Parses the canonical form `r1,r2|marker`, `r|marker` (chains) or
    /// `[a1,a2/b1,b2]|marker`, with an optional `|up` / `|down` suffix.
    pub fn parse(family: Family, input: &str) -> Result<Shape, RydError> {
        let err = || RydError::Parse {
            what: "shape",
            input: input.to_string(),
        };
        let s = input.trim();
        let mut parts = s.split('|').map(str::trim);
        let rows = parts.next().ok_or_else(err)?;
        let marker = parts.next().ok_or_else(err)?;
        let charge = match parts.next() {
            None => Charge::Neutral,
            Some("up") => Charge::Up,
            Some("down") => Charge::Down,
            Some(_) => return Err(err()),
        };
        if parts.next().is_some() {
            return Err(err());
        }
        let on = match marker {
            "on" => true,
            "off" => false,
            _ => return Err(err()),
        };
        if let Some(body) = rows.strip_prefix('[') {
            let body = body.strip_suffix(']').ok_or_else(err)?;
            let (bottom, top) = body.split_once('/').ok_or_else(err)?;
            let parse_pair = |t: &str| -> Result<(u32, u32), RydError> {
                let (x, y) = t.split_once(',').ok_or_else(err)?;
                Ok((
                    x.trim().parse().map_err(|_| err())?,
                    y.trim().parse().map_err(|_| err())?,
                ))
            };
            let (a1, a2) = parse_pair(bottom)?;
            let (b1, b2) = parse_pair(top)?;
            if charge != Charge::Neutral {
                return Err(err());
            }
            return Shape::from_two_layer(
                family,
                TwoLayer {
                    a1,
                    a2,
                    b1,
                    b2,
                    on,
                },
            );
        }
        let (r1, r2) = match rows.split_once(',') {
            Some((x, y)) => (
                x.trim().parse().map_err(|_| err())?,
                y.trim().parse().map_err(|_| err())?,
            ),
            None => (rows.trim().parse().map_err(|_| err())?, 0),
        };
        Shape::with_charge(family, r1, r2, on, charge)
    }

    /// Display form with angle brackets and filled/open top-box marker.
    pub fn angled(&self) -> String {
        let marker = if self.on { "\u{2022}" } else { "\u{2218}" };
        let arrow = match self.charge {
            Charge::Neutral => "",
            Charge::Up => "\u{2191}",
            Charge::Down => "\u{2193}",
        };
        if self.family.num_rows() == 1 {
            format!("\u{27e8}{}|{marker}\u{27e9}{arrow}", self.r1)
        } else {
            format!("\u{27e8}{},{}|{marker}\u{27e9}{arrow}", self.r1, self.r2)
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.family.num_rows() == 1 {
            write!(f, "{}", self.r1)?;
        } else {
            write!(f, "{},{}", self.r1, self.r2)?;
        }
        write!(f, "|{}", if self.on { "on" } else { "off" })?;
        match self.charge {
            Charge::Neutral => Ok(()),
            Charge::Up => write!(f, "|up"),
            Charge::Down => write!(f, "|down"),
        }
    }
}

/// All classes of the family, sorted by degree and then by rows.
pub fn enumerate_shapes(family: Family) -> Result<Vec<Shape>, RydError> {
    family.validate()?;
    let len = family.row_len();
    let mut out = Vec::new();
    for on in [false, true] {
        for r1 in 0..=len {
            let r2max = if family.num_rows() == 1 { 0 } else { len };
            for r2 in 0..=r2max {
                if !pre_valid(family, r1, r2, on) {
                    continue;
                }
                let probe = Shape {
                    family,
                    r1,
                    r2,
                    on,
                    charge: Charge::Neutral,
                };
                if probe.is_ambiguous() {
                    for charge in [Charge::Down, Charge::Up] {
                        out.push(Shape { charge, ..probe });
                    }
                } else {
                    out.push(probe);
                }
            }
        }
    }
    out.sort_by_key(|s| (s.size(), s.r1, s.r2, s.on, s.charge));
    Ok(out)
}

/// Row layout of a family inside its root system: lists of positive-root
/// indices filled from the left, plus the top box.
#[derive(Clone, Debug)]
pub struct Layout {
    pub rows: Vec<Vec<usize>>,
    pub adjoint: usize,
}

/// A family bound to its root system and layout.
pub struct FamilyCtx {
    pub family: Family,
    pub rs: RootSystem,
    pub layout: Layout,
}

fn eidx(rs: &RootSystem, e: &[i64]) -> usize {
    rs.index_by_ecoords(e)
        .unwrap_or_else(|| panic!("{e:?} is not a positive root"))
}

fn build_layout(family: Family, rs: &RootSystem) -> Layout {
    let n = family.n() as i64;
    // Ambient basis vector helpers: i is 1-indexed, negative for minus.
    let dim = match family.sys().0 {
        SysFamily::A => family.n() as usize,
        _ => rs.rank(),
    };
    let vec_of = |terms: &[(i64, i64)]| -> Vec<i64> {
        let mut v = vec![0i64; dim];
        for &(c, i) in terms {
            v[(i - 1) as usize] += c;
        }
        v
    };
    let (rows, adjoint) = match family {
        Family::Flag { .. } => {
            let arm1: Vec<usize> = (2..=n - 1)
                .map(|j| eidx(rs, &vec_of(&[(1, 1), (-1, j)])))
                .collect();
            let arm2: Vec<usize> = (2..=n - 1)
                .rev()
                .map(|i| eidx(rs, &vec_of(&[(1, i), (-1, n)])))
                .collect();
            (vec![arm1, arm2], eidx(rs, &vec_of(&[(1, 1), (-1, n)])))
        }
        Family::LG { .. } | Family::OGodd { .. } => {
            let row = |i: i64| -> Vec<usize> {
                let mut r: Vec<usize> = (3..=n)
                    .map(|j| eidx(rs, &vec_of(&[(1, i), (-1, j)])))
                    .collect();
                // Middle slot: the short root e_i in type B, the long root
                // 2e_i in type C (the dual indexing of the Lagrangian rows).
                match family {
                    Family::OGodd { .. } => r.push(eidx(rs, &vec_of(&[(1, i)]))),
                    Family::LG { .. } => r.push(eidx(rs, &vec_of(&[(2, i)]))),
                    _ => unreachable!(),
                }
                r.extend((3..=n).rev().map(|j| eidx(rs, &vec_of(&[(1, i), (1, j)]))));
                r
            };
            (vec![row(2), row(1)], eidx(rs, &vec_of(&[(1, 1), (1, 2)])))
        }
        Family::OGeven { .. } => {
            let bottom = |i: i64| -> Vec<usize> {
                (3..=n)
                    .map(|j| eidx(rs, &vec_of(&[(1, i), (-1, j)])))
                    .collect()
            };
            let top = |i: i64| -> Vec<usize> {
                (3..=n)
                    .rev()
                    .map(|j| eidx(rs, &vec_of(&[(1, i), (1, j)])))
                    .collect()
            };
            (
                vec![bottom(2), bottom(1), top(2), top(1)],
                eidx(rs, &vec_of(&[(1, 1), (1, 2)])),
            )
        }
        Family::ChainB { .. } => {
            // Coadjoint chain: the short root e_1 is the top box and the row
            // runs through the long roots only, mirroring the dual chain.
            let mut row: Vec<usize> = (2..=n)
                .map(|j| eidx(rs, &vec_of(&[(1, 1), (-1, j)])))
                .collect();
            row.extend((2..=n).rev().map(|j| eidx(rs, &vec_of(&[(1, 1), (1, j)]))));
            (vec![row], eidx(rs, &vec_of(&[(1, 1)])))
        }
        Family::ChainC { .. } => {
            let mut row: Vec<usize> = (2..=n)
                .map(|j| eidx(rs, &vec_of(&[(1, 1), (-1, j)])))
                .collect();
            row.extend((2..=n).rev().map(|j| eidx(rs, &vec_of(&[(1, 1), (1, j)]))));
            (vec![row], eidx(rs, &vec_of(&[(2, 1)])))
        }
        Family::G2P1 => {
            // Coadjoint row: image of the adjoint row under the bijection
            // exchanging short and long roots (the coroot map followed by the
            // diagram swap); the highest short root is the top box.
            let coeffs = [[1, 0], [3, 1], [3, 2], [1, 1]];
            let row: Vec<usize> = coeffs
                .iter()
                .map(|c| rs.index_of(&[c[0], c[1]]).expect("G2 root"))
                .collect();
            (vec![row], rs.index_of(&[2, 1]).expect("G2 short root"))
        }
        Family::G2P2 => {
            let coeffs = [[0, 1], [1, 1], [2, 1], [3, 1]];
            let row: Vec<usize> = coeffs
                .iter()
                .map(|c| rs.index_of(&[c[0], c[1]]).expect("G2 root"))
                .collect();
            (vec![row], rs.index_of(&[3, 2]).expect("G2 highest root"))
        }
    };
    Layout { rows, adjoint }
}

impl FamilyCtx {
    pub fn new(family: Family) -> Result<FamilyCtx, RydError> {
        family.validate()?;
        let (sys, rank) = family.sys();
        let rs = RootSystem::new(sys, rank)?;
        let layout = build_layout(family, &rs);
        Ok(FamilyCtx { family, rs, layout })
    }

    /// Positive-root indices covered by a class's diagram.
    pub fn root_set(&self, shape: &Shape) -> Result<BTreeSet<usize>, RydError> {
        if shape.family != self.family {
            return Err(RydError::FamilyMismatch(format!(
                "shape {} does not belong to {}",
                shape, self.family
            )));
        }
        let mut set = BTreeSet::new();
        let fills: Vec<u32> = match self.family {
            Family::OGeven { .. } => {
                let t = shape.two_layer()?;
                vec![t.a1, t.a2, t.b1, t.b2]
            }
            _ if self.family.num_rows() == 1 => vec![shape.r1],
            _ => vec![shape.r1, shape.r2],
        };
        for (row, &fill) in self.layout.rows.iter().zip(&fills) {
            set.extend(row.iter().take(fill as usize).copied());
        }
        if shape.on {
            set.insert(self.layout.adjoint);
        }
        Ok(set)
    }

    /// Bruhat order on classes, phrased through diagrams: with the same
    /// marker it is containment; an off class precedes an on class when at
    /// most one box of the off diagram is missing from the on diagram and
    /// the total size strictly grows; an on class never precedes an off one.
    pub fn bruhat_leq(&self, a: &Shape, b: &Shape) -> Result<bool, RydError> {
        let sa = self.root_set(a)?;
        let sb = self.root_set(b)?;
        Ok(match (a.on, b.on) {
            (false, false) | (true, true) => sa.is_subset(&sb),
            (false, true) => sa.difference(&sb).count() <= 1 && a.size() < b.size(),
            (true, false) => false,
        })
    }

    /// The bijection between classes and minimal coset representatives.
    pub fn coset_map(&self) -> Result<ShapeCosetMap, RydError> {
        let shapes = enumerate_shapes(self.family)?;
        let reps = minimal_coset_reps(&self.rs, &self.family.marked())?;
        let mut by_inv: std::collections::HashMap<BTreeSet<usize>, WeylElement> = reps
            .into_iter()
            .map(|w| (w.inversion_set(&self.rs), w))
            .collect();
        let mut matched = Vec::with_capacity(shapes.len());
        for shape in &shapes {
            let set = self.root_set(shape)?;
            let w = by_inv.remove(&set).ok_or_else(|| {
                RydError::Invalid(format!(
                    "no coset representative realizes {shape} in {}",
                    self.family
                ))
            })?;
            matched.push(w);
        }
        if !by_inv.is_empty() {
            return Err(RydError::Invalid(format!(
                "{} coset representatives of {} match no diagram",
                by_inv.len(),
                self.family
            )));
        }
        Ok(ShapeCosetMap {
            shapes,
            reps: matched,
        })
    }
}

/// Classes paired with their minimal coset representatives (same indexing).
pub struct ShapeCosetMap {
    pub shapes: Vec<Shape>,
    pub reps: Vec<WeylElement>,
}

impl ShapeCosetMap {
    pub fn index_of(&self, shape: &Shape) -> Option<usize> {
        self.shapes.iter().position(|s| s == shape)
    }

    pub fn rep_of(&self, shape: &Shape) -> Option<&WeylElement> {
        self.index_of(shape).map(|i| &self.reps[i])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_families() -> Vec<Family> {
        vec![
            Family::Flag { n: 5 },
            Family::LG { n: 4 },
            Family::OGodd { n: 4 },
            Family::OGeven { n: 5 },
            Family::ChainB { n: 4 },
            Family::ChainC { n: 4 },
            Family::G2P1,
            Family::G2P2,
        ]
    }

    #[test]
    fn class_counts_match_formulas() {
        for family in [
            Family::Flag { n: 3 },
            Family::Flag { n: 6 },
            Family::LG { n: 2 },
            Family::LG { n: 5 },
            Family::OGodd { n: 2 },
            Family::OGodd { n: 5 },
            Family::OGeven { n: 4 },
            Family::OGeven { n: 7 },
            Family::ChainB { n: 2 },
            Family::ChainB { n: 6 },
            Family::ChainC { n: 6 },
            Family::G2P1,
            Family::G2P2,
        ] {
            let shapes = enumerate_shapes(family).unwrap();
            assert_eq!(shapes.len() as u32, family.num_classes(), "{family}");
            // One class of top degree, one of degree zero.
            assert_eq!(shapes.first().unwrap().size(), 0);
            assert_eq!(
                shapes.last().unwrap().size(),
                family.lambda_size(),
                "{family}"
            );
        }
    }

    #[test]
    fn layouts_cover_lambda_and_climb_by_simple_steps() {
        for family in all_families() {
            let ctx = FamilyCtx::new(family).unwrap();
            let lambda = ctx.rs.lambda_set(&family.marked());
            let mut covered: BTreeSet<usize> = ctx.layout.rows.iter().flatten().copied().collect();
            covered.insert(ctx.layout.adjoint);
            assert_eq!(
                covered,
                lambda.iter().copied().collect::<BTreeSet<_>>(),
                "{family}"
            );
            assert_eq!(
                covered.len() as u32,
                family.lambda_size(),
                "{family} row overlap"
            );
            if family.is_adjoint() {
                // Adjoint top box: the highest root.
                assert_eq!(ctx.layout.adjoint, ctx.rs.highest_root(), "{family}");
                // Consecutive boxes of an adjoint row differ by a simple root.
                for row in &ctx.layout.rows {
                    for pair in row.windows(2) {
                        let lo = ctx.rs.coeffs(pair[0]);
                        let hi = ctx.rs.coeffs(pair[1]);
                        let diff: Vec<i64> = hi.iter().zip(lo).map(|(a, b)| a - b).collect();
                        assert_eq!(diff.iter().sum::<i64>(), 1, "{family}");
                        assert!(diff.iter().all(|&x| x >= 0), "{family}");
                    }
                }
            } else {
                // Coadjoint top box: the highest short root.
                let top = ctx.layout.adjoint;
                assert!(ctx.rs.is_short(top), "{family}");
                for &i in &lambda {
                    if ctx.rs.is_short(i) {
                        assert!(ctx.rs.root_leq(i, top), "{family}");
                    }
                }
            }
        }
    }

    #[test]
    fn diagrams_are_lower_ideals_away_from_the_top_box() {
        for family in all_families() {
            // The Lagrangian and G2 coadjoint rows are indexed through the
            // short/long exchange, which reorders boxes against the root
            // order; their containment statements live on the partner side.
            if matches!(family, Family::LG { .. } | Family::G2P1) {
                continue;
            }
            let ctx = FamilyCtx::new(family).unwrap();
            let lambda = ctx.rs.lambda_set(&family.marked());
            let half = (family.lambda_size() - 1) / 2;
            for shape in enumerate_shapes(family).unwrap() {
                let mut set = ctx.root_set(&shape).unwrap();
                assert_eq!(set.len() as u32, shape.size());
                if shape.on {
                    assert!(shape.size() >= half + 1, "{family} {shape}");
                    set.remove(&ctx.layout.adjoint);
                } else {
                    assert!(shape.size() <= half, "{family} {shape}");
                }
                for &s in &set {
                    for &t in &lambda {
                        if t != ctx.layout.adjoint && ctx.rs.root_leq(t, s) {
                            assert!(set.contains(&t), "{family} {shape}: {t} under {s}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn coset_maps_are_bijections() {
        for family in all_families() {
            let ctx = FamilyCtx::new(family).unwrap();
            let map = ctx.coset_map().unwrap();
            for (shape, rep) in map.shapes.iter().zip(&map.reps) {
                assert_eq!(shape.size() as usize, rep.length(), "{family} {shape}");
            }
        }
    }

    #[test]
    fn two_layer_round_trips() {
        for n in 4..=7 {
            let family = Family::OGeven { n };
            for shape in enumerate_shapes(family).unwrap() {
                let t = shape.two_layer().unwrap();
                let back = Shape::from_two_layer(family, t).unwrap();
                assert_eq!(back, shape);
            }
        }
    }

    #[test]
    fn flattening_collapses_exactly_the_charged_pairs() {
        for n in 4..=7 {
            let family = Family::OGeven { n };
            let shapes = enumerate_shapes(family).unwrap();
            let mut seen = 0usize;
            let mut flats = BTreeSet::new();
            for shape in &shapes {
                let flat = shape.flatten().unwrap();
                assert!(flat.valid(n));
                assert_eq!(flat.size(), shape.size());
                assert_eq!(flat.is_ambiguous(n), shape.is_ambiguous());
                let fiber = flat.unflatten(n).unwrap();
                assert!(fiber.contains(shape));
                assert_eq!(fiber.len(), if shape.is_ambiguous() { 2 } else { 1 });
                seen += 1;
                flats.insert(flat);
            }
            // Each profile size in the middle band is ambiguous exactly once.
            let ambiguous: Vec<_> = flats.iter().filter(|f| f.is_ambiguous(n)).collect();
            assert_eq!(ambiguous.len() as u32, 2 * n - 2);
            let sizes: BTreeSet<u32> = ambiguous.iter().map(|f| f.size()).collect();
            assert_eq!(sizes.len(), ambiguous.len());
            assert_eq!(sizes.first(), Some(&(n - 2)));
            assert_eq!(sizes.last(), Some(&(3 * n - 5)));
            assert_eq!(seen, shapes.len());
        }
    }

    #[test]
    fn middle_column_counts() {
        // OG(2,12): the worked product's inputs both meet the middle column
        // once; the unmarked full-width square is the lone exception, with
        // its two middle boxes counting once.
        let n = 6;
        assert_eq!(FlatShape::new(4, 1, false).fsh(n), 1);
        assert_eq!(FlatShape::new(4, 2, false).fsh(n), 1);
        assert_eq!(FlatShape::new(7, 3, true).fsh(n), 1);
        assert_eq!(FlatShape::new(6, 4, true).fsh(n), 2);
        assert_eq!(FlatShape::new(5, 5, true).fsh(n), 2);
        assert_eq!(FlatShape::new(3, 0, false).fsh(n), 0);
        assert_eq!(FlatShape::new(4, 4, false).fsh(n), 1);
        assert_eq!(FlatShape::new(4, 4, true).fsh(n), 2);
    }

    #[test]
    fn validate_shape_matches_enumeration() {
        for family in all_families() {
            let len = family.row_len();
            let listed: BTreeSet<(u32, u32, bool)> = enumerate_shapes(family)
                .unwrap()
                .into_iter()
                .map(|s| (s.r1, s.r2, s.on))
                .collect();
            for r1 in 0..=len + 1 {
                for r2 in 0..=len + 1 {
                    for on in [false, true] {
                        assert_eq!(
                            validate_shape(family, r1, r2, on),
                            listed.contains(&(r1, r2, on)),
                            "{family} {r1},{r2},{on}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn charged_profiles_from_the_worked_figures() {
        // OG(2,12): bottom rows (3,1) with one top box is the up class of
        // profile (4,1); bottom rows (4,2) alone is the down class of (4,2).
        let family = Family::OGeven { n: 6 };
        let lam = Shape::from_two_layer(
            family,
            TwoLayer {
                a1: 3,
                a2: 1,
                b1: 1,
                b2: 0,
                on: false,
            },
        )
        .unwrap();
        assert_eq!((lam.r1, lam.r2, lam.charge), (4, 1, Charge::Up));
        let mu = Shape::from_two_layer(
            family,
            TwoLayer {
                a1: 4,
                a2: 2,
                b1: 0,
                b2: 0,
                on: false,
            },
        )
        .unwrap();
        assert_eq!((mu.r1, mu.r2, mu.charge), (4, 2, Charge::Down));
    }

    #[test]
    fn parse_and_display_round_trip() {
        for family in all_families() {
            for shape in enumerate_shapes(family).unwrap() {
                let s = shape.to_string();
                assert_eq!(Shape::parse(family, &s).unwrap(), shape, "{family} {s}");
            }
        }
        let family = Family::OGeven { n: 6 };
        let shape = Shape::parse(family, "[3,1/1,0]|off").unwrap();
        assert_eq!(shape.to_string(), "4,1|off|up");
        assert!(Shape::parse(family, "4,1|off").is_err());
        assert!(Shape::parse(family, "3,1|off|up").is_err());
        assert!(Shape::parse(Family::G2P1, "5|off").is_err());
    }

    #[test]
    fn bruhat_order_is_graded_by_covers() {
        for family in all_families() {
            let ctx = FamilyCtx::new(family).unwrap();
            let shapes = enumerate_shapes(family).unwrap();
            for a in &shapes {
                assert!(ctx.bruhat_leq(a, a).unwrap());
                for b in &shapes {
                    let leq = ctx.bruhat_leq(a, b).unwrap();
                    if leq && a != b {
                        assert!(a.size() < b.size() || !ctx.bruhat_leq(b, a).unwrap());
                        assert!(a.size() <= b.size());
                    }
                }
            }
            // The point class lies below everything; the top class above.
            let bottom = &shapes[0];
            let top = shapes.last().unwrap();
            for s in &shapes {
                assert!(ctx.bruhat_leq(bottom, s).unwrap(), "{family} {s}");
                assert!(ctx.bruhat_leq(s, top).unwrap(), "{family} {s}");
            }
        }
    }

    #[test]
    fn short_root_counts_match_diagrams() {
        // The rescaling exponent counts short roots in the adjoint member of
        // the dual pair, so coadjoint families defer to their partner.
        for family in all_families() {
            let counting = if family.is_adjoint() {
                family
            } else {
                family.dual()
            };
            let ctx = FamilyCtx::new(counting).unwrap();
            for shape in enumerate_shapes(family).unwrap() {
                let partner = if family.is_adjoint() {
                    shape
                } else {
                    shape.dual()
                };
                let set = ctx.root_set(&partner).unwrap();
                let shorts = set.iter().filter(|&&i| ctx.rs.is_short(i)).count() as u32;
                assert_eq!(shape.sh(), shorts, "{family} {shape}");
            }
        }
    }
}
