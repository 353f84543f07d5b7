//! Nonvanishing predicates and convexity probes.
//!
//! For the planar families the support of the structure constants is cut
//! out by a short list of linear inequalities in the row data, and
//! [`verify_polytope_description`] checks that description against the
//! product rule over every triple of classes.  The even orthogonal family
//! genuinely has no such description: [`find_nonconvexity_witness`] builds a
//! line of equally spaced lattice points, in a fixed product, on which
//! vanishing alternates.

use crate::amult::multiply;
use crate::dmult::{eta, star};
use crate::shapes::{enumerate_shapes, Charge, Family, Shape, TwoLayer};
use crate::RydError;
use num_traits::Zero;

/// Decides whether the structure constant on `nu` in the product of `lam`
/// and `mu` is nonzero, without expanding the product wherever a direct
/// description exists.
///
/// The two-row planar families use degree and row bounds alone.  The chain
/// families and both exceptional spaces carry one class per degree, so the
/// grading decides.  The even orthogonal family tests the same bounds on
/// the flattened rows, corrected at the boundary by the charge pairing of
/// the factors; products of row classes are evaluated directly because
/// their support is where convexity first fails.
///
/// Both factors must be valid classes.  The target may be any lattice
/// point in the family's format: a point that names no class supports no
/// coefficient and reads back as `false`.
pub fn nonzero_predicate(lam: &Shape, mu: &Shape, nu: &Shape) -> Result<bool, RydError> {
    let family = same_family(lam, mu, nu)?;
    if Shape::with_charge(nu.family, nu.r1, nu.r2, nu.on, nu.charge).is_err() {
        return Ok(false);
    }
    if nu.size() != lam.size() + mu.size() {
        return Ok(false);
    }
    let marker_room = u32::from(lam.on) + u32::from(mu.on) <= u32::from(nu.on);
    Ok(match family {
        Family::Flag { .. } => {
            marker_room && nu.r1 <= lam.r1 + mu.r1 && nu.r2 <= lam.r2 + mu.r2
        }
        Family::LG { .. } | Family::OGodd { .. } => {
            marker_room && horn_rows((lam.r1, lam.r2), (mu.r1, mu.r2), (nu.r1, nu.r2))
        }
        Family::OGeven { n } => ogeven_nonzero(n, lam, mu, nu)?,
        Family::ChainB { .. } | Family::ChainC { .. } | Family::G2P1 | Family::G2P2 => true,
    })
}

/// Row bounds shared by the Lagrangian and odd orthogonal families.
fn horn_rows(lam: (u32, u32), mu: (u32, u32), nu: (u32, u32)) -> bool {
    nu.0 <= lam.0 + mu.0 && nu.1 <= lam.0 + mu.1 && nu.1 <= lam.1 + mu.0
}

fn ogeven_nonzero(n: u32, lam: &Shape, mu: &Shape, nu: &Shape) -> Result<bool, RydError> {
    if lam.is_pieri() || mu.is_pieri() {
        // Row classes follow their own branching into charged targets, so
        // the product itself is the test.
        return Ok(!star(lam, mu)?.coeff(nu).is_zero());
    }
    let (lf, mf, vf) = (lam.flatten()?, mu.flatten()?, nu.flatten()?);
    let bounded = horn_rows((lf.r1, lf.r2), (mf.r1, mf.r2), (vf.r1, vf.r2))
        && u32::from(lf.on) + u32::from(mf.on) <= u32::from(vf.on);
    if vf.r1 == 2 * n - 4 {
        // Targets of full planar width survive exactly when the charges of
        // the factors pair constructively.
        return Ok(bounded && eta(lam, mu) != 0);
    }
    Ok(bounded)
}

fn same_family(lam: &Shape, mu: &Shape, nu: &Shape) -> Result<Family, RydError> {
    for shape in [lam, mu] {
        Shape::with_charge(shape.family, shape.r1, shape.r2, shape.on, shape.charge)?;
    }
    if lam.family != mu.family || lam.family != nu.family {
        return Err(RydError::FamilyMismatch(format!(
            "cannot test {}, {} and {} together",
            lam.family, mu.family, nu.family
        )));
    }
    Ok(lam.family)
}

/// Tally from comparing [`nonzero_predicate`] with the product rule on
/// every triple of classes in one family.
#[derive(Clone, Copy, Debug)]
pub struct PolytopeReport {
    pub family: Family,
    pub triples: u64,
    pub nonzero: u64,
    pub mismatches: u64,
}

/// Exhaustively compares the inequality description of the support with
/// the product rule.  The even orthogonal family is rejected here; its
/// support admits no inequality description, which
/// [`find_nonconvexity_witness`] certifies.
pub fn verify_polytope_description(family: Family) -> Result<PolytopeReport, RydError> {
    if matches!(family, Family::OGeven { .. }) {
        return Err(RydError::FamilyMismatch(format!(
            "{family} has no inequality description to verify"
        )));
    }
    let shapes = enumerate_shapes(family)?;
    let mut report = PolytopeReport {
        family,
        triples: 0,
        nonzero: 0,
        mismatches: 0,
    };
    for lam in &shapes {
        for mu in &shapes {
            let product = multiply(lam, mu)?;
            for nu in &shapes {
                report.triples += 1;
                let hit = !product.coeff(nu).is_zero();
                if hit {
                    report.nonzero += 1;
                }
                if hit != nonzero_predicate(lam, mu, nu)? {
                    report.mismatches += 1;
                }
            }
        }
    }
    Ok(report)
}

/// How a class is written as a lattice point inside a witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Encoding {
    /// Rows followed by the marker bit.
    Rows,
    /// Bottom-layer rows, top-layer rows, marker bit.
    LayerRows,
    /// Bottom-layer column lengths, top-layer column lengths, marker bit.
    LayerColumns,
    /// Flattened rows, marker bit, charge written as a sign.
    FlatCharge,
}

/// Writes one class as an integer vector under the chosen encoding.
///
/// The layer and flattened encodings only exist for even orthogonal
/// classes and error elsewhere.
pub fn encode_shape(shape: &Shape, encoding: Encoding) -> Result<Vec<i64>, RydError> {
    match encoding {
        Encoding::Rows => Ok(vec![
            i64::from(shape.r1),
            i64::from(shape.r2),
            i64::from(shape.on),
        ]),
        Encoding::LayerRows => {
            let t = shape.two_layer()?;
            Ok(vec![
                i64::from(t.a1),
                i64::from(t.a2),
                i64::from(t.b1),
                i64::from(t.b2),
                i64::from(t.on),
            ])
        }
        Encoding::LayerColumns => {
            let t = shape.two_layer()?;
            let Family::OGeven { n } = shape.family else {
                unreachable!("two_layer only succeeds on even orthogonal classes");
            };
            let mut v = columns(t.a1, t.a2, n - 2);
            v.extend(columns(t.b1, t.b2, n - 2));
            v.push(i64::from(t.on));
            Ok(v)
        }
        Encoding::FlatCharge => {
            let f = shape.flatten()?;
            let sign = match shape.charge {
                Charge::Up => 1,
                Charge::Down => -1,
                Charge::Neutral => 0,
            };
            Ok(vec![
                i64::from(f.r1),
                i64::from(f.r2),
                i64::from(f.on),
                sign,
            ])
        }
    }
}

/// Column lengths of a two-row diagram, padded to the given width.
fn columns(r1: u32, r2: u32, width: u32) -> Vec<i64> {
    (1..=width)
        .map(|j| i64::from(u32::from(r1 >= j) + u32::from(r2 >= j)))
        .collect()
}

/// A triple of classes written as one lattice point: the concatenation of
/// the three per-class vectors under a fixed [`Encoding`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleVector {
    pub coords: Vec<i64>,
}

impl TripleVector {
    pub fn new(
        lam: &Shape,
        mu: &Shape,
        nu: &Shape,
        encoding: Encoding,
    ) -> Result<TripleVector, RydError> {
        let mut coords = encode_shape(lam, encoding)?;
        coords.extend(encode_shape(mu, encoding)?);
        coords.extend(encode_shape(nu, encoding)?);
        Ok(TripleVector { coords })
    }
}

/// One point on a witness line: the target class, its lattice coordinates,
/// and whether the structure constant is nonzero there.
#[derive(Clone, Debug)]
pub struct WitnessPoint {
    pub nu: Shape,
    pub triple: TripleVector,
    pub nonzero: bool,
}

/// Equally spaced lattice points, in a fixed product, on which vanishing
/// fails to be convex: no system of linear inequalities in the chosen
/// coordinates can carve out the nonzero set or its complement.
#[derive(Clone, Debug)]
pub struct NonconvexityWitness {
    pub encoding: Encoding,
    pub lam: Shape,
    pub mu: Shape,
    pub points: Vec<WitnessPoint>,
}

impl NonconvexityWitness {
    /// Whether the points are equally spaced along one line.
    pub fn is_collinear(&self) -> bool {
        let steps: Vec<Vec<i64>> = self
            .points
            .windows(2)
            .map(|pair| {
                pair[1]
                    .triple
                    .coords
                    .iter()
                    .zip(&pair[0].triple.coords)
                    .map(|(next, prev)| next - prev)
                    .collect()
            })
            .collect();
        steps.windows(2).all(|adjacent| adjacent[0] == adjacent[1])
    }

    /// Whether vanishing flips between consecutive points.
    pub fn alternates(&self) -> bool {
        self.points
            .windows(2)
            .all(|pair| pair[0].nonzero != pair[1].nonzero)
    }

    /// The zero/nonzero labels in line order.
    pub fn labels(&self) -> Vec<bool> {
        self.points.iter().map(|p| p.nonzero).collect()
    }
}

/// Builds the standard failure of convexity in `OG(2,2n)`: the square of
/// the charged bottom row class, evaluated along equally spaced targets in
/// layer-row coordinates.  The line has four points for `n >= 5` — the
/// nonzero ones sit at even or odd positions according to the parity of
/// `n` — and three points for `n = 4`.
pub fn find_nonconvexity_witness(n: u32) -> Result<NonconvexityWitness, RydError> {
    let family = Family::OGeven { n };
    family.validate()?;
    let lam = Shape::with_charge(family, n - 2, 0, false, Charge::Down)?;
    let top = if n >= 5 { 3 } else { 2 };
    witness_on_line(lam, lam, layer_line(family, n, top)?, Encoding::LayerRows)
}

/// The companion rank-four witness with the labels exchanged: only the
/// midpoint of the same line survives, so the zero locus is not convex
/// either.
pub fn og8_zero_side_witness() -> Result<NonconvexityWitness, RydError> {
    let family = Family::OGeven { n: 4 };
    let lam = Shape::with_charge(family, 2, 0, false, Charge::Down)?;
    let mu = Shape::with_charge(family, 2, 0, false, Charge::Up)?;
    witness_on_line(lam, mu, layer_line(family, 4, 2)?, Encoding::LayerRows)
}

/// A witness in `OG(2,10)` written in column coordinates: three equally
/// spaced targets for a product of neutral classes, with the middle point
/// the only zero.
pub fn og10_column_witness() -> Result<NonconvexityWitness, RydError> {
    let family = Family::OGeven { n: 5 };
    let lam = Shape::new(family, 1, 1, false)?;
    let mu = Shape::new(family, 2, 2, false)?;
    let targets = vec![
        Shape::with_charge(family, 3, 3, false, Charge::Down)?,
        Shape::new(family, 4, 2, false)?,
        Shape::with_charge(family, 3, 3, false, Charge::Up)?,
    ];
    witness_on_line(lam, mu, targets, Encoding::LayerColumns)
}

/// A witness in `OG(2,10)` written in flattened coordinates with a charge
/// sign: two oppositely charged row classes whose product hits the ends of
/// a line but not its midpoint.
pub fn og10_flat_witness() -> Result<NonconvexityWitness, RydError> {
    let family = Family::OGeven { n: 5 };
    let lam = Shape::with_charge(family, 3, 0, false, Charge::Up)?;
    let mu = Shape::with_charge(family, 3, 0, false, Charge::Down)?;
    let targets = vec![
        Shape::new(family, 6, 0, false)?,
        Shape::new(family, 5, 1, false)?,
        Shape::new(family, 4, 2, false)?,
    ];
    witness_on_line(lam, mu, targets, Encoding::FlatCharge)
}

/// Targets `[n-2, k / n-2-k, 0]` for `k = 0..=top`: one degree, stepping a
/// box from the top layer down to the bottom layer.
fn layer_line(family: Family, n: u32, top: u32) -> Result<Vec<Shape>, RydError> {
    (0..=top)
        .map(|k| {
            Shape::from_two_layer(
                family,
                TwoLayer {
                    a1: n - 2,
                    a2: k,
                    b1: n - 2 - k,
                    b2: 0,
                    on: false,
                },
            )
        })
        .collect()
}

fn witness_on_line(
    lam: Shape,
    mu: Shape,
    targets: Vec<Shape>,
    encoding: Encoding,
) -> Result<NonconvexityWitness, RydError> {
    let product = star(&lam, &mu)?;
    let mut points = Vec::with_capacity(targets.len());
    for nu in targets {
        let triple = TripleVector::new(&lam, &mu, &nu, encoding)?;
        let nonzero = !product.coeff(&nu).is_zero();
        points.push(WitnessPoint {
            nu,
            triple,
            nonzero,
        });
    }
    Ok(NonconvexityWitness {
        encoding,
        lam,
        mu,
        points,
    })
}
