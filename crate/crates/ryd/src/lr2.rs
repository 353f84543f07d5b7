//! Littlewood–Richardson numbers for partitions with at most two rows.
//!
//! Two independent evaluations are provided: a closed form given by four
//! linear conditions, and a direct count of lattice skew tableaux.  The two
//! must always agree; the product rules use the closed form and the tests
//! exercise the tableau count against it.

/// A partition with at most two rows, stored as `(row1, row2)` with
/// `row1 >= row2`.
pub type Partition2 = (u32, u32);

pub fn is_partition(p: Partition2) -> bool {
    p.0 >= p.1
}

/// Closed form for the two-row Littlewood–Richardson number.  The value is
/// `1` exactly when the sizes add up and the three linear bounds hold, and
/// `0` otherwise.
pub fn lr2_coeff(lambda: Partition2, mu: Partition2, nu: Partition2) -> u32 {
    debug_assert!(is_partition(lambda) && is_partition(mu) && is_partition(nu));
    let size_ok = nu.0 + nu.1 == lambda.0 + lambda.1 + mu.0 + mu.1;
    let bounds_ok =
        nu.0 <= lambda.0 + mu.0 && nu.1 <= lambda.0 + mu.1 && nu.1 <= lambda.1 + mu.0;
    u32::from(size_ok && bounds_ok)
}

/// Counts semistandard lattice fillings of the skew diagram `nu / lambda`
/// with content `mu` directly.
pub fn lr2_coeff_tableau(lambda: Partition2, mu: Partition2, nu: Partition2) -> u32 {
    debug_assert!(is_partition(lambda) && is_partition(mu) && is_partition(nu));
    if nu.0 + nu.1 != lambda.0 + lambda.1 + mu.0 + mu.1 {
        return 0;
    }
    if lambda.0 > nu.0 || lambda.1 > nu.1 {
        return 0;
    }
    let len1 = nu.0 - lambda.0;
    let len2 = nu.1 - lambda.1;
    let mut count = 0;
    // Rows weakly increase, so each row is `a` (resp. `b`) ones followed by twos.
    for a in 0..=len1 {
        for b in 0..=len2 {
            if a + b != mu.0 || (len1 - a) + (len2 - b) != mu.1 {
                continue;
            }
            // Columns must increase strictly where both rows are filled.
            let value1 = |c: u32| if c <= lambda.0 + a { 1 } else { 2 };
            let value2 = |c: u32| if c <= lambda.1 + b { 1 } else { 2 };
            let mut ok = (lambda.0 + 1..=nu.1).all(|c| value1(c) < value2(c));
            // The reverse reading word must be a lattice word: scan row 1
            // right to left, then row 2 right to left.
            let mut ones = 0i64;
            let mut twos = 0i64;
            let mut read = |v: u32| {
                if v == 1 {
                    ones += 1;
                } else {
                    twos += 1;
                }
                twos <= ones
            };
            for c in (lambda.0 + 1..=nu.0).rev() {
                ok &= read(value1(c));
            }
            for c in (lambda.1 + 1..=nu.1).rev() {
                ok &= read(value2(c));
            }
            if ok {
                count += 1;
            }
        }
    }
    count
}

/// One-row Littlewood–Richardson number inside a bounded row: `1` exactly
/// when `c = a + b` and `c` fits under the cap `m`.
pub fn lr1_coeff(a: u32, b: u32, c: u32, m: u32) -> u32 {
    u32::from(c == a + b && c <= m)
}

/// Expands the product of two two-row Schur functions over two-row partitions
/// lying in the given box, returning `(nu, coefficient)` pairs with positive
/// coefficients, ordered by decreasing first row.
pub fn lr2_expand(
    lambda: Partition2,
    mu: Partition2,
    bbox: Partition2,
) -> Vec<(Partition2, u32)> {
    let total = lambda.0 + lambda.1 + mu.0 + mu.1;
    let mut out = Vec::new();
    let hi = bbox.0.min(total);
    let lo = total.div_ceil(2);
    for nu1 in (lo..=hi).rev() {
        let nu2 = total - nu1;
        if nu2 > nu1 || nu2 > bbox.1 {
            continue;
        }
        let c = lr2_coeff(lambda, mu, (nu1, nu2));
        if c > 0 {
            out.push(((nu1, nu2), c));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn expansion_of_two_small_shapes() {
        assert_eq!(
            lr2_expand((2, 1), (3, 2), (6, 5)),
            vec![((5, 3), 1), ((4, 4), 1)]
        );
        // The box can truncate the expansion.
        assert_eq!(
            lr2_expand((3, 0), (3, 0), (4, 4)),
            vec![((4, 2), 1), ((3, 3), 1)]
        );
        assert_eq!(lr2_expand((3, 0), (3, 0), (4, 2)), vec![((4, 2), 1)]);
    }

    #[test]
    fn closed_form_matches_tableaux_exhaustively() {
        let parts: Vec<Partition2> = (0..=12u32)
            .flat_map(|r1| (0..=r1).map(move |r2| (r1, r2)))
            .collect();
        for &l in &parts {
            for &m in &parts {
                for &n in &parts {
                    assert_eq!(
                        lr2_coeff(l, m, n),
                        lr2_coeff_tableau(l, m, n),
                        "{l:?} {m:?} {n:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn one_row_products_are_truncated_sums() {
        assert_eq!(lr1_coeff(2, 3, 5, 7), 1);
        assert_eq!(lr1_coeff(2, 3, 4, 7), 0);
        assert_eq!(lr1_coeff(2, 3, 5, 4), 0);
        // Agrees with the two-row count when everything stays in one row.
        for a in 0..6 {
            for b in 0..6 {
                for c in 0..12 {
                    assert_eq!(lr1_coeff(a, b, c, 11), lr2_coeff((a, 0), (b, 0), (c, 0)));
                }
            }
        }
    }

    #[test]
    fn known_small_products() {
        // s_2 * s_2 = s_4 + s_31 + s_22 in two-row terms.
        assert_eq!(lr2_coeff((2, 0), (2, 0), (4, 0)), 1);
        assert_eq!(lr2_coeff((2, 0), (2, 0), (3, 1)), 1);
        assert_eq!(lr2_coeff((2, 0), (2, 0), (2, 2)), 1);
        // s_11 * s_11 has no (3,1) piece.
        assert_eq!(lr2_coeff((1, 1), (1, 1), (3, 1)), 0);
        assert_eq!(lr2_coeff((1, 1), (1, 1), (2, 2)), 1);
    }

    proptest! {
        #[test]
        fn closed_form_matches_tableaux(
            l1 in 0u32..30, dl in 0u32..30,
            m1 in 0u32..30, dm in 0u32..30,
            n1 in 0u32..60, dn in 0u32..60,
        ) {
            let l = (l1.max(dl), l1.min(dl));
            let m = (m1.max(dm), m1.min(dm));
            let n = (n1.max(dn), n1.min(dn));
            prop_assert_eq!(lr2_coeff(l, m, n), lr2_coeff_tableau(l, m, n));
        }

        #[test]
        fn symmetry_in_the_two_factors(
            l1 in 0u32..20, dl in 0u32..20,
            m1 in 0u32..20, dm in 0u32..20,
            n1 in 0u32..40, dn in 0u32..40,
        ) {
            let l = (l1.max(dl), l1.min(dl));
            let m = (m1.max(dm), m1.min(dm));
            let n = (n1.max(dn), n1.min(dn));
            prop_assert_eq!(lr2_coeff(l, m, n), lr2_coeff(m, l, n));
        }
    }
}
