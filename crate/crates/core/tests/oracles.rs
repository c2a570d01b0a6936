//! Table values checked against independent computations.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use overpart_core::congruence::density_report;
use overpart_core::hecke::dim_half_integral;
use overpart_core::overpartition::{mod8_truncation, two_adic_value};
use overpart_core::squares::{c1_c2_quadruple_check, squares_table};
use overpart_core::{overpartition_table, theta_series, CoefficientRing, Method, ThetaKind};

const Z: CoefficientRing = CoefficientRing::ExactInteger;

/// Every overpartition of `n`, listed explicitly: a partition plus a choice
/// of which distinct part sizes carry an overline on their first copy.
fn list_overpartitions(n: usize) -> Vec<Vec<(usize, bool)>> {
    fn partitions(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in (1..=max.min(n)).rev() {
            prefix.push(p);
            partitions(n - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut parts = Vec::new();
    partitions(n, n, &mut Vec::new(), &mut parts);
    let mut out = Vec::new();
    for p in parts {
        let mut sizes = p.clone();
        sizes.dedup();
        for mask in 0u32..(1 << sizes.len()) {
            let overlined = |s: usize| mask >> sizes.iter().position(|&x| x == s).unwrap() & 1 == 1;
            let mut seen = Vec::new();
            let marked = p
                .iter()
                .map(|&s| {
                    let first = !seen.contains(&s);
                    seen.push(s);
                    (s, first && overlined(s))
                })
                .collect();
            out.push(marked);
        }
    }
    out
}

#[test]
fn explicit_listing_of_overpartitions() {
    let table = overpartition_table(Z, 21, Method::Enumeration).unwrap();
    for n in 0..=20 {
        let listed = list_overpartitions(n);
        let mut dedup = listed.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), listed.len(), "duplicates at n={n}");
        assert_eq!(BigInt::from(listed.len()), table.value(n as i64).unwrap(), "n={n}");
    }
    // the eight overpartitions of 3
    assert_eq!(list_overpartitions(3).len(), 8);
}

#[test]
fn enumeration_cap() {
    assert!(overpartition_table(Z, 64, Method::Enumeration).is_ok());
    assert!(overpartition_table(Z, 65, Method::Enumeration).is_err());
}

#[test]
fn methods_agree_in_residue_rings() {
    for m in [2u64, 5, 8, 120, 1 << 31] {
        let reference = overpartition_table(Z, 400, Method::ThetaInversion)
            .unwrap()
            .series()
            .reduce_mod(m)
            .unwrap();
        for method in [Method::ThetaInversion, Method::EulerProduct, Method::TwoAdic] {
            let t = overpartition_table(CoefficientRing::ModM(m), 400, method).unwrap();
            assert_eq!(t.series(), &reference, "{method} mod {m}");
        }
    }
}

#[test]
fn two_adic_sum_from_stored_table() {
    let pbar = overpartition_table(Z, 151, Method::EulerProduct).unwrap();
    let squares = squares_table(150, 151).unwrap();
    for n in 1..=150 {
        assert_eq!(two_adic_value(n, &squares).unwrap(), pbar.value(n as i64).unwrap(), "n={n}");
    }
    assert!(two_adic_value(0, &squares).is_err());
    assert!(two_adic_value(151, &squares).is_err());
}

#[test]
fn mod8_truncation_matches_table() {
    let t = 100_001;
    let pbar = overpartition_table(CoefficientRing::ModM(8), t, Method::ThetaInversion).unwrap();
    let squares = squares_table(2, t).unwrap();
    for n in 1..t {
        assert_eq!(mod8_truncation(n, &squares).unwrap(), pbar.residue(n as i64, 8).unwrap(), "n={n}");
    }
}

#[test]
fn representation_counts_are_stable_under_quadrupling() {
    let r = c1_c2_quadruple_check(10_001).unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn family_g_applied_twice() {
    // p̄(n) ≡ (-1)^n p̄(4n) and 4n is even, so p̄(n) ≡ (-1)^n p̄(16n) (mod 8).
    // The sign only drops out for even n: p̄(1) = 2 while p̄(16) ≡ 6.
    let t = pbar_mod(8, 16 * 60_000 + 1);
    for n in 0..=60_000i64 {
        let lhs = t.residue(n, 8).unwrap();
        let rhs = t.residue(16 * n, 8).unwrap();
        let expected = if n % 2 == 0 { rhs } else { (8 - rhs) % 8 };
        assert_eq!(lhs, expected, "n={n}");
    }
    assert_ne!(t.residue(1, 8).unwrap(), t.residue(16, 8).unwrap());
}

fn pbar_mod(m: u64, order: usize) -> overpart_core::CoeffTable {
    overpartition_table(CoefficientRing::ModM(m), order, Method::ThetaInversion).unwrap()
}

#[test]
fn every_positive_value_is_even() {
    let t = pbar_mod(2, 10_001);
    let r = density_report(&t, 2, 10_000).unwrap();
    assert_eq!(r.zeros, 10_000);
    assert!(r.fraction >= 0.99);
    let small = density_report(&pbar_mod(64, 11), 64, 10).unwrap();
    assert!((0.0..=1.0).contains(&small.fraction));
}

#[test]
fn phi_cubed_counts_signed_representations() {
    // r_3(n): ordered triples of integers with x² + y² + z² = n
    let order = 200;
    let cube = theta_series(ThetaKind::PhiPlus, Z, order).unwrap().pow(3);
    for n in 0..order as i64 {
        let b = (n as f64).sqrt() as i64 + 1;
        let mut count = 0i64;
        for x in -b..=b {
            for y in -b..=b {
                for z in -b..=b {
                    count += (x * x + y * y + z * z == n) as i64;
                }
            }
        }
        assert_eq!(cube.coeff(n as usize).unwrap().to_i64(), Some(count), "n={n}");
    }
}

#[test]
fn dimension_formula() {
    assert_eq!(dim_half_integral(3).unwrap(), 1);
    assert_eq!(dim_half_integral(5).unwrap(), 2);
    assert_eq!(dim_half_integral(9).unwrap(), 3);
    assert!(dim_half_integral(4).is_err());
}
