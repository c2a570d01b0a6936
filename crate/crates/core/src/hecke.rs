//! Half-integral weight Hecke operators `T_{k/2,N}(ℓ²)` acting on
//! q-expansions, with the quadratic symbols they need.

use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use serde::Serialize;

use crate::arith::{ensure_odd_prime, gcd, mod_pow};
use crate::error::{Error, Result};
use crate::qseries::Series;

/// Legendre symbol `(a/ℓ)` by Euler's criterion.
pub fn legendre(a: i64, ell: u64) -> Result<i8> {
    ensure_odd_prime(ell)?;
    let r = (a as i128).rem_euclid(ell as i128) as u64;
    if r == 0 {
        return Ok(0);
    }
    Ok(if mod_pow(r, (ell - 1) / 2, ell) == 1 { 1 } else { -1 })
}

/// Jacobi symbol `(a/n)` for odd `n > 0`, by quadratic reciprocity.
pub fn jacobi(a: i64, n: u64) -> Result<i8> {
    if n % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "Jacobi symbol needs an odd positive modulus, got {n}"
        )));
    }
    let mut a = (a as i128).rem_euclid(n as i128) as u64;
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    Ok(if n == 1 { sign } else { 0 })
}

/// Weight `k/2`, level `N`, and the prime `ℓ` of `T_{k/2,N}(ℓ²)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HeckeParams {
    k: u32,
    level: u64,
    ell: u64,
}

impl HeckeParams {
    pub fn new(k: u32, level: u64, ell: u64) -> Result<Self> {
        if k % 2 == 0 {
            return Err(Error::InvalidArgument(format!("weight numerator k={k} must be odd")));
        }
        if level == 0 || level % 4 != 0 {
            return Err(Error::InvalidArgument(format!("level {level} must be a multiple of 4")));
        }
        ensure_odd_prime(ell)?;
        if gcd(ell, level) != 1 {
            return Err(Error::InvalidArgument(format!("ℓ={ell} divides the level {level}")));
        }
        Ok(HeckeParams { k, level, ell })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    /// `(-1)^{(k-1)/2}`, the sign twisting the character.
    fn character_sign(&self) -> i64 {
        if (self.k - 1) / 2 % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// Number of coefficients of `f | T(ℓ²)` determined by `order` input terms.
pub fn hecke_output_order(order: usize, ell: u64) -> usize {
    let l2 = (ell * ell) as usize;
    (order.saturating_sub(1)) / l2 + 1
}

/// Coefficient `n` of `f | T(ℓ²)` is
/// `a(ℓ²n) + χ(n) ℓ^{(k-3)/2} a(n) + ℓ^{k-2} a(n/ℓ²)` with
/// `χ(n) = ((-1)^{(k-1)/2} n / ℓ)` and `a(n/ℓ²) = 0` unless `ℓ² | n`.
///
/// Needs `k >= 3` so that the powers of `ℓ` are integral.
pub fn hecke_apply(f: &Series, p: &HeckeParams) -> Result<Series> {
    if p.k < 3 {
        return Err(Error::InvalidArgument(
            "weight 1/2 has a non-integral ℓ^{-1} factor; need k >= 3".into(),
        ));
    }
    let ell = p.ell;
    let l2 = (ell * ell) as usize;
    if f.order() < l2 {
        return Err(Error::InvalidArgument(format!(
            "series order {} is below ℓ² = {l2}; no coefficient is computable",
            f.order()
        )));
    }
    let a = f.to_bigints();
    let out_order = hecke_output_order(f.order(), ell);
    let mid = BigInt::from(ell).pow((p.k - 3) / 2);
    let top = BigInt::from(ell).pow(p.k - 2);
    let sign = p.character_sign();
    let mut out = Vec::with_capacity(out_order);
    for n in 0..out_order {
        let mut c = a[l2 * n].clone();
        let chi = legendre(sign * n as i64, ell)?;
        if chi != 0 && !a[n].is_zero() {
            let t = &mid * &a[n];
            if chi > 0 {
                c += t;
            } else {
                c -= t;
            }
        }
        if n % l2 == 0 {
            c += &top * &a[n / l2];
        }
        out.push(c);
    }
    Series::from_bigints(f.ring(), out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenReport {
    pub ell: u64,
    #[serde(rename = "lambda")]
    pub eigenvalue: i64,
    #[serde(rename = "order")]
    pub residual_order: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<usize>,
}

/// Checks `f | T(ℓ²) = λ f` through the output order of [`hecke_apply`].
pub fn eigenform_check(f: &Series, p: &HeckeParams, lambda: i64) -> Result<EigenReport> {
    let image = hecke_apply(f, p)?;
    let scaled = f.truncate(image.order()).scalar_mul_i64(lambda);
    let residual = image.sub(&scaled)?;
    let first_failure = (0..residual.order()).find(|&n| !residual.coeff(n).unwrap().is_zero());
    Ok(EigenReport {
        ell: p.ell,
        eigenvalue: lambda,
        residual_order: residual.order(),
        pass: first_failure.is_none(),
        first_failure,
    })
}

/// `dim M_{k/2}(Γ̃₀(4)) = 1 + ⌊k/4⌋` for odd `k`.
pub fn dim_half_integral(k: u32) -> Result<u32> {
    if k % 2 == 0 {
        return Err(Error::InvalidArgument(format!("k={k} must be odd")));
    }
    Ok(1 + k / 4)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoefficientIdentity {
    pub n: usize,
    pub ell: u64,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

/// Weight 3/2 coefficient identity
/// `a(ℓ²n) + (-n/ℓ) a(n) + ℓ a(n/ℓ²) = (ℓ+1) a(n)` for an exact series `a`.
pub fn hecke_coefficient_identity(n: usize, ell: u64, a: &Series) -> Result<CoefficientIdentity> {
    ensure_odd_prime(ell)?;
    let coeffs = a.as_exact().ok_or(Error::ExpectedExact(a.ring()))?;
    let l2 = (ell * ell) as usize;
    let needed = l2 * n + 1;
    if coeffs.len() < needed {
        return Err(Error::TableTooShort {
            required: needed,
            available: coeffs.len(),
        });
    }
    let chi = legendre(-(n as i64), ell)?;
    let mut lhs = coeffs[l2 * n].clone() + BigInt::from(chi) * &coeffs[n];
    if n % l2 == 0 {
        lhs += BigInt::from(ell) * &coeffs[n / l2];
    }
    let rhs = BigInt::from(ell + 1) * &coeffs[n];
    Ok(CoefficientIdentity {
        n,
        ell,
        pass: lhs == rhs,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::CoefficientRing;
    use crate::theta::{theta_series, ThetaKind};

    const Z: CoefficientRing = CoefficientRing::ExactInteger;

    fn phi3(kind: ThetaKind, order: usize) -> Series {
        theta_series(kind, Z, order).unwrap().pow(3)
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(1, 5).unwrap(), 1);
        assert_eq!(legendre(2, 5).unwrap(), -1);
        assert_eq!(legendre(-1, 5).unwrap(), 1);
        assert_eq!(legendre(-1, 3).unwrap(), -1);
        assert_eq!(legendre(0, 7).unwrap(), 0);
        assert_eq!(legendre(14, 7).unwrap(), 0);
        assert!(matches!(legendre(1, 9), Err(Error::NotOddPrime(9))));
        assert!(matches!(legendre(1, 2), Err(Error::NotOddPrime(2))));
    }

    #[test]
    fn legendre_matches_squares_and_jacobi() {
        for ell in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            let squares: Vec<u64> = (1..ell).map(|x| x * x % ell).collect();
            for a in -40i64..40 {
                let r = a.rem_euclid(ell as i64) as u64;
                let brute = if r == 0 {
                    0
                } else if squares.contains(&r) {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre(a, ell).unwrap(), brute, "({a}/{ell})");
                assert_eq!(jacobi(a, ell).unwrap(), brute);
            }
        }
        assert_eq!(jacobi(2, 15).unwrap(), 1);
        assert_eq!(jacobi(3, 15).unwrap(), 0);
        assert!(jacobi(3, 8).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(HeckeParams::new(3, 4, 3).is_ok());
        assert!(HeckeParams::new(3, 16, 5).is_ok());
        assert!(HeckeParams::new(2, 4, 3).is_err());
        assert!(HeckeParams::new(3, 6, 5).is_err());
        assert!(matches!(HeckeParams::new(3, 4, 9), Err(Error::NotOddPrime(9))));
        assert!(HeckeParams::new(3, 12, 3).is_err());
    }

    #[test]
    fn phi_cubed_is_an_eigenform() {
        let f = phi3(ThetaKind::PhiPlus, 2000);
        let p = HeckeParams::new(3, 4, 3).unwrap();
        let image = hecke_apply(&f, &p).unwrap();
        assert_eq!(image.order(), hecke_output_order(2000, 3));
        assert!(image.agrees_with(&f.scalar_mul_i64(4)).unwrap());
        let r = eigenform_check(&f, &HeckeParams::new(3, 4, 5).unwrap(), 6).unwrap();
        assert!(r.pass);
        let g = phi3(ThetaKind::PhiMinus, 2000);
        let r = eigenform_check(&g, &HeckeParams::new(3, 16, 7).unwrap(), 8).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn wrong_eigenvalue_fails_at_zero() {
        let f = phi3(ThetaKind::PhiPlus, 1000);
        let r = eigenform_check(&f, &HeckeParams::new(3, 4, 5).unwrap(), 5).unwrap();
        assert!(!r.pass);
        assert_eq!(r.first_failure, Some(0));
    }

    #[test]
    fn constant_term() {
        let f = phi3(ThetaKind::PhiPlus, 100);
        for ell in [3u64, 5, 7] {
            let image = hecke_apply(&f, &HeckeParams::new(3, 4, ell).unwrap()).unwrap();
            assert_eq!(image.coeff(0).unwrap(), BigInt::from(1 + ell));
        }
    }

    #[test]
    fn short_input_rejected() {
        let f = phi3(ThetaKind::PhiPlus, 24);
        assert!(hecke_apply(&f, &HeckeParams::new(3, 4, 5).unwrap()).is_err());
        assert!(hecke_apply(&f, &HeckeParams::new(1, 4, 3).unwrap()).is_err());
    }

    #[test]
    fn dimensions() {
        assert_eq!(dim_half_integral(3).unwrap(), 1);
        assert_eq!(dim_half_integral(1).unwrap(), 1);
        assert_eq!(dim_half_integral(5).unwrap(), 2);
        assert!(dim_half_integral(4).is_err());
    }

    #[test]
    fn coefficient_identity_examples() {
        let a = phi3(ThetaKind::PhiMinus, 60);
        assert_eq!(a.coeff(1).unwrap(), BigInt::from(-6));
        for ell in [3u64, 5] {
            assert!(hecke_coefficient_identity(0, ell, &a).unwrap().pass);
        }
        let r = hecke_coefficient_identity(1, 3, &a).unwrap();
        assert!(r.pass);
        assert_eq!(r.rhs, "-24");
        assert!(hecke_coefficient_identity(2, 5, &a).unwrap().pass);
        assert!(matches!(
            hecke_coefficient_identity(3, 5, &a),
            Err(Error::TableTooShort { required: 76, .. })
        ));
    }
}
