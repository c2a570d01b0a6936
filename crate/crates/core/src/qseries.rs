//! Truncated formal power series in `q` over the integers or `Z/mZ`.
//!
//! A [`Series`] stores the coefficients of `q^0 .. q^{T-1}`; everything past
//! the truncation order is unknown, and binary operations on series of
//! different orders silently work to the smaller one.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::mod_inverse;
use crate::error::{Error, Result};

/// Largest modulus accepted by [`CoefficientRing::ModM`]; keeps residue
/// products inside a `u64`.
pub const MAX_MODULUS: u64 = u32::MAX as u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoefficientRing {
    ExactInteger,
    ModM(u64),
}

impl CoefficientRing {
    /// Validated `Z/mZ`.
    pub fn modulo(m: u64) -> Result<Self> {
        let ring = CoefficientRing::ModM(m);
        ring.validate()?;
        Ok(ring)
    }

    pub fn modulus(&self) -> Option<u64> {
        match *self {
            CoefficientRing::ExactInteger => None,
            CoefficientRing::ModM(m) => Some(m),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            CoefficientRing::ModM(m) if !(2..=MAX_MODULUS).contains(&m) => {
                Err(Error::InvalidModulus(m))
            }
            _ => Ok(()),
        }
    }

    /// Whether residues modulo `m` can be read off this ring.
    pub fn supports_residues_mod(&self, m: u64) -> bool {
        match *self {
            CoefficientRing::ExactInteger => true,
            CoefficientRing::ModM(big) => m >= 1 && big % m == 0,
        }
    }

    /// Short machine tag: `exact` or `mod<m>`.
    pub fn tag(&self) -> String {
        match *self {
            CoefficientRing::ExactInteger => "exact".to_string(),
            CoefficientRing::ModM(m) => format!("mod{m}"),
        }
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientRing::ExactInteger => write!(f, "Z"),
            CoefficientRing::ModM(m) => write!(f, "Z/{m}Z"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Coeffs {
    Exact(Vec<BigInt>),
    Residue { modulus: u64, values: Vec<u64> },
}

/// A truncated power series `c_0 + c_1 q + ... + c_{T-1} q^{T-1} + O(q^T)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Coeffs,
}

fn reduce_bigint(c: &BigInt, m: u64) -> u64 {
    c.mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("residue fits in u64")
}

fn reduce_i64(c: i64, m: u64) -> u64 {
    (c as i128).rem_euclid(m as i128) as u64
}

/// Series with at most this many nonzero terms take the sparse product path.
fn sparse_threshold(order: usize) -> usize {
    4 * (order as f64).sqrt().ceil() as usize
}

impl Series {
    pub fn zero(ring: CoefficientRing, order: usize) -> Result<Self> {
        ring.validate()?;
        Ok(match ring {
            CoefficientRing::ExactInteger => Series {
                coeffs: Coeffs::Exact(vec![BigInt::zero(); order]),
            },
            CoefficientRing::ModM(m) => Series {
                coeffs: Coeffs::Residue {
                    modulus: m,
                    values: vec![0; order],
                },
            },
        })
    }

    /// The constant series `1 + O(q^T)`.
    pub fn one(ring: CoefficientRing, order: usize) -> Result<Self> {
        Self::from_terms(ring, order, &[(0, 1)])
    }

    /// Series with exactly the given `(exponent, coefficient)` terms.
    pub fn from_terms(ring: CoefficientRing, order: usize, terms: &[(usize, i64)]) -> Result<Self> {
        let mut seen = vec![false; order];
        for &(e, _) in terms {
            if e >= order {
                return Err(Error::ExponentOutOfRange { exponent: e, order });
            }
            if std::mem::replace(&mut seen[e], true) {
                return Err(Error::DuplicateExponent(e));
            }
        }
        let mut s = Self::zero(ring, order)?;
        match &mut s.coeffs {
            Coeffs::Exact(v) => {
                for &(e, c) in terms {
                    v[e] = BigInt::from(c);
                }
            }
            Coeffs::Residue { modulus, values } => {
                for &(e, c) in terms {
                    values[e] = reduce_i64(c, *modulus);
                }
            }
        }
        Ok(s)
    }

    /// Dense construction from small integers; the order is the slice length.
    pub fn from_i64s(ring: CoefficientRing, coeffs: &[i64]) -> Result<Self> {
        ring.validate()?;
        Ok(match ring {
            CoefficientRing::ExactInteger => Series {
                coeffs: Coeffs::Exact(coeffs.iter().map(|&c| BigInt::from(c)).collect()),
            },
            CoefficientRing::ModM(m) => Series {
                coeffs: Coeffs::Residue {
                    modulus: m,
                    values: coeffs.iter().map(|&c| reduce_i64(c, m)).collect(),
                },
            },
        })
    }

    pub fn from_bigints(ring: CoefficientRing, coeffs: Vec<BigInt>) -> Result<Self> {
        ring.validate()?;
        Ok(match ring {
            CoefficientRing::ExactInteger => Series {
                coeffs: Coeffs::Exact(coeffs),
            },
            CoefficientRing::ModM(m) => Series {
                coeffs: Coeffs::Residue {
                    modulus: m,
                    values: coeffs.iter().map(|c| reduce_bigint(c, m)).collect(),
                },
            },
        })
    }

    /// Residue series; values are reduced into `[0, m)`.
    pub fn from_residues(m: u64, mut values: Vec<u64>) -> Result<Self> {
        CoefficientRing::ModM(m).validate()?;
        for v in values.iter_mut() {
            *v %= m;
        }
        Ok(Series {
            coeffs: Coeffs::Residue { modulus: m, values },
        })
    }

    pub fn ring(&self) -> CoefficientRing {
        match &self.coeffs {
            Coeffs::Exact(_) => CoefficientRing::ExactInteger,
            Coeffs::Residue { modulus, .. } => CoefficientRing::ModM(*modulus),
        }
    }

    pub fn order(&self) -> usize {
        match &self.coeffs {
            Coeffs::Exact(v) => v.len(),
            Coeffs::Residue { values, .. } => values.len(),
        }
    }

    /// Coefficient of `q^n` (canonical residue in modular rings).
    pub fn coeff(&self, n: usize) -> Option<BigInt> {
        match &self.coeffs {
            Coeffs::Exact(v) => v.get(n).cloned(),
            Coeffs::Residue { values, .. } => values.get(n).map(|&r| BigInt::from(r)),
        }
    }

    pub fn to_bigints(&self) -> Vec<BigInt> {
        match &self.coeffs {
            Coeffs::Exact(v) => v.clone(),
            Coeffs::Residue { values, .. } => values.iter().map(|&r| BigInt::from(r)).collect(),
        }
    }

    /// Coefficients as `i64`, if every one fits.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        match &self.coeffs {
            Coeffs::Exact(v) => v.iter().map(|c| c.to_i64()).collect(),
            Coeffs::Residue { values, .. } => values.iter().map(|&r| i64::try_from(r).ok()).collect(),
        }
    }

    pub fn as_exact(&self) -> Option<&[BigInt]> {
        match &self.coeffs {
            Coeffs::Exact(v) => Some(v),
            Coeffs::Residue { .. } => None,
        }
    }

    pub fn as_residues(&self) -> Option<&[u64]> {
        match &self.coeffs {
            Coeffs::Exact(_) => None,
            Coeffs::Residue { values, .. } => Some(values),
        }
    }

    /// Residue of the coefficient of `q^n` modulo `m`; the ring must
    /// support it (see [`CoefficientRing::supports_residues_mod`]).
    pub fn residue(&self, n: usize, m: u64) -> Option<u64> {
        match &self.coeffs {
            Coeffs::Exact(v) => v.get(n).map(|c| reduce_bigint(c, m)),
            Coeffs::Residue { values, .. } => values.get(n).map(|&r| r % m),
        }
    }

    pub fn nonzero_count(&self) -> usize {
        match &self.coeffs {
            Coeffs::Exact(v) => v.iter().filter(|c| !c.is_zero()).count(),
            Coeffs::Residue { values, .. } => values.iter().filter(|&&r| r != 0).count(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.nonzero_count() == 0
    }

    /// Keep the first `order` coefficients (no-op when already shorter).
    pub fn truncate(&self, order: usize) -> Series {
        let mut out = self.clone();
        match &mut out.coeffs {
            Coeffs::Exact(v) => v.truncate(order),
            Coeffs::Residue { values, .. } => values.truncate(order),
        }
        out
    }

    fn check_same_ring(&self, other: &Series) -> Result<()> {
        if self.ring() != other.ring() {
            return Err(Error::RingMismatch {
                left: self.ring(),
                right: other.ring(),
            });
        }
        Ok(())
    }

    /// First exponent below the common order where the two series differ.
    pub fn first_difference(&self, other: &Series) -> Result<Option<usize>> {
        self.check_same_ring(other)?;
        let t = self.order().min(other.order());
        Ok(match (&self.coeffs, &other.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => (0..t).find(|&i| a[i] != b[i]),
            (Coeffs::Residue { values: a, .. }, Coeffs::Residue { values: b, .. }) => {
                (0..t).find(|&i| a[i] != b[i])
            }
            _ => unreachable!(),
        })
    }

    /// Equality up to the common truncation order.
    pub fn agrees_with(&self, other: &Series) -> Result<bool> {
        Ok(self.first_difference(other)?.is_none())
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.check_same_ring(other)?;
        let t = self.order().min(other.order());
        Ok(match (&self.coeffs, &other.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => Series {
                coeffs: Coeffs::Exact((0..t).map(|i| &a[i] + &b[i]).collect()),
            },
            (Coeffs::Residue { modulus, values: a }, Coeffs::Residue { values: b, .. }) => {
                let m = *modulus;
                Series {
                    coeffs: Coeffs::Residue {
                        modulus: m,
                        values: (0..t).map(|i| (a[i] + b[i]) % m).collect(),
                    },
                }
            }
            _ => unreachable!(),
        })
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        match &self.coeffs {
            Coeffs::Exact(a) => Series {
                coeffs: Coeffs::Exact(a.iter().map(|c| -c).collect()),
            },
            Coeffs::Residue { modulus, values } => {
                let m = *modulus;
                Series {
                    coeffs: Coeffs::Residue {
                        modulus: m,
                        values: values.iter().map(|&r| (m - r) % m).collect(),
                    },
                }
            }
        }
    }

    pub fn scalar_mul(&self, c: &BigInt) -> Series {
        match &self.coeffs {
            Coeffs::Exact(a) => Series {
                coeffs: Coeffs::Exact(a.iter().map(|x| x * c).collect()),
            },
            Coeffs::Residue { modulus, values } => {
                let m = *modulus;
                let c = reduce_bigint(c, m);
                Series {
                    coeffs: Coeffs::Residue {
                        modulus: m,
                        values: values.iter().map(|&r| r * c % m).collect(),
                    },
                }
            }
        }
    }

    pub fn scalar_mul_i64(&self, c: i64) -> Series {
        self.scalar_mul(&BigInt::from(c))
    }

    /// Multiply by `q^k`, keeping the truncation order.
    pub fn shift(&self, k: usize) -> Series {
        let t = self.order();
        let mut out = Series::zero(self.ring(), t).expect("ring already valid");
        match (&self.coeffs, &mut out.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(o)) => {
                if k < t {
                    o[k..].clone_from_slice(&a[..t - k]);
                }
            }
            (Coeffs::Residue { values: a, .. }, Coeffs::Residue { values: o, .. }) => {
                if k < t {
                    o[k..].copy_from_slice(&a[..t - k]);
                }
            }
            _ => unreachable!(),
        }
        out
    }

    /// Truncated Cauchy product. Picks the sparse path when either factor has
    /// at most `4 sqrt(T)` nonzero terms.
    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.check_same_ring(other)?;
        let t = self.order().min(other.order());
        let a = self.truncate(t);
        let b = other.truncate(t);
        let limit = sparse_threshold(t);
        let (na, nb) = (a.nonzero_count(), b.nonzero_count());
        Ok(if na.min(nb) <= limit {
            if na <= nb {
                mul_sparse(&a, &b)
            } else {
                mul_sparse(&b, &a)
            }
        } else {
            mul_dense(&a, &b)
        })
    }

    /// `self^e` by repeated truncated multiplication.
    pub fn pow(&self, e: u32) -> Series {
        let mut acc = Series::one(self.ring(), self.order()).expect("ring already valid");
        if self.order() == 0 {
            return acc;
        }
        for _ in 0..e {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// Multiplicative inverse via the linear recurrence
    /// `b_n = -a_0^{-1} * sum_{i>=1, a_i != 0} a_i b_{n-i}`, costing
    /// `O(T * nnz(a))`.
    pub fn invert(&self) -> Result<Series> {
        let t = self.order();
        if t == 0 {
            return Err(Error::EmptyOrder);
        }
        match &self.coeffs {
            Coeffs::Exact(a) => {
                let a0 = &a[0];
                if !(a0.is_one() || (-a0).is_one()) {
                    return Err(Error::NonUnitConstant {
                        constant: a0.to_string(),
                        gcd: a0.abs().to_string(),
                    });
                }
                let nz: Vec<(usize, &BigInt)> =
                    a.iter().enumerate().skip(1).filter(|(_, c)| !c.is_zero()).collect();
                let mut b: Vec<BigInt> = Vec::with_capacity(t);
                b.push(a0.clone());
                for n in 1..t {
                    let mut acc = BigInt::zero();
                    for &(i, ai) in nz.iter().take_while(|(i, _)| *i <= n) {
                        if !b[n - i].is_zero() {
                            acc += ai * &b[n - i];
                        }
                    }
                    // 1/a0 == a0 for a0 = ±1
                    b.push(-(acc * a0));
                }
                Ok(Series {
                    coeffs: Coeffs::Exact(b),
                })
            }
            Coeffs::Residue { modulus, values: a } => {
                let m = *modulus;
                let inv0 = mod_inverse(a[0], m).map_err(|g| Error::NonUnitConstant {
                    constant: a[0].to_string(),
                    gcd: g.to_string(),
                })?;
                let nz: Vec<(usize, u64)> = a
                    .iter()
                    .enumerate()
                    .skip(1)
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| (i, c))
                    .collect();
                let mut b = vec![0u64; t];
                b[0] = inv0;
                for n in 1..t {
                    let mut acc: u128 = 0;
                    for &(i, ai) in nz.iter().take_while(|(i, _)| *i <= n) {
                        acc += (ai * b[n - i]) as u128;
                    }
                    let s = (acc % m as u128) as u64;
                    b[n] = (m - s) % m * inv0 % m;
                }
                Ok(Series {
                    coeffs: Coeffs::Residue { modulus: m, values: b },
                })
            }
        }
    }

    /// `f(q) -> f(q^d)` at the same truncation order.
    pub fn substitute_power(&self, d: usize) -> Result<Series> {
        if d == 0 {
            return Err(Error::InvalidArgument("substitution power must be >= 1".into()));
        }
        let t = self.order();
        let mut out = Series::zero(self.ring(), t)?;
        match (&self.coeffs, &mut out.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(o)) => {
                for (n, c) in a.iter().enumerate().take_while(|(n, _)| n * d < t) {
                    o[n * d] = c.clone();
                }
            }
            (Coeffs::Residue { values: a, .. }, Coeffs::Residue { values: o, .. }) => {
                for (n, &c) in a.iter().enumerate().take_while(|(n, _)| n * d < t) {
                    o[n * d] = c;
                }
            }
            _ => unreachable!(),
        }
        Ok(out)
    }

    /// `f(q) -> f(-q)`.
    pub fn negate_variable(&self) -> Series {
        let mut out = self.clone();
        match &mut out.coeffs {
            Coeffs::Exact(v) => {
                for c in v.iter_mut().skip(1).step_by(2) {
                    *c = -&*c;
                }
            }
            Coeffs::Residue { modulus, values } => {
                for r in values.iter_mut().skip(1).step_by(2) {
                    *r = (*modulus - *r) % *modulus;
                }
            }
        }
        out
    }

    /// The series `sum_n c_{dn+r} q^n`, of order `ceil((T - r) / d)`.
    pub fn extract_progression(&self, d: usize, r: usize) -> Result<Series> {
        if d == 0 || r >= d {
            return Err(Error::InvalidArgument(format!(
                "progression needs 0 <= r < d, got d={d}, r={r}"
            )));
        }
        Ok(match &self.coeffs {
            Coeffs::Exact(a) => Series {
                coeffs: Coeffs::Exact(a.iter().skip(r).step_by(d).cloned().collect()),
            },
            Coeffs::Residue { modulus, values } => Series {
                coeffs: Coeffs::Residue {
                    modulus: *modulus,
                    values: values.iter().skip(r).step_by(d).copied().collect(),
                },
            },
        })
    }

    /// Reduce into `Z/mZ`. Works from exact series, and from residue series
    /// whose modulus is a multiple of `m`.
    pub fn reduce_mod(&self, m: u64) -> Result<Series> {
        let ring = CoefficientRing::modulo(m)?;
        match &self.coeffs {
            Coeffs::Exact(a) => Ok(Series {
                coeffs: Coeffs::Residue {
                    modulus: m,
                    values: a.iter().map(|c| reduce_bigint(c, m)).collect(),
                },
            }),
            Coeffs::Residue { modulus, values } if modulus % m == 0 => Ok(Series {
                coeffs: Coeffs::Residue {
                    modulus: m,
                    values: values.iter().map(|&r| r % m).collect(),
                },
            }),
            Coeffs::Residue { .. } => Err(Error::RingMismatch {
                left: self.ring(),
                right: ring,
            }),
        }
    }

    /// Binary cache encoding: `QS01`, ring tag (1 = residues), modulus and
    /// order as little-endian `u64`, then one little-endian `u64` per
    /// coefficient. Exact series have no binary form.
    pub fn to_binary(&self) -> Result<Vec<u8>> {
        match &self.coeffs {
            Coeffs::Exact(_) => Err(Error::Format(
                "exact-integer series are only serialized as JSON".into(),
            )),
            Coeffs::Residue { modulus, values } => {
                let mut out = Vec::with_capacity(BINARY_HEADER_LEN + 8 * values.len());
                out.extend_from_slice(BINARY_MAGIC);
                out.push(RING_TAG_RESIDUE);
                out.extend_from_slice(&modulus.to_le_bytes());
                out.extend_from_slice(&(values.len() as u64).to_le_bytes());
                for v in values {
                    out.extend_from_slice(&v.to_le_bytes());
                }
                Ok(out)
            }
        }
    }

    pub fn from_binary(bytes: &[u8]) -> Result<Series> {
        if bytes.len() < BINARY_HEADER_LEN || &bytes[..4] != BINARY_MAGIC {
            return Err(Error::Format("missing QS01 header".into()));
        }
        if bytes[4] != RING_TAG_RESIDUE {
            return Err(Error::Format(format!("unsupported ring tag {}", bytes[4])));
        }
        let word = |at: usize| u64::from_le_bytes(bytes[at..at + 8].try_into().unwrap());
        let modulus = word(5);
        let order = word(13) as usize;
        let body = &bytes[BINARY_HEADER_LEN..];
        if body.len() != order * 8 {
            return Err(Error::Format(format!(
                "expected {} coefficient bytes, found {}",
                order * 8,
                body.len()
            )));
        }
        CoefficientRing::ModM(modulus).validate()?;
        let values: Vec<u64> = body
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        if values.iter().any(|&v| v >= modulus) {
            return Err(Error::Format("non-canonical residue".into()));
        }
        Ok(Series {
            coeffs: Coeffs::Residue { modulus, values },
        })
    }
}

const BINARY_MAGIC: &[u8; 4] = b"QS01";
const RING_TAG_RESIDUE: u8 = 1;
const BINARY_HEADER_LEN: usize = 4 + 1 + 8 + 8;

fn mul_sparse(sparse: &Series, dense: &Series) -> Series {
    let t = sparse.order();
    match (&sparse.coeffs, &dense.coeffs) {
        (Coeffs::Exact(a), Coeffs::Exact(b)) => {
            let mut out = vec![BigInt::zero(); t];
            for (i, ai) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                for j in 0..t - i {
                    if !b[j].is_zero() {
                        out[i + j] += ai * &b[j];
                    }
                }
            }
            Series {
                coeffs: Coeffs::Exact(out),
            }
        }
        (Coeffs::Residue { modulus, values: a }, Coeffs::Residue { values: b, .. }) => {
            let m = *modulus;
            let mut acc = vec![0u128; t];
            for (i, &ai) in a.iter().enumerate().filter(|(_, &c)| c != 0) {
                for j in 0..t - i {
                    acc[i + j] += (ai * b[j]) as u128;
                }
            }
            Series {
                coeffs: Coeffs::Residue {
                    modulus: m,
                    values: acc.into_iter().map(|x| (x % m as u128) as u64).collect(),
                },
            }
        }
        _ => unreachable!(),
    }
}

fn mul_dense(a: &Series, b: &Series) -> Series {
    let t = a.order();
    match (&a.coeffs, &b.coeffs) {
        (Coeffs::Exact(a), Coeffs::Exact(b)) => {
            let out = (0..t)
                .map(|n| {
                    let mut s = BigInt::zero();
                    for i in 0..=n {
                        if !a[i].is_zero() && !b[n - i].is_zero() {
                            s += &a[i] * &b[n - i];
                        }
                    }
                    s
                })
                .collect();
            Series {
                coeffs: Coeffs::Exact(out),
            }
        }
        (Coeffs::Residue { modulus, values: a }, Coeffs::Residue { values: b, .. }) => {
            let m = *modulus;
            let out = (0..t)
                .map(|n| {
                    let s: u128 = (0..=n).map(|i| (a[i] * b[n - i]) as u128).sum();
                    (s % m as u128) as u64
                })
                .collect();
            Series {
                coeffs: Coeffs::Residue { modulus: m, values: out },
            }
        }
        _ => unreachable!(),
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.to_bigints().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if n == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{n}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order())
    }
}

/// JSON form: `{"ring": "exact"|"mod", "modulus"?, "order", "coeffs"}`;
/// exact coefficients are decimal strings.
#[derive(Serialize, Deserialize)]
struct SeriesJson {
    ring: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    modulus: Option<u64>,
    order: usize,
    coeffs: Vec<JsonCoeff>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonCoeff {
    Residue(u64),
    Decimal(String),
}

impl Serialize for Series {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match &self.coeffs {
            Coeffs::Exact(v) => SeriesJson {
                ring: "exact".into(),
                modulus: None,
                order: v.len(),
                coeffs: v.iter().map(|c| JsonCoeff::Decimal(c.to_string())).collect(),
            },
            Coeffs::Residue { modulus, values } => SeriesJson {
                ring: "mod".into(),
                modulus: Some(*modulus),
                order: values.len(),
                coeffs: values.iter().map(|&r| JsonCoeff::Residue(r)).collect(),
            },
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Series {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = SeriesJson::deserialize(deserializer)?;
        if repr.coeffs.len() != repr.order {
            return Err(D::Error::custom("coeffs length differs from order"));
        }
        match (repr.ring.as_str(), repr.modulus) {
            ("exact", None) => {
                let coeffs = repr
                    .coeffs
                    .into_iter()
                    .map(|c| match c {
                        JsonCoeff::Decimal(s) => s
                            .parse::<BigInt>()
                            .map_err(|e| D::Error::custom(format!("bad integer {s:?}: {e}"))),
                        JsonCoeff::Residue(_) => {
                            Err(D::Error::custom("exact coefficients must be strings"))
                        }
                    })
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                Ok(Series {
                    coeffs: Coeffs::Exact(coeffs),
                })
            }
            ("mod", Some(m)) => {
                CoefficientRing::ModM(m)
                    .validate()
                    .map_err(D::Error::custom)?;
                let values = repr
                    .coeffs
                    .into_iter()
                    .map(|c| match c {
                        JsonCoeff::Residue(r) if r < m => Ok(r),
                        _ => Err(D::Error::custom("residues must be integers in [0, m)")),
                    })
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                Ok(Series {
                    coeffs: Coeffs::Residue { modulus: m, values },
                })
            }
            (ring, _) => Err(D::Error::custom(format!("unknown ring {ring:?} or bad modulus"))),
        }
    }
}
