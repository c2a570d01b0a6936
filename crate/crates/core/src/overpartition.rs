//! Overpartition counts `p̄(n)`.
//!
//! Four independent constructions are available:
//!
//! * [`Method::ThetaInversion`] inverts `φ(-q)` with the sparse recurrence
//!   `p̄(n) = Σ_{j≥1} 2(-1)^{j+1} p̄(n - j²)`. This is the production path.
//! * [`Method::EulerProduct`] expands `Π_{k≥1} (1 + q^k)/(1 - q^k)` one factor
//!   at a time.
//! * [`Method::Enumeration`] counts overpartitions directly by dynamic
//!   programming over the largest part.
//! * [`Method::TwoAdic`] sums `Σ_k 2^k (-1)^{n+k} c_k(n)` over the rows of the
//!   squares table.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qseries::{CoefficientRing, Series};
use crate::squares::{SquareRows, SquaresTable};
use crate::theta::{theta_series, ThetaKind};

/// Largest order accepted by [`Method::Enumeration`].
pub const ENUMERATION_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ThetaInversion,
    EulerProduct,
    Enumeration,
    TwoAdic,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::ThetaInversion,
        Method::EulerProduct,
        Method::Enumeration,
        Method::TwoAdic,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::ThetaInversion => "theta-inversion",
            Method::EulerProduct => "euler-product",
            Method::Enumeration => "enumeration",
            Method::TwoAdic => "two-adic",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .or(match s {
                "theta" => Some(Method::ThetaInversion),
                "euler" => Some(Method::EulerProduct),
                "enum" => Some(Method::Enumeration),
                _ => None,
            })
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method {s:?}")))
    }
}

/// A named integer sequence together with how it was produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffTable {
    pub name: String,
    pub method: Method,
    series: Series,
}

impl CoeffTable {
    pub fn new(name: impl Into<String>, method: Method, series: Series) -> Self {
        CoeffTable {
            name: name.into(),
            method,
            series,
        }
    }

    pub fn ring(&self) -> CoefficientRing {
        self.series.ring()
    }

    pub fn len(&self) -> usize {
        self.series.order()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn series(&self) -> &Series {
        &self.series
    }

    pub fn into_series(self) -> Series {
        self.series
    }

    /// Value at `n`; zero for negative `n`, `None` past the end.
    pub fn value(&self, n: i64) -> Option<BigInt> {
        if n < 0 {
            return Some(BigInt::zero());
        }
        self.series.coeff(n as usize)
    }

    /// Residue modulo `m` at `n`; zero for negative `n`.
    pub fn residue(&self, n: i64, m: u64) -> Result<u64> {
        if !self.ring().supports_residues_mod(m) {
            return Err(Error::IncompatibleModulus {
                table: self.ring(),
                modulus: m,
            });
        }
        if n < 0 {
            return Ok(0);
        }
        self.series.residue(n as usize, m).ok_or(Error::TableTooShort {
            required: n as usize + 1,
            available: self.len(),
        })
    }

    /// CSV with header `n,value`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(["n", "value"])?;
        for (n, v) in self.series.to_bigints().iter().enumerate() {
            w.write_record([n.to_string(), v.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `p̄(0), ..., p̄(order - 1)` in `ring`.
pub fn overpartition_table(ring: CoefficientRing, order: usize, method: Method) -> Result<CoeffTable> {
    ring.validate()?;
    if order == 0 {
        return Err(Error::EmptyOrder);
    }
    let series = match method {
        Method::ThetaInversion => theta_series(ThetaKind::PhiMinus, ring, order)?.invert()?,
        Method::EulerProduct => euler_product(ring, order)?,
        Method::Enumeration => {
            if order > ENUMERATION_CAP {
                return Err(Error::EnumerationCap {
                    cap: ENUMERATION_CAP,
                    requested: order,
                });
            }
            Series::from_bigints(ring, enumerate_counts(order))?
        }
        Method::TwoAdic => Series::from_bigints(ring, two_adic_values(order))?,
    };
    Ok(CoeffTable::new("pbar", method, series))
}

fn euler_product(ring: CoefficientRing, order: usize) -> Result<Series> {
    match ring {
        CoefficientRing::ExactInteger => {
            let mut b = vec![BigInt::zero(); order];
            b[0] = BigInt::from(1);
            for k in 1..order {
                // multiply by (1 + q^k): descending so each term is used once
                for n in (k..order).rev() {
                    let (lo, hi) = b.split_at_mut(n);
                    if !lo[n - k].is_zero() {
                        hi[0] += &lo[n - k];
                    }
                }
                // divide by (1 - q^k): ascending accumulates the geometric series
                for n in k..order {
                    let (lo, hi) = b.split_at_mut(n);
                    if !lo[n - k].is_zero() {
                        hi[0] += &lo[n - k];
                    }
                }
            }
            Series::from_bigints(ring, b)
        }
        CoefficientRing::ModM(m) => {
            let mut b = vec![0u64; order];
            b[0] = 1 % m;
            for k in 1..order {
                for n in (k..order).rev() {
                    b[n] = (b[n] + b[n - k]) % m;
                }
                for n in k..order {
                    b[n] = (b[n] + b[n - k]) % m;
                }
            }
            Series::from_residues(m, b)
        }
    }
}

/// Counts by largest part: `N(n, k) = N(n, k-1) + 2 Σ_{j≥1} N(n - jk, k-1)`,
/// the factor 2 choosing whether the first copy of `k` is overlined.
fn enumerate_counts(order: usize) -> Vec<BigInt> {
    let mut prev = vec![0u128; order];
    prev[0] = 1;
    for k in 1..order {
        let mut cur = prev.clone();
        for n in k..order {
            let mut j = 1;
            while j * k <= n {
                cur[n] += 2 * prev[n - j * k];
                j += 1;
            }
        }
        prev = cur;
    }
    prev.into_iter().map(BigInt::from).collect()
}

/// `1, then Σ_{k=1}^{n} 2^k (-1)^{n+k} c_k(n)` for `n < order`, streaming
/// the squares rows.
fn two_adic_values(order: usize) -> Vec<BigInt> {
    let mut acc = vec![BigInt::zero(); order];
    acc[0] = BigInt::from(1);
    let mut rows = SquareRows::new(order);
    for k in 1..order {
        let row = rows.advance();
        for (n, c) in row.iter().enumerate().skip(k) {
            if c.is_zero() {
                continue;
            }
            let term = BigInt::from(c << k);
            if (n + k) % 2 == 0 {
                acc[n] += term;
            } else {
                acc[n] -= term;
            }
        }
    }
    acc
}

/// `Σ_{k=1}^{n} 2^k (-1)^{n+k} c_k(n)`; the table must hold rows up to `k = n`.
pub fn two_adic_value(n: usize, squares: &SquaresTable) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "the 2-adic sum starts at n = 1; p̄(0) = 1 separately".into(),
        ));
    }
    let mut total = BigInt::zero();
    for k in 1..=n {
        let c: &BigUint = squares.require(k, n)?;
        let term = BigInt::from(c << k);
        if (n + k) % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total)
}

/// `(-1)^n (-2 c_1(n) + 4 c_2(n)) mod 8`.
pub fn mod8_truncation(n: usize, squares: &SquaresTable) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("mod 8 truncation is defined for n >= 1".into()));
    }
    let eight = BigUint::from(8u32);
    let c1 = squares.require(1, n)? % &eight;
    let c2 = squares.require(2, n)? % &eight;
    let c1 = u64::try_from(&c1).unwrap();
    let c2 = u64::try_from(&c2).unwrap();
    // -2c1 + 4c2 mod 8, with -2c1 ≡ 6c1
    let v = (6 * c1 + 4 * c2) % 8;
    Ok(if n % 2 == 0 { v } else { (8 - v) % 8 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::squares::squares_table;

    const Z: CoefficientRing = CoefficientRing::ExactInteger;

    fn ints(t: &CoeffTable) -> Vec<i64> {
        t.series().to_i64s().unwrap()
    }

    #[test]
    fn every_method_gives_small_values() {
        for method in Method::ALL {
            assert_eq!(ints(&overpartition_table(Z, 4, method).unwrap()), vec![1, 2, 4, 8]);
            assert_eq!(
                ints(&overpartition_table(Z, 6, method).unwrap()),
                vec![1, 2, 4, 8, 14, 24],
                "{method}"
            );
            assert_eq!(ints(&overpartition_table(Z, 1, method).unwrap()), vec![1]);
        }
    }

    #[test]
    fn residue_tables_agree_with_exact() {
        let exact = overpartition_table(Z, 300, Method::ThetaInversion).unwrap();
        for method in [Method::ThetaInversion, Method::EulerProduct] {
            let r = overpartition_table(CoefficientRing::ModM(120), 300, method).unwrap();
            assert_eq!(r.series(), &exact.series().reduce_mod(120).unwrap());
        }
    }

    #[test]
    fn enumeration_cap() {
        assert!(matches!(
            overpartition_table(Z, 65, Method::Enumeration),
            Err(Error::EnumerationCap { cap: 64, requested: 65 })
        ));
        assert!(overpartition_table(Z, 64, Method::Enumeration).is_ok());
    }

    #[test]
    fn negative_arguments_are_zero() {
        let t = overpartition_table(CoefficientRing::ModM(5), 10, Method::ThetaInversion).unwrap();
        assert_eq!(t.value(-3), Some(BigInt::zero()));
        assert_eq!(t.residue(-1, 5).unwrap(), 0);
        assert!(matches!(t.residue(10, 5), Err(Error::TableTooShort { .. })));
        assert!(matches!(t.residue(1, 8), Err(Error::IncompatibleModulus { .. })));
    }

    #[test]
    fn two_adic_examples() {
        let sq = squares_table(4, 5).unwrap();
        assert_eq!(two_adic_value(1, &sq).unwrap(), BigInt::from(2));
        assert_eq!(two_adic_value(3, &sq).unwrap(), BigInt::from(8));
        assert_eq!(two_adic_value(4, &sq).unwrap(), BigInt::from(14));
        assert!(two_adic_value(0, &sq).is_err());
        let short = squares_table(2, 5).unwrap();
        assert!(two_adic_value(4, &short).is_err());
    }

    #[test]
    fn mod8_examples() {
        let sq = squares_table(2, 10).unwrap();
        assert_eq!(mod8_truncation(3, &sq).unwrap(), 0);
        assert_eq!(mod8_truncation(1, &sq).unwrap(), 2);
        assert_eq!(mod8_truncation(5, &sq).unwrap(), 0);
        assert_eq!(mod8_truncation(4, &sq).unwrap(), 14 % 8);
        assert!(mod8_truncation(0, &sq).is_err());
    }

    #[test]
    fn csv_layout() {
        let t = overpartition_table(Z, 4, Method::ThetaInversion).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,value\n0,1\n1,2\n2,4\n3,8\n");
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert_eq!("euler".parse::<Method>().unwrap(), Method::EulerProduct);
        assert!("guess".parse::<Method>().is_err());
    }
}
