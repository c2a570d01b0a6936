//! Theta series `φ(q) = Σ_{n∈Z} q^{n²}`, `ψ(q) = Σ_{n≥0} q^{n(n+1)/2}` and
//! the 2-dissection `φ(±q) = φ(q⁴) ± 2qψ(q⁸)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qseries::{CoefficientRing, Series};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ThetaKind {
    /// `φ(q)`
    PhiPlus,
    /// `φ(-q)`
    PhiMinus,
    /// `ψ(q)`
    Psi,
    /// `Σ_{m≥1} q^{m²}`
    ThetaPositiveSquares,
}

impl ThetaKind {
    pub fn name(&self) -> &'static str {
        match self {
            ThetaKind::PhiPlus => "phi",
            ThetaKind::PhiMinus => "phi-minus",
            ThetaKind::Psi => "psi",
            ThetaKind::ThetaPositiveSquares => "positive-squares",
        }
    }
}

impl std::str::FromStr for ThetaKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "phi" | "phi-plus" => ThetaKind::PhiPlus,
            "phi-minus" => ThetaKind::PhiMinus,
            "psi" => ThetaKind::Psi,
            "positive-squares" | "theta-plus" => ThetaKind::ThetaPositiveSquares,
            other => return Err(Error::InvalidArgument(format!("unknown theta kind {other:?}"))),
        })
    }
}

pub fn theta_series(kind: ThetaKind, ring: CoefficientRing, order: usize) -> Result<Series> {
    if order == 0 {
        return Err(Error::EmptyOrder);
    }
    let mut terms: Vec<(usize, i64)> = Vec::new();
    match kind {
        ThetaKind::Psi => {
            let mut t = 0usize;
            while t * (t + 1) / 2 < order {
                terms.push((t * (t + 1) / 2, 1));
                t += 1;
            }
        }
        _ => {
            if kind != ThetaKind::ThetaPositiveSquares {
                terms.push((0, 1));
            }
            let mut k = 1usize;
            while k * k < order {
                let c = match kind {
                    ThetaKind::PhiPlus => 2,
                    ThetaKind::PhiMinus if k % 2 == 1 => -2,
                    ThetaKind::PhiMinus => 2,
                    _ => 1,
                };
                terms.push((k * k, c));
                k += 1;
            }
        }
    }
    Series::from_terms(ring, order, &terms)
}

/// Outcome of comparing two sides of a series identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EqualityReport {
    pub identity: String,
    pub order: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_difference: Option<usize>,
}

impl EqualityReport {
    pub fn compare(identity: impl Into<String>, lhs: &Series, rhs: &Series) -> Result<Self> {
        let first_difference = lhs.first_difference(rhs)?;
        Ok(EqualityReport {
            identity: identity.into(),
            order: lhs.order().min(rhs.order()),
            pass: first_difference.is_none(),
            first_difference,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TwoDissectionReport {
    pub order: usize,
    pub plus: EqualityReport,
    pub minus: EqualityReport,
}

impl TwoDissectionReport {
    pub fn pass(&self) -> bool {
        self.plus.pass && self.minus.pass
    }

    pub fn first_difference(&self) -> Option<usize> {
        match (self.plus.first_difference, self.minus.first_difference) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

/// Checks both sign variants of the 2-dissection with exact integers.
pub fn check_two_dissection(order: usize) -> Result<TwoDissectionReport> {
    let z = CoefficientRing::ExactInteger;
    let phi = theta_series(ThetaKind::PhiPlus, z, order)?;
    let psi = theta_series(ThetaKind::Psi, z, order)?;
    check_two_dissection_with(&phi, &psi)
}

/// Same check against caller-supplied `φ` and `ψ`, so corrupted inputs can be
/// exercised. `φ(-q)` is derived from the supplied `φ`.
pub fn check_two_dissection_with(phi: &Series, psi: &Series) -> Result<TwoDissectionReport> {
    let order = phi.order().min(psi.order());
    let phi = phi.truncate(order);
    let psi = psi.truncate(order);
    let even = phi.substitute_power(4)?;
    let odd = psi.substitute_power(8)?.shift(1).scalar_mul_i64(2);
    let plus = EqualityReport::compare("phi(q) = phi(q^4) + 2q psi(q^8)", &phi, &even.add(&odd)?)?;
    let minus = EqualityReport::compare(
        "phi(-q) = phi(q^4) - 2q psi(q^8)",
        &phi.negate_variable(),
        &even.sub(&odd)?,
    )?;
    Ok(TwoDissectionReport { order, plus, minus })
}
