//! Registry of overpartition congruence families and the sweep engine that
//! checks them against a coefficient table.
//!
//! A family is a list of base [`Instance`]s plus optional [`Sweep`]s over
//! prime or power parameters (`ℓ`, `k`, `i`, `α`). Sweeps are bounded by the
//! argument budget: a parameter value is tried as long as at least one
//! nontrivial case of the resulting instance fits under the budget.

use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{is_prime, lcm};
use crate::error::{Error, Result};
use crate::hecke::legendre;
use crate::overpartition::CoeffTable;
use crate::qseries::{CoefficientRing, Series};
use crate::theta::{theta_series, EqualityReport, ThetaKind};

/// `A(n) = scale * (step * n + offset)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ArgMap {
    pub scale: u64,
    pub step: u64,
    pub offset: u64,
}

impl ArgMap {
    pub const fn new(scale: u64, step: u64, offset: u64) -> Self {
        ArgMap { scale, step, offset }
    }

    /// `A(n) = scale * n`
    pub const fn multiple(scale: u64) -> Self {
        ArgMap::new(scale, 1, 0)
    }

    /// `A(n)`, or `None` on overflow.
    pub fn at(&self, n: u64) -> Option<u64> {
        self.step
            .checked_mul(n)?
            .checked_add(self.offset)?
            .checked_mul(self.scale)
    }

    /// Largest `n` with `A(n) <= budget`.
    pub fn max_n(&self, budget: u64) -> Option<u64> {
        let inner = budget / self.scale;
        inner.checked_sub(self.offset).map(|x| x / self.step)
    }

    fn scaled(self, factor: u64) -> Option<ArgMap> {
        Some(ArgMap {
            scale: self.scale.checked_mul(factor)?,
            ..self
        })
    }
}

impl fmt::Display for ArgMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner = match (self.step, self.offset) {
            (1, 0) => "n".to_string(),
            (s, 0) => format!("{s}n"),
            (1, r) => format!("n+{r}"),
            (s, r) => format!("{s}n+{r}"),
        };
        match (self.scale, self.offset) {
            (1, _) => write!(f, "{inner}"),
            (c, 0) => write!(f, "{c}{inner}"),
            (c, _) => write!(f, "{c}({inner})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignLaw {
    /// `(-1)^n`
    Alternating,
    Constant(i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Relation {
    /// `p̄(A(n)) ≡ 0`
    IsZero { arg: ArgMap },
    /// `p̄(A(n)) ≡ s(n) p̄(B(n))`
    SignedEqual { lhs: ArgMap, rhs: ArgMap, sign: SignLaw },
    /// `p̄(A(n)) ≡ c p̄(B(n))`
    ScaledEqual { lhs: ArgMap, rhs: ArgMap, scalar: i64 },
    /// `p̄(A(n)) ≡ p̄(B(n)) + (n/ℓ) p̄(A(n))`
    LegendreShifted { lhs: ArgMap, rhs: ArgMap, ell: u64 },
}

impl Relation {
    fn args(&self) -> Vec<ArgMap> {
        match *self {
            Relation::IsZero { arg } => vec![arg],
            Relation::SignedEqual { lhs, rhs, .. }
            | Relation::ScaledEqual { lhs, rhs, .. }
            | Relation::LegendreShifted { lhs, rhs, .. } => vec![lhs, rhs],
        }
    }

    fn lhs(&self) -> ArgMap {
        self.args()[0]
    }

    fn map_args(&self, target: Target, f: impl Fn(ArgMap) -> Option<ArgMap>) -> Option<Relation> {
        let (on_lhs, on_rhs) = match target {
            Target::All => (true, true),
            Target::Lhs => (true, false),
            Target::Rhs => (false, true),
        };
        let l = |a: ArgMap| if on_lhs { f(a) } else { Some(a) };
        let r = |a: ArgMap| if on_rhs { f(a) } else { Some(a) };
        Some(match *self {
            Relation::IsZero { arg } => Relation::IsZero { arg: l(arg)? },
            Relation::SignedEqual { lhs, rhs, sign } => Relation::SignedEqual {
                lhs: l(lhs)?,
                rhs: r(rhs)?,
                sign,
            },
            Relation::ScaledEqual { lhs, rhs, scalar } => Relation::ScaledEqual {
                lhs: l(lhs)?,
                rhs: r(rhs)?,
                scalar,
            },
            Relation::LegendreShifted { lhs, rhs, ell } => Relation::LegendreShifted {
                lhs: l(lhs)?,
                rhs: r(rhs)?,
                ell,
            },
        })
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::IsZero { arg } => write!(f, "pbar({arg}) = 0"),
            Relation::SignedEqual { lhs, rhs, sign } => match sign {
                SignLaw::Alternating => write!(f, "pbar({lhs}) = (-1)^n pbar({rhs})"),
                SignLaw::Constant(1) => write!(f, "pbar({lhs}) = pbar({rhs})"),
                SignLaw::Constant(c) => write!(f, "pbar({lhs}) = {c} pbar({rhs})"),
            },
            Relation::ScaledEqual { lhs, rhs, scalar } => {
                write!(f, "pbar({lhs}) = {scalar} pbar({rhs})")
            }
            Relation::LegendreShifted { lhs, rhs, ell } => {
                write!(f, "pbar({lhs}) = pbar({rhs}) + (n/{ell}) pbar({lhs})")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "ell")]
pub enum SideCondition {
    Always,
    /// `n >= 1`
    Positive,
    /// `(-n/ℓ) = -1`
    MinusNNonresidue(u64),
    /// `ℓ ∤ n`
    NotDivisibleBy(u64),
}

impl SideCondition {
    pub fn holds(&self, n: u64) -> bool {
        match *self {
            SideCondition::Always => true,
            SideCondition::Positive => n >= 1,
            SideCondition::MinusNNonresidue(ell) => {
                legendre(-((n % ell) as i64), ell).expect("side-condition prime validated") == -1
            }
            SideCondition::NotDivisibleBy(ell) => n % ell != 0,
        }
    }

    /// Every window of this many consecutive `n` contains a valid one.
    fn period(&self) -> u64 {
        match *self {
            SideCondition::Always | SideCondition::Positive => 1,
            SideCondition::MinusNNonresidue(ell) | SideCondition::NotDivisibleBy(ell) => ell,
        }
    }
}

/// One concrete congruence with all parameters fixed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub params: Vec<(String, u64)>,
    pub modulus: u64,
    pub relation: Relation,
    pub side: SideCondition,
}

impl Instance {
    pub fn new(modulus: u64, relation: Relation) -> Self {
        Instance {
            params: Vec::new(),
            modulus,
            relation,
            side: SideCondition::Always,
        }
    }

    fn with_param(mut self, name: &str, value: u64) -> Self {
        self.params.push((name.to_string(), value));
        self
    }

    fn with_side(mut self, side: SideCondition) -> Self {
        self.side = side;
        self
    }

    pub fn param(&self, name: &str) -> Option<u64> {
        self.params.iter().find(|(k, _)| k == name).map(|&(_, v)| v)
    }

    pub fn label(&self) -> String {
        let mut s = self.relation.to_string();
        s.push_str(&format!(" (mod {})", self.modulus));
        match self.side {
            SideCondition::Always => {}
            SideCondition::Positive => s.push_str(" for n >= 1"),
            SideCondition::MinusNNonresidue(ell) => s.push_str(&format!(" for (-n/{ell}) = -1")),
            SideCondition::NotDivisibleBy(ell) => s.push_str(&format!(" for {ell} ∤ n")),
        }
        if !self.params.is_empty() {
            let p: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            s.push_str(&format!(" [{}]", p.join(", ")));
        }
        s
    }

    fn max_arg(&self, n: u64) -> Option<u64> {
        self.relation
            .args()
            .iter()
            .map(|a| a.at(n))
            .try_fold(0u64, |acc, x| Some(acc.max(x?)))
    }

    /// Largest `n` whose arguments all stay within `budget`.
    pub fn n_max(&self, budget: u64) -> Option<u64> {
        self.relation
            .args()
            .iter()
            .map(|a| a.max_n(budget))
            .try_fold(u64::MAX, |acc, x| Some(acc.min(x?)))
    }

    /// Whether some case with a positive argument fits under `budget`.
    fn fits(&self, budget: u64) -> bool {
        let Some(n_max) = self.n_max(budget) else {
            return false;
        };
        let window = 2 * self.side.period() + 2;
        (0..=n_max.min(window)).any(|n| self.side.holds(n) && self.max_arg(n).is_some_and(|a| a > 0))
    }

    /// Residues `(lhs, rhs)` modulo the instance modulus at `n`.
    fn evaluate(&self, n: u64, table: &Series) -> (u64, u64) {
        let m = self.modulus;
        let p = |a: ArgMap| -> u64 {
            let idx = a.at(n).expect("argument checked against budget") as usize;
            table.residue(idx, m).expect("table length checked against budget")
        };
        let mul = |c: i64, x: u64| -> u64 {
            let c = (c as i128).rem_euclid(m as i128) as u64;
            (c * x) % m
        };
        match self.relation {
            Relation::IsZero { arg } => (p(arg), 0),
            Relation::SignedEqual { lhs, rhs, sign } => {
                let s = match sign {
                    SignLaw::Alternating if n % 2 == 1 => -1,
                    SignLaw::Alternating => 1,
                    SignLaw::Constant(c) => c,
                };
                (p(lhs), mul(s, p(rhs)))
            }
            Relation::ScaledEqual { lhs, rhs, scalar } => (p(lhs), mul(scalar, p(rhs))),
            Relation::LegendreShifted { lhs, rhs, ell } => {
                let chi = legendre(n as i64, ell).expect("relation prime validated");
                let a = p(lhs);
                (a, (p(rhs) + mul(chi as i64, a)) % m)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    Lhs,
    Rhs,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SideKind {
    MinusNNonresidue,
    NotDivisible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Sweep {
    /// Multiply the targeted arguments by `base^j`, `j = 0, 1, ...`.
    Power { param: String, base: u64, target: Target },
    /// Multiply the targeted arguments by `ℓ^exponent` for odd primes
    /// `ℓ ≡ residue (mod modulus)`, attaching the side condition for `ℓ`.
    Primes {
        param: String,
        residue: u64,
        modulus: u64,
        exponent: u32,
        target: Target,
        side: Option<SideKind>,
    },
}

impl Sweep {
    fn power(param: &str, base: u64, target: Target) -> Self {
        Sweep::Power {
            param: param.into(),
            base,
            target,
        }
    }

    fn expand(&self, inst: &Instance, budget: u64, ell: Option<u64>) -> Vec<Instance> {
        let mut out = Vec::new();
        match self {
            Sweep::Power { param, base, target } => {
                let mut factor = 1u64;
                for j in 0u64.. {
                    let Some(relation) = inst.relation.map_args(*target, |a| a.scaled(factor)) else {
                        break;
                    };
                    let cand = Instance {
                        relation,
                        ..inst.clone()
                    }
                    .with_param(param, j);
                    if !cand.fits(budget) {
                        break;
                    }
                    out.push(cand);
                    match factor.checked_mul(*base) {
                        Some(f) => factor = f,
                        None => break,
                    }
                }
            }
            Sweep::Primes {
                param,
                residue,
                modulus,
                exponent,
                target,
                side,
            } => {
                for p in (3u64..).step_by(2) {
                    if let Some(only) = ell {
                        if p > only {
                            break;
                        }
                    }
                    if p % modulus != residue % modulus || !is_prime(p) {
                        continue;
                    }
                    let Some(factor) = p.checked_pow(*exponent) else { break };
                    let Some(relation) = inst.relation.map_args(*target, |a| a.scaled(factor)) else {
                        break;
                    };
                    let side = match side {
                        None => inst.side,
                        Some(SideKind::MinusNNonresidue) => SideCondition::MinusNNonresidue(p),
                        Some(SideKind::NotDivisible) => SideCondition::NotDivisibleBy(p),
                    };
                    let cand = Instance {
                        relation,
                        ..inst.clone()
                    }
                    .with_side(side)
                    .with_param(param, p);
                    if !cand.fits(budget) {
                        break;
                    }
                    if ell.is_none_or(|only| only == p) {
                        out.push(cand);
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceFamily {
    /// Short key, `a` through `q` for the registry.
    pub id: String,
    pub name: String,
    /// The statement being checked, in plain notation.
    pub anchor: String,
    pub base: Vec<Instance>,
    pub sweeps: Vec<Sweep>,
}

impl CongruenceFamily {
    fn new(id: &str, name: &str, anchor: &str, base: Vec<Instance>, sweeps: Vec<Sweep>) -> Self {
        CongruenceFamily {
            id: id.into(),
            name: name.into(),
            anchor: anchor.into(),
            base,
            sweeps,
        }
    }

    /// Least common multiple of the instance moduli; a table must support
    /// residues modulo this value.
    pub fn modulus(&self) -> u64 {
        self.base.iter().fold(1, |acc, i| lcm(acc, i.modulus))
    }

    pub fn matches(&self, key: &str) -> bool {
        self.id == key || self.name == key
    }

    /// All parameter instances with at least one case under `budget`,
    /// optionally restricted to a single prime `ℓ`.
    pub fn instances(&self, budget: u64, ell: Option<u64>) -> Vec<Instance> {
        let mut current: Vec<Instance> = self
            .base
            .iter()
            .filter(|i| match (ell, i.param("ell")) {
                (Some(only), Some(p)) => only == p,
                _ => true,
            })
            .cloned()
            .collect();
        for sweep in &self.sweeps {
            current = current.iter().flat_map(|i| sweep.expand(i, budget, ell)).collect();
        }
        current.retain(|i| i.fits(budget));
        current
    }
}

fn zero(modulus: u64, arg: ArgMap) -> Instance {
    Instance::new(modulus, Relation::IsZero { arg })
}

/// Every congruence family checked by the verifier, keyed `a` to `q`.
pub fn registry() -> Vec<CongruenceFamily> {
    use ArgMap as A;
    let pm1 = |scale| {
        vec![
            zero(5, A::new(scale, 5, 1)).with_param("r", 1),
            zero(5, A::new(scale, 5, 4)).with_param("r", 4),
        ]
    };
    let mut nonresidue = Vec::new();
    for ell in (3u64..=31).filter(|&p| is_prime(p)) {
        let modulus = if matches!(ell % 8, 1 | 7) { 8 } else { 4 };
        for r in 1..ell {
            if legendre(r as i64, ell).unwrap() == -1 {
                nonresidue.push(
                    zero(modulus, A::new(1, ell, r))
                        .with_param("ell", ell)
                        .with_param("r", r),
                );
            }
        }
    }
    let mut specials = vec![
        zero(5, A::new(45, 3, 1)).with_param("ell", 3).with_param("k", 0),
        zero(5, A::new(180, 3, 1)).with_param("ell", 3).with_param("k", 1),
    ];
    for r in [2u64, 5, 6, 7, 8, 11] {
        specials.push(
            zero(5, A::new(845, 13, r))
                .with_param("ell", 13)
                .with_param("r", r),
        );
    }
    let scaled = |r: u64| {
        Instance::new(
            5,
            Relation::ScaledEqual {
                lhs: A::new(5, 5, r),
                rhs: A::new(125, 5, r),
                scalar: 3,
            },
        )
        .with_param("r", r)
    };

    vec![
        CongruenceFamily::new(
            "a",
            "mod8-4n+3",
            "pbar(4n+3) = 0 (mod 8)",
            vec![zero(8, A::new(1, 4, 3))],
            vec![],
        ),
        CongruenceFamily::new(
            "b",
            "mod40-40n+35",
            "pbar(40n+35) = 0 (mod 40)",
            vec![zero(40, A::new(1, 40, 35))],
            vec![],
        ),
        CongruenceFamily::new(
            "c",
            "mod5-40n+35",
            "pbar(40n+35) = 0 (mod 5)",
            vec![zero(5, A::new(1, 40, 35))],
            vec![],
        ),
        CongruenceFamily::new(
            "d",
            "mod12-27n+18",
            "pbar(9^alpha (27n+18)) = 0 (mod 12), alpha >= 0",
            vec![zero(12, A::new(1, 27, 18))],
            vec![Sweep::power("alpha", 9, Target::All)],
        ),
        CongruenceFamily::new(
            "e",
            "nonresidue-progressions",
            "pbar(ell n + r) = 0 (mod 8) if ell = +-1 (mod 8), (mod 4) if ell = +-3 (mod 8), r a quadratic nonresidue mod ell",
            nonresidue,
            vec![],
        ),
        CongruenceFamily::new(
            "f",
            "mod5-sign-5n-20n",
            "pbar(5n) = (-1)^n pbar(4*5n) (mod 5)",
            vec![Instance::new(
                5,
                Relation::SignedEqual {
                    lhs: A::multiple(5),
                    rhs: A::multiple(20),
                    sign: SignLaw::Alternating,
                },
            )],
            vec![],
        ),
        CongruenceFamily::new(
            "g",
            "mod8-sign-n-4n",
            "pbar(n) = (-1)^n pbar(4n) (mod 8)",
            vec![Instance::new(
                8,
                Relation::SignedEqual {
                    lhs: A::multiple(1),
                    rhs: A::multiple(4),
                    sign: SignLaw::Alternating,
                },
            )],
            vec![],
        ),
        CongruenceFamily::new(
            "h",
            "mod40-4^k(40n+35)",
            "pbar(4^k (40n+35)) = 0 (mod 40), k >= 0",
            vec![zero(40, A::new(1, 40, 35))],
            vec![Sweep::power("k", 4, Target::All)],
        ),
        CongruenceFamily::new(
            "i",
            "mod5-4^k*5*ell^2*n",
            "pbar(4^k * 5 ell^2 n) = 0 (mod 5), ell = 3 (mod 5) prime, (-n/ell) = -1",
            vec![zero(5, A::multiple(5))],
            vec![
                Sweep::Primes {
                    param: "ell".into(),
                    residue: 3,
                    modulus: 5,
                    exponent: 2,
                    target: Target::All,
                    side: Some(SideKind::MinusNNonresidue),
                },
                Sweep::power("k", 4, Target::All),
            ],
        ),
        CongruenceFamily::new(
            "j",
            "mod5-25n-625n",
            "pbar(5^2 n) = pbar(5^4 n) (mod 5)",
            vec![Instance::new(
                5,
                Relation::SignedEqual {
                    lhs: A::multiple(25),
                    rhs: A::multiple(625),
                    sign: SignLaw::Constant(1),
                },
            )],
            vec![],
        ),
        CongruenceFamily::new(
            "k",
            "mod5-4^k*5^(2i+3)(5n+-1)",
            "pbar(4^k 5^(2i+3) (5n+-1)) = 0 (mod 5), k, i >= 0",
            pm1(125),
            vec![Sweep::power("i", 25, Target::All), Sweep::power("k", 4, Target::All)],
        ),
        CongruenceFamily::new(
            "l",
            "mod5-125-500",
            "pbar(125(5n+-1)) = 0 and pbar(500(5n+-1)) = 0 (mod 5)",
            pm1(125).into_iter().chain(pm1(500)).collect(),
            vec![],
        ),
        CongruenceFamily::new(
            "m",
            "mod5-45-180-845",
            "pbar(45(3n+1)) = pbar(180(3n+1)) = 0 and pbar(845(13n+r)) = 0 (mod 5), r in {2,5,6,7,8,11}",
            specials,
            vec![],
        ),
        CongruenceFamily::new(
            "n",
            "mod5-5*ell^3*n",
            "pbar(5 ell^3 n) = 0 (mod 5), ell = -1 (mod 5) prime, ell does not divide n",
            vec![zero(5, A::multiple(5))],
            vec![Sweep::Primes {
                param: "ell".into(),
                residue: 4,
                modulus: 5,
                exponent: 3,
                target: Target::All,
                side: Some(SideKind::NotDivisible),
            }],
        ),
        CongruenceFamily::new(
            "o",
            "mod3-3*ell^3*n",
            "pbar(3 ell^3 n) = 0 (mod 3), ell = 2 (mod 3) odd prime, ell does not divide n",
            vec![zero(3, A::multiple(3))],
            vec![Sweep::Primes {
                param: "ell".into(),
                residue: 2,
                modulus: 3,
                exponent: 3,
                target: Target::All,
                side: Some(SideKind::NotDivisible),
            }],
        ),
        CongruenceFamily::new(
            "p",
            "mod5-5(5n+-2)-scaled",
            "pbar(5(5n+-2)) = 3 pbar(5^(2i+3) (5n+-2)) (mod 5), i >= 0",
            vec![scaled(2), scaled(3)],
            vec![Sweep::power("i", 25, Target::Rhs)],
        ),
        CongruenceFamily::new(
            "q",
            "mod5-ell5-shift",
            "pbar(5n) = pbar(5^3 n) + (n/5) pbar(5n) (mod 5)",
            vec![Instance::new(
                5,
                Relation::LegendreShifted {
                    lhs: A::multiple(5),
                    rhs: A::multiple(125),
                    ell: 5,
                },
            )],
            vec![],
        ),
    ]
}

/// The false statement `p̄(5n) ≡ 0 (mod 5)` for `n >= 1`, kept as a
/// negative control.
pub fn planted_false_family() -> CongruenceFamily {
    CongruenceFamily::new(
        "planted-false",
        "planted-false",
        "pbar(5n) = 0 (mod 5), n >= 1 [false]",
        vec![zero(5, ArgMap::multiple(5)).with_side(SideCondition::Positive)],
        vec![],
    )
}

/// Registry family by id or name; `planted-false` resolves to the negative control.
pub fn find_family(key: &str) -> Option<CongruenceFamily> {
    registry()
        .into_iter()
        .chain(std::iter::once(planted_false_family()))
        .find(|f| f.matches(key))
}

/// Modulus of a table able to answer every registry family.
pub fn registry_modulus() -> u64 {
    registry().iter().fold(1, |acc, f| lcm(acc, f.modulus()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub instance: String,
    pub n: u64,
    pub arg: u64,
    pub lhs: u64,
    pub rhs: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceSummary {
    pub label: String,
    pub params: Vec<(String, u64)>,
    pub modulus: u64,
    pub cases: u64,
    pub n_max: u64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckedRange {
    pub n_min: u64,
    pub n_max: u64,
    pub max_argument: u64,
    pub budget: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub family: String,
    pub anchor: String,
    pub range: CheckedRange,
    pub cases: u64,
    pub pass: bool,
    pub instances: Vec<InstanceSummary>,
    pub counterexamples: Vec<Counterexample>,
}

pub fn verify(family: &CongruenceFamily, table: &CoeffTable, budget: u64) -> Result<VerifyReport> {
    verify_with(family, table, budget, None)
}

const CHUNK: u64 = 1 << 14;

#[derive(Default)]
struct ChunkOutcome {
    cases: u64,
    first_n: Option<u64>,
    last_n: Option<u64>,
    counterexamples: Vec<Counterexample>,
}

/// Checks every instance of `family` whose arguments stay within `budget`,
/// optionally only those attached to the prime `ell`.
pub fn verify_with(
    family: &CongruenceFamily,
    table: &CoeffTable,
    budget: u64,
    ell: Option<u64>,
) -> Result<VerifyReport> {
    let required = budget as usize + 1;
    if table.len() < required {
        return Err(Error::TableTooShort {
            required,
            available: table.len(),
        });
    }
    let ring = table.ring();
    let instances = family.instances(budget, ell);
    for inst in &instances {
        if !ring.supports_residues_mod(inst.modulus) {
            return Err(Error::IncompatibleModulus {
                table: ring,
                modulus: inst.modulus,
            });
        }
    }
    let series = table.series();

    let mut summaries = Vec::with_capacity(instances.len());
    let mut counterexamples = Vec::new();
    let mut cases = 0;
    let (mut n_min, mut n_hi, mut max_argument) = (u64::MAX, 0u64, 0u64);
    for inst in &instances {
        let n_max = inst.n_max(budget).expect("instance fits budget");
        let label = inst.label();
        let chunks: Vec<ChunkOutcome> = (0..=n_max / CHUNK)
            .into_par_iter()
            .map(|c| {
                let mut out = ChunkOutcome::default();
                let hi = ((c + 1) * CHUNK - 1).min(n_max);
                for n in c * CHUNK..=hi {
                    if !inst.side.holds(n) {
                        continue;
                    }
                    out.cases += 1;
                    out.first_n.get_or_insert(n);
                    out.last_n = Some(n);
                    let (lhs, rhs) = inst.evaluate(n, series);
                    if lhs != rhs {
                        out.counterexamples.push(Counterexample {
                            instance: label.clone(),
                            n,
                            arg: inst.relation.lhs().at(n).unwrap(),
                            lhs,
                            rhs,
                        });
                    }
                }
                out
            })
            .collect();
        let mut inst_cases = 0;
        let mut inst_fail = false;
        for ch in chunks {
            inst_cases += ch.cases;
            if let Some(f) = ch.first_n {
                n_min = n_min.min(f);
            }
            if let Some(l) = ch.last_n {
                n_hi = n_hi.max(l);
                max_argument = max_argument.max(inst.max_arg(l).unwrap());
            }
            inst_fail |= !ch.counterexamples.is_empty();
            counterexamples.extend(ch.counterexamples);
        }
        cases += inst_cases;
        summaries.push(InstanceSummary {
            label,
            params: inst.params.clone(),
            modulus: inst.modulus,
            cases: inst_cases,
            n_max,
            pass: !inst_fail,
        });
    }
    Ok(VerifyReport {
        family: family.id.clone(),
        anchor: family.anchor.clone(),
        range: CheckedRange {
            n_min: if n_min == u64::MAX { 0 } else { n_min },
            n_max: n_hi,
            max_argument,
            budget,
        },
        cases,
        pass: counterexamples.is_empty(),
        instances: summaries,
        counterexamples,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DissectionChainReport {
    pub order: usize,
    pub pass: bool,
    pub checks: Vec<EqualityReport>,
}

/// Table length needed by [`verify_dissection_chain`] at `order`.
pub fn dissection_chain_required_len(order: usize) -> usize {
    80 * order.max(1) - 19
}

/// Checks, modulo 5 and through `order` terms per progression:
///
/// * `Σ p̄(5n) q^n ≡ φ(-q)³` (to order `4·order`) and the expansions of
///   `φ(∓q)³` through `φ(q⁴)` and `ψ(q⁸)`;
/// * the four progressions `Σ p̄(20n+5i) q^n` against
///   `φ³, -φ²ψ(q²), 2φψ(q²)², -3ψ(q²)³`;
/// * the four progressions `Σ p̄(4(20n+5i)) q^n` against
///   `φ³, φ²ψ(q²), 2φψ(q²)², 3ψ(q²)³`;
/// * the odd part of the `i = 3` progression, i.e. `p̄(40n+35) ≡ 0`.
pub fn verify_dissection_chain(order: usize, table: &CoeffTable) -> Result<DissectionChainReport> {
    if order == 0 {
        return Err(Error::EmptyOrder);
    }
    let required = dissection_chain_required_len(order);
    if table.len() < required {
        return Err(Error::TableTooShort {
            required,
            available: table.len(),
        });
    }
    if !table.ring().supports_residues_mod(5) {
        return Err(Error::IncompatibleModulus {
            table: table.ring(),
            modulus: 5,
        });
    }
    let ring = CoefficientRing::ModM(5);
    let long = 4 * order;
    let sampled = |step: usize| -> Result<Series> {
        let values = (0..long)
            .map(|n| table.series().residue(step * n, 5).unwrap())
            .collect();
        Series::from_residues(5, values)
    };
    let p5 = sampled(5)?;
    let p20 = sampled(20)?;

    let phi_long = theta_series(ThetaKind::PhiPlus, ring, long)?;
    let psi_long = theta_series(ThetaKind::Psi, ring, long)?;
    let phi = phi_long.truncate(order);
    let psi2 = psi_long.truncate(order).substitute_power(2)?;

    let mut checks = Vec::new();
    let phi_minus_cubed = phi_long.negate_variable().pow(3);
    checks.push(EqualityReport::compare(
        "sum pbar(5n) q^n = phi(-q)^3 (mod 5)",
        &p5,
        &phi_minus_cubed,
    )?);

    // φ(±q)³ = Σ_i c_i^± q^i φ(q⁴)^{3-i} ψ(q⁸)^i (mod 5)
    let phi4 = phi_long.substitute_power(4)?;
    let psi8 = psi_long.substitute_power(8)?;
    let pieces: Vec<Series> = (0..4)
        .map(|i| {
            phi4.pow(3 - i as u32)
                .mul(&psi8.pow(i as u32))
                .map(|s| s.shift(i))
        })
        .collect::<Result<_>>()?;
    let combine = |coeffs: [i64; 4]| -> Result<Series> {
        let mut acc = Series::zero(ring, long)?;
        for (c, piece) in coeffs.iter().zip(&pieces) {
            acc = acc.add(&piece.scalar_mul_i64(*c))?;
        }
        Ok(acc)
    };
    let minus = [1, -1, 2, -3];
    let plus = [1, 1, 2, 3];
    checks.push(EqualityReport::compare(
        "phi(-q)^3 = phi(q^4)^3 - q phi(q^4)^2 psi(q^8) + 2q^2 phi(q^4) psi(q^8)^2 - 3q^3 psi(q^8)^3 (mod 5)",
        &phi_minus_cubed,
        &combine(minus)?,
    )?);
    checks.push(EqualityReport::compare(
        "phi(q)^3 = phi(q^4)^3 + q phi(q^4)^2 psi(q^8) + 2q^2 phi(q^4) psi(q^8)^2 + 3q^3 psi(q^8)^3 (mod 5)",
        &phi_long.pow(3),
        &combine(plus)?,
    )?);

    // φ^{3-i} ψ(q²)^i
    let targets: Vec<Series> = (0..4)
        .map(|i| phi.pow(3 - i as u32).mul(&psi2.pow(i as u32)))
        .collect::<Result<_>>()?;
    let names = ["phi(q)^3", "phi(q)^2 psi(q^2)", "phi(q) psi(q^2)^2", "psi(q^2)^3"];
    for i in 0..4 {
        let lhs = p5.extract_progression(4, i)?.truncate(order);
        let rhs = targets[i].scalar_mul_i64(minus[i]);
        checks.push(EqualityReport::compare(
            format!("sum pbar(20n+{}) q^n = {} {} (mod 5)", 5 * i, minus[i], names[i]),
            &lhs,
            &rhs,
        )?);
    }
    for i in 0..4 {
        let lhs = p20.extract_progression(4, i)?.truncate(order);
        let rhs = targets[i].scalar_mul_i64(plus[i]);
        checks.push(EqualityReport::compare(
            format!("sum pbar(4(20n+{})) q^n = {} {} (mod 5)", 5 * i, plus[i], names[i]),
            &lhs,
            &rhs,
        )?);
    }
    let odd = p5.extract_progression(4, 3)?.truncate(order).extract_progression(2, 1)?;
    checks.push(EqualityReport::compare(
        "sum pbar(40n+35) q^n = 0 (mod 5)",
        &odd,
        &Series::zero(ring, odd.order())?,
    )?);

    Ok(DissectionChainReport {
        order,
        pass: checks.iter().all(|c| c.pass),
        checks,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    pub modulus: u64,
    pub order: usize,
    pub zeros: usize,
    pub fraction: f64,
}

/// `#{1 <= n <= order : p̄(n) ≡ 0 (mod m)} / order`.
pub fn density_report(table: &CoeffTable, m: u64, order: usize) -> Result<DensityReport> {
    if order == 0 {
        return Err(Error::EmptyOrder);
    }
    if table.len() <= order {
        return Err(Error::TableTooShort {
            required: order + 1,
            available: table.len(),
        });
    }
    if !table.ring().supports_residues_mod(m) {
        return Err(Error::IncompatibleModulus {
            table: table.ring(),
            modulus: m,
        });
    }
    let s = table.series();
    let zeros = (1..=order).filter(|&n| s.residue(n, m).unwrap().is_zero()).count();
    Ok(DensityReport {
        modulus: m,
        order,
        zeros,
        fraction: zeros as f64 / order as f64,
    })
}
