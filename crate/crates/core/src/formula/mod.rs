//! Closed-form values, bounds and inequalities as checkable claims.
//!
//! Each claim evaluates exactly, in any [`ExactInt`]; [`check_claim`] compares
//! it with the search engine or re-derives it by exact arithmetic and records
//! the outcome in a [`ClaimLedger`].

mod check;

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{self, ExactInt, Overflow};
use crate::strategy::path_threshold;
use crate::Exact;

pub use check::{check_claim, check_graham, ClaimLedger, ClaimRecord, GrahamReport, GrahamVerdict, LedgerSummary};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("unknown claim `{0}`")]
    UnknownClaim(String),
    #[error("{claim}: parameter `{param}` is missing")]
    MissingParam { claim: &'static str, param: &'static str },
    #[error("{claim}: {params} is outside the domain {domain}")]
    OutOfDomain {
        claim: &'static str,
        params: String,
        domain: &'static str,
    },
    #[error(transparent)]
    Overflow(#[from] Overflow),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimKind {
    ExactValue,
    UpperBound,
    LowerBound,
    Inequality,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Confirmed,
    Refuted,
    Unchecked,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Confirmed => "confirmed",
            Status::Refuted => "refuted",
            Status::Unchecked => "unchecked",
            Status::Inconclusive => "inconclusive",
        })
    }
}

/// Integer parameters of a claim; unused ones stay `None`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<u32>,
}

impl Params {
    pub fn n(n: u32) -> Self {
        Params {
            n: Some(n),
            ..Params::default()
        }
    }

    pub fn m(m: u32) -> Self {
        Params {
            m: Some(m),
            ..Params::default()
        }
    }

    pub fn nt(n: u32, t: u32) -> Self {
        Params {
            n: Some(n),
            t: Some(t),
            ..Params::default()
        }
    }

    pub fn mn(m: u32, n: u32) -> Self {
        Params {
            n: Some(n),
            m: Some(m),
            ..Params::default()
        }
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = [("m", self.m), ("n", self.n), ("t", self.t)]
            .iter()
            .filter_map(|(k, v)| v.map(|v| format!("{k}={v}")))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimId {
    CompleteGraph,
    PathGraph,
    DiameterLowerBound,
    Cor24,
    MiddleEvenCycle,
    Cor27Bound,
    Cor31Bound,
    ProductBound,
    EdgeTargetProductBound,
    Ineq21,
    Ineq22,
    Delta,
    Graham,
}

/// Static description of a claim.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ClaimInfo {
    pub name: &'static str,
    pub kind: ClaimKind,
    pub params: &'static [&'static str],
    pub domain: &'static str,
    pub statement: &'static str,
    pub provenance: &'static str,
    pub note: Option<&'static str>,
}

impl ClaimId {
    pub const ALL: [ClaimId; 13] = [
        ClaimId::CompleteGraph,
        ClaimId::PathGraph,
        ClaimId::DiameterLowerBound,
        ClaimId::Cor24,
        ClaimId::MiddleEvenCycle,
        ClaimId::Cor27Bound,
        ClaimId::Cor31Bound,
        ClaimId::ProductBound,
        ClaimId::EdgeTargetProductBound,
        ClaimId::Ineq21,
        ClaimId::Ineq22,
        ClaimId::Delta,
        ClaimId::Graham,
    ];

    pub fn info(self) -> ClaimInfo {
        use ClaimKind::*;
        let (name, kind, params, domain, statement, provenance, note): (_, _, &'static [&'static str], _, _, _, _) =
            match self {
                ClaimId::CompleteGraph => ("complete_graph", ExactValue, &["n"], "n >= 1", "f(K_n) = n", "Sec 1", None),
                ClaimId::PathGraph => (
                    "path_graph",
                    ExactValue,
                    &["n"],
                    "n >= 1",
                    "f(P_n) = 2^(n-1)",
                    "Sec 1",
                    Some("printed as 2^n - 1, which the exhaustive search refutes at n = 2 (f(P_2) = 2); 2^(n-1) is stored"),
                ),
                ClaimId::DiameterLowerBound => (
                    "diameter_lower_bound",
                    LowerBound,
                    &["n"],
                    "n >= 3",
                    "f(C_n) >= max(n, 2^floor(n/2)), the bound max(|V|, 2^D) on cycles",
                    "Sec 1",
                    None,
                ),
                ClaimId::Cor24 => (
                    "cor24",
                    ExactValue,
                    &["n"],
                    "n >= 3",
                    "f(M(P_n) - {v_1, v_n}) = 2^(n-2) + n - 2",
                    "Cor 2.4",
                    None,
                ),
                ClaimId::MiddleEvenCycle => (
                    "middle_even_cycle",
                    ExactValue,
                    &["n"],
                    "n >= 2",
                    "f(M(C_2n)) = 2^(n+1) + 2n - 2",
                    "Lemma 2.6",
                    Some("imported result; only oracle-feasible n can be checked"),
                ),
                ClaimId::Cor27Bound => (
                    "cor27_bound",
                    UpperBound,
                    &["n", "t"],
                    "n >= 2, t >= 1",
                    "f_t(M(C_2n)) <= t 2^(n+1) + 2n - 2",
                    "Cor 2.7",
                    Some("checked on targets u0 and v0; the rotations and reflections of the cycle cover the rest"),
                ),
                ClaimId::Cor31Bound => (
                    "cor31_bound",
                    UpperBound,
                    &["n", "t"],
                    "n >= 2, t >= 1",
                    "f_t(M(C_2n), u) <= 2^(n+1) + 2n - 2 + (t - 1)(2^n + n) for edge vertices u",
                    "Cor 3.1",
                    Some("per-target bound, checked at u0"),
                ),
                ClaimId::ProductBound => (
                    "product_bound",
                    UpperBound,
                    &["n", "m"],
                    "n, m >= 2; proved for m, n >= 5 and |n - m| >= 2",
                    "f(M(C_2n) x M(C_2m)) <= f(M(C_2n)) f(M(C_2m))",
                    "Thm 2.8",
                    Some("far beyond exhaustive search; the proof's arithmetic is checked by delta, ineq21 and ineq22"),
                ),
                ClaimId::EdgeTargetProductBound => (
                    "edge_target_product_bound",
                    UpperBound,
                    &["n", "m"],
                    "n, m >= 2, target outside C_2n x C_2m",
                    "f(M(C_2n) x M(C_2m), (u, v)) <= f(M(C_2n)) f(M(C_2m))",
                    "Thm 3.2",
                    Some("stated with a proof sketch only"),
                ),
                ClaimId::Ineq21 => (
                    "ineq21",
                    Inequality,
                    &["m", "n"],
                    "m, n >= 1; asserted for m >= 5, n >= m + 2",
                    "2^(m+1) < (m-1)(2^n - 1)/n - m + 2",
                    "Eq 2.1",
                    None,
                ),
                ClaimId::Ineq22 => (
                    "ineq22",
                    Inequality,
                    &["m"],
                    "m >= 1; asserted for m >= 5",
                    "(2m - 8) 2^m - m^2 - m + 5 > 0",
                    "Eq 2.2",
                    None,
                ),
                ClaimId::Delta => (
                    "delta",
                    ExactValue,
                    &["m", "n"],
                    "m, n >= 1",
                    "Delta = (2^(n+1) - 2n - 2)(2^(m+1) + 2m - 2) + 2^(m+1) + 4n - 1",
                    "Thm 2.8 proof",
                    Some("checked against the unsimplified total-minus-waste definition for every s"),
                ),
                ClaimId::Graham => (
                    "graham",
                    UpperBound,
                    &["left", "right"],
                    "connected G, H",
                    "f(G x H) <= f(G) f(H)",
                    "Sec 1 conjecture",
                    None,
                ),
            };
        ClaimInfo {
            name,
            kind,
            params,
            domain,
            statement,
            provenance,
            note,
        }
    }

    pub fn name(self) -> &'static str {
        self.info().name
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClaimId {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace(['-', '.'], "_");
        let alias = match key.as_str() {
            "lemma2_6" | "lemma26" | "m_cycle" => "middle_even_cycle",
            "cor2_4" => "cor24",
            "cor2_7" | "cor27" => "cor27_bound",
            "cor3_1" | "cor31" => "cor31_bound",
            "thm2_8" | "thm28" => "product_bound",
            "thm3_2" | "thm32" => "edge_target_product_bound",
            "eq2_1" | "ineq2_1" => "ineq21",
            "eq2_2" | "ineq2_2" => "ineq22",
            "complete" => "complete_graph",
            "path" => "path_graph",
            "lower_bound" => "diameter_lower_bound",
            other => other,
        };
        ClaimId::ALL
            .into_iter()
            .find(|c| c.name() == alias)
            .ok_or_else(|| FormulaError::UnknownClaim(s.to_string()))
    }
}

fn need(claim: ClaimId, value: Option<u32>, param: &'static str) -> Result<u32, FormulaError> {
    value.ok_or(FormulaError::MissingParam {
        claim: claim.info().name,
        param,
    })
}

fn domain_check(claim: ClaimId, params: &Params, ok: bool) -> Result<(), FormulaError> {
    if ok {
        Ok(())
    } else {
        let info = claim.info();
        Err(FormulaError::OutOfDomain {
            claim: info.name,
            params: params.to_string(),
            domain: info.domain,
        })
    }
}

fn c<T: ExactInt>(v: i64) -> Result<T, Overflow> {
    scalar::int(v)
}

/// `f(M(C_2n)) = 2^(n+1) + 2n - 2`.
pub fn middle_cycle_number<T: ExactInt>(n: u32) -> Result<T, Overflow> {
    scalar::add(&scalar::pow2::<T>(n + 1)?, &c(2 * n as i64 - 2)?)
}

/// `Delta(m, n) = (2^(n+1) - 2n - 2)(2^(m+1) + 2m - 2) + 2^(m+1) + 4n - 1`.
pub fn delta<T: ExactInt>(m: u32, n: u32) -> Result<T, Overflow> {
    let a = scalar::sub(&scalar::pow2::<T>(n + 1)?, &c(2 * n as i64 + 2)?)?;
    let b = scalar::add(&scalar::pow2::<T>(m + 1)?, &c(2 * m as i64 - 2)?)?;
    let tail = scalar::add(&scalar::pow2::<T>(m + 1)?, &c(4 * n as i64 - 1)?)?;
    scalar::add(&scalar::mul(&a, &b)?, &tail)
}

/// Total pebbles minus the pebbles the most wasteful loading leaves stranded,
/// with `s` fibers one short of a pebble; the simplified [`delta`] does not depend on `s`.
pub fn delta_from_definition<T: ExactInt>(m: u32, n: u32, s: u32) -> Result<T, Overflow> {
    let fm = middle_cycle_number::<T>(m)?;
    let total = scalar::mul(&middle_cycle_number::<T>(n)?, &fm)?;
    let s_t = c::<T>(s as i64)?;
    let four_n = c::<T>(4 * n as i64)?;
    let one = T::one();
    let unit_less = scalar::sub(&scalar::pow2::<T>(m + 1)?, &one)?;
    let w1 = scalar::mul(&s_t, &scalar::sub(&fm, &one)?)?;
    let w2 = scalar::mul(&scalar::sub(&scalar::sub(&four_n, &s_t)?, &one)?, &unit_less)?;
    let w3 = scalar::mul(&scalar::sub(&four_n, &s_t)?, &c(2 * m as i64 - 2)?)?;
    scalar::sub(&scalar::sub(&scalar::sub(&total, &w1)?, &w2)?, &w3)
}

/// Both sides of `2^(m+1) < (m-1)(2^n - 1)/n - m + 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality21<T: ExactInt> {
    pub lhs: T,
    pub rhs: Ratio<T>,
    pub margin: Ratio<T>,
    pub holds: bool,
}

pub fn ineq21<T: ExactInt>(m: u32, n: u32) -> Result<Inequality21<T>, Overflow> {
    let lhs = scalar::pow2::<T>(m + 1)?;
    let nn = c::<T>(n as i64)?;
    // (m-1)(2^n - 1) - (m-2) n, over n
    let num = scalar::sub(
        &scalar::mul(&c(m as i64 - 1)?, &scalar::sub(&scalar::pow2::<T>(n)?, &T::one())?)?,
        &scalar::mul(&c(m as i64 - 2)?, &nn)?,
    )?;
    let holds = scalar::mul(&lhs, &nn)? < num;
    let rhs = Ratio::new(num, nn.clone());
    let margin_num = scalar::sub(rhs.numer(), &scalar::mul(&lhs, rhs.denom())?)?;
    let margin = Ratio::new(margin_num, rhs.denom().clone());
    Ok(Inequality21 {
        lhs,
        rhs,
        margin,
        holds,
    })
}

/// `(2m - 8) 2^m - m^2 - m + 5`.
pub fn ineq22<T: ExactInt>(m: u32) -> Result<T, Overflow> {
    let m_t = c::<T>(m as i64)?;
    let lead = scalar::mul(&c(2 * m as i64 - 8)?, &scalar::pow2::<T>(m)?)?;
    let sq = scalar::mul(&m_t, &m_t)?;
    scalar::add(&scalar::sub(&scalar::sub(&lead, &sq)?, &m_t)?, &c(5)?)
}

/// [`ineq21`] in arbitrary precision.
pub fn check_inequality_21(m: u32, n: u32) -> Inequality21<Exact> {
    ineq21(m, n).expect("arbitrary precision does not overflow")
}

/// [`ineq22`] in arbitrary precision, with its sign.
pub fn check_inequality_22(m: u32) -> (Exact, bool) {
    let v: Exact = ineq22(m).expect("arbitrary precision does not overflow");
    let pos = v > Exact::from(0);
    (v, pos)
}

/// What a claim evaluates to at one parameter point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evaluation<T: ExactInt> {
    Integer(T),
    /// Inequalities: the exact margin, positive when the inequality holds.
    Margin(Ratio<T>),
}

impl<T: ExactInt> fmt::Display for Evaluation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evaluation::Integer(v) => write!(f, "{v}"),
            Evaluation::Margin(r) => write!(f, "{r}"),
        }
    }
}

/// Whether the claim's expression is defined at `params`.
pub fn in_domain(id: ClaimId, p: &Params) -> Result<bool, FormulaError> {
    let get = |v: Option<u32>, name| need(id, v, name);
    Ok(match id {
        ClaimId::CompleteGraph | ClaimId::PathGraph => get(p.n, "n")? >= 1,
        ClaimId::DiameterLowerBound => get(p.n, "n")? >= 3,
        ClaimId::Cor24 => get(p.n, "n")? >= 3,
        ClaimId::MiddleEvenCycle => get(p.n, "n")? >= 2,
        ClaimId::Cor27Bound | ClaimId::Cor31Bound => get(p.n, "n")? >= 2 && get(p.t, "t")? >= 1,
        ClaimId::ProductBound | ClaimId::EdgeTargetProductBound => get(p.n, "n")? >= 2 && get(p.m, "m")? >= 2,
        ClaimId::Ineq21 | ClaimId::Delta => get(p.m, "m")? >= 1 && get(p.n, "n")? >= 1,
        ClaimId::Ineq22 => get(p.m, "m")? >= 1,
        ClaimId::Graham => true,
    })
}

/// Whether the claim is actually asserted at `params` (narrower than
/// [`in_domain`] for the product theorem and its two inequalities).
pub fn hypothesis_holds(id: ClaimId, p: &Params) -> Result<bool, FormulaError> {
    if !in_domain(id, p)? {
        return Ok(false);
    }
    Ok(match id {
        ClaimId::ProductBound => {
            let (n, m) = (p.n.unwrap(), p.m.unwrap());
            n >= 5 && m >= 5 && n.abs_diff(m) >= 2
        }
        ClaimId::Ineq21 => {
            let (n, m) = (p.n.unwrap(), p.m.unwrap());
            m >= 5 && n >= m + 2
        }
        ClaimId::Ineq22 => p.m.unwrap() >= 5,
        _ => true,
    })
}

/// The claim's value (or bound, or inequality margin) anywhere in its domain.
pub fn evaluate<T: ExactInt>(id: ClaimId, p: &Params) -> Result<Evaluation<T>, FormulaError> {
    if id == ClaimId::Graham {
        return Err(FormulaError::OutOfDomain {
            claim: "graham",
            params: "integer parameters".into(),
            domain: "pairs of graphs; use check_graham",
        });
    }
    domain_check(id, p, in_domain(id, p)?)?;
    let n = p.n.unwrap_or(0);
    let m = p.m.unwrap_or(0);
    Ok(Evaluation::Integer(match id {
        ClaimId::Ineq21 => return Ok(Evaluation::Margin(ineq21::<T>(m, n)?.margin)),
        ClaimId::Ineq22 => ineq22(m)?,
        ClaimId::CompleteGraph => c(n as i64)?,
        ClaimId::PathGraph => scalar::pow2(n - 1)?,
        ClaimId::DiameterLowerBound => {
            let p2 = scalar::pow2::<T>(n / 2)?;
            let nn = c::<T>(n as i64)?;
            if p2 > nn {
                p2
            } else {
                nn
            }
        }
        ClaimId::Cor24 => scalar::add(&scalar::pow2::<T>(n - 2)?, &c(n as i64 - 2)?)?,
        ClaimId::MiddleEvenCycle => middle_cycle_number(n)?,
        ClaimId::Cor27Bound => {
            let t = c::<T>(p.t.unwrap() as i64)?;
            scalar::add(&scalar::mul(&t, &scalar::pow2(n + 1)?)?, &c(2 * n as i64 - 2)?)?
        }
        ClaimId::Cor31Bound => {
            let extra = scalar::add(&scalar::pow2::<T>(n)?, &c(n as i64)?)?;
            let t1 = c::<T>(p.t.unwrap() as i64 - 1)?;
            scalar::add(&middle_cycle_number(n)?, &scalar::mul(&t1, &extra)?)?
        }
        ClaimId::ProductBound | ClaimId::EdgeTargetProductBound => {
            scalar::mul(&middle_cycle_number::<T>(n)?, &middle_cycle_number(m)?)?
        }
        ClaimId::Delta => delta(m, n)?,
        ClaimId::Graham => unreachable!(),
    }))
}

/// [`evaluate`] for value claims, as an arbitrary-precision integer with its kind.
pub fn known_value(name: &str, params: &Params) -> Result<(Exact, ClaimKind), FormulaError> {
    let id: ClaimId = name.parse()?;
    match evaluate::<Exact>(id, params)? {
        Evaluation::Integer(v) => Ok((v, id.info().kind)),
        Evaluation::Margin(_) => Err(FormulaError::OutOfDomain {
            claim: id.info().name,
            params: params.to_string(),
            domain: "value claims; this is an inequality",
        }),
    }
}

/// Hypotheses checked before a strategy runs, where the result is a weight
/// threshold rather than a pebbling number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Precondition {
    /// Weight of a path with respect to its end vertex.
    PathWeight,
    /// One-sided collection: weight `t 2^(n-1)` brings `t` pebbles to `v_n`.
    SingleSidedThreshold,
    /// Two-sided collection onto `v_k`.
    TwoSidedThreshold,
}

impl Precondition {
    pub const ALL: [Precondition; 3] = [
        Precondition::PathWeight,
        Precondition::SingleSidedThreshold,
        Precondition::TwoSidedThreshold,
    ];

    pub fn provenance(self) -> &'static str {
        match self {
            Precondition::PathWeight => "Def 2.1",
            Precondition::SingleSidedThreshold => "Prop 2.2",
            Precondition::TwoSidedThreshold => "Cor 2.3",
        }
    }

    /// The weight required for `t` pebbles on `v_k` of an `n`-vertex path.
    /// `PathWeight` itself carries no threshold beyond reaching one pebble at `k = n`.
    pub fn threshold(self, n: usize, k: usize, t: u32) -> u128 {
        match self {
            Precondition::PathWeight => path_threshold(n, n, 1),
            Precondition::SingleSidedThreshold => path_threshold(n, n, t),
            Precondition::TwoSidedThreshold => path_threshold(n, k, t),
        }
    }
}

/// Where a numbered result lands in this crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Resolution {
    Claim(ClaimId),
    Precondition(Precondition),
}

/// Every numbered formula and named result, by provenance, with the single
/// claim or precondition that encodes it.
pub fn result_index() -> Vec<(&'static str, Resolution)> {
    let mut out: Vec<(&'static str, Resolution)> = Precondition::ALL
        .into_iter()
        .map(|p| (p.provenance(), Resolution::Precondition(p)))
        .collect();
    for id in ClaimId::ALL {
        let prov = match id {
            // f(K_n), f(P_n) and the lower bound share a section; name them apart
            ClaimId::CompleteGraph => "Sec 1 f(K_n)",
            ClaimId::PathGraph => "Sec 1 f(P_n)",
            ClaimId::DiameterLowerBound => "Sec 1 lower bound",
            ClaimId::Delta => "Thm 2.8 Delta",
            other => other.info().provenance,
        };
        out.push((prov, Resolution::Claim(id)));
    }
    out
}
