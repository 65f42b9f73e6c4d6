use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{
    delta, delta_from_definition, evaluate, hypothesis_holds, ineq21, ineq22, ClaimId, ClaimKind, Evaluation,
    FormulaError, Params, Status,
};
use crate::engine::{pebbling_number, t_pebbling_number, EngineError, PebblingReport, SweepOptions};
use crate::graph::{
    cartesian_product, complete, cycle, middle_cycle, middle_path_trimmed, path, Graph, VertexId, VertexLabel,
};
use crate::Exact;

/// One check of one claim at one parameter point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimRecord {
    pub claim: String,
    pub params: serde_json::Value,
    pub status: Status,
    /// Whether the claim is asserted at these parameters.
    pub hypothesis: bool,
    pub expected: String,
    pub observed: Option<String>,
    pub evidence: serde_json::Value,
    /// SHA-256 of the serialized evidence.
    pub evidence_hash: String,
    pub timestamp: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ClaimRecord {
    fn new(
        claim: &str,
        params: serde_json::Value,
        status: Status,
        hypothesis: bool,
        expected: String,
        observed: Option<String>,
        evidence: serde_json::Value,
    ) -> Self {
        let hash = hex::encode(Sha256::digest(evidence.to_string().as_bytes()));
        ClaimRecord {
            claim: claim.to_string(),
            params,
            status,
            hypothesis,
            expected,
            observed,
            evidence,
            evidence_hash: hash,
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            note: None,
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Compare an oracle value with a claimed value or bound.
fn compare(kind: ClaimKind, claimed: u64, oracle: u64) -> Status {
    let ok = match kind {
        ClaimKind::ExactValue => oracle == claimed,
        ClaimKind::UpperBound => oracle <= claimed,
        ClaimKind::LowerBound => oracle >= claimed,
        ClaimKind::Inequality => unreachable!(),
    };
    if ok {
        Status::Confirmed
    } else {
        Status::Refuted
    }
}

fn u0(g: &Graph) -> VertexId {
    g.id(&VertexLabel::edge(0, 1)).expect("middle cycle has u0")
}

/// The oracle run that decides an oracle-backed claim.
fn oracle(id: ClaimId, p: &Params, opts: &SweepOptions) -> Result<(Graph, PebblingReport), EngineError> {
    let n = p.n.unwrap_or(0) as usize;
    let t = p.t.unwrap_or(1);
    Ok(match id {
        ClaimId::CompleteGraph => {
            let g = complete(n)?;
            let r = pebbling_number(&g, None, opts)?;
            (g, r)
        }
        ClaimId::PathGraph => {
            let g = path(n)?;
            let r = pebbling_number(&g, None, opts)?;
            (g, r)
        }
        ClaimId::DiameterLowerBound => {
            let g = cycle(n)?;
            let r = pebbling_number(&g, None, opts)?;
            (g, r)
        }
        ClaimId::Cor24 => {
            let g = middle_path_trimmed(n)?;
            let r = pebbling_number(&g, None, opts)?;
            (g, r)
        }
        ClaimId::MiddleEvenCycle => {
            let g = middle_cycle(n)?;
            let r = pebbling_number(&g, None, opts)?;
            (g, r)
        }
        ClaimId::Cor27Bound => {
            let g = middle_cycle(n)?;
            let targets = [u0(&g), g.id_or_err(&VertexLabel::Original(0))?];
            let r = t_pebbling_number(&g, t, Some(&targets), opts)?;
            (g, r)
        }
        ClaimId::Cor31Bound => {
            let g = middle_cycle(n)?;
            let r = t_pebbling_number(&g, t, Some(&[u0(&g)]), opts)?;
            (g, r)
        }
        ClaimId::ProductBound | ClaimId::EdgeTargetProductBound => {
            let g = cartesian_product(&middle_cycle(n)?, &middle_cycle(p.m.unwrap_or(0) as usize)?)?;
            let targets = if id == ClaimId::EdgeTargetProductBound {
                let e = VertexLabel::edge(0, 1);
                Some(vec![g.id_or_err(&VertexLabel::pair(e.clone(), e))?])
            } else {
                None
            };
            let r = pebbling_number(&g, targets.as_deref(), opts)?;
            (g, r)
        }
        _ => unreachable!("not an oracle claim"),
    })
}

fn check_point(id: ClaimId, p: &Params, opts: &SweepOptions) -> Result<ClaimRecord, FormulaError> {
    let info = id.info();
    let params = serde_json::to_value(p).unwrap();
    let hyp = hypothesis_holds(id, p)?;
    let value = evaluate::<Exact>(id, p)?;
    let record = |status, expected: String, observed: Option<String>, evidence| {
        ClaimRecord::new(info.name, params.clone(), status, hyp, expected, observed, evidence)
    };
    match id {
        ClaimId::Ineq21 => {
            let r = ineq21::<Exact>(p.m.unwrap(), p.n.unwrap())?;
            let evidence = serde_json::json!({
                "lhs": r.lhs.to_string(), "rhs": r.rhs.to_string(), "margin": r.margin.to_string(), "holds": r.holds,
            });
            let status = if !hyp {
                Status::Unchecked
            } else if r.holds {
                Status::Confirmed
            } else {
                Status::Refuted
            };
            let rec = record(
                status,
                format!("{} < {}", r.lhs, r.rhs),
                Some(r.holds.to_string()),
                evidence,
            );
            return Ok(if hyp {
                rec
            } else {
                rec.with_note("outside m >= 5, n >= m + 2; evaluated only")
            });
        }
        ClaimId::Ineq22 => {
            let v: Exact = ineq22(p.m.unwrap())?;
            let holds = v > Exact::from(0);
            let status = if !hyp {
                Status::Unchecked
            } else if holds {
                Status::Confirmed
            } else {
                Status::Refuted
            };
            let rec = record(
                status,
                "> 0".into(),
                Some(v.to_string()),
                serde_json::json!({"value": v.to_string(), "holds": holds}),
            );
            return Ok(if hyp {
                rec
            } else {
                rec.with_note("outside m >= 5; evaluated only")
            });
        }
        ClaimId::Delta => {
            let (m, n) = (p.m.unwrap(), p.n.unwrap());
            let closed: Exact = delta(m, n)?;
            let mut mismatches = Vec::new();
            for s in 0..4 * n {
                let raw: Exact = delta_from_definition(m, n, s)?;
                if raw != closed {
                    mismatches.push(serde_json::json!({"s": s, "raw": raw.to_string()}));
                }
            }
            let status = if mismatches.is_empty() {
                Status::Confirmed
            } else {
                Status::Refuted
            };
            return Ok(record(
                status,
                closed.to_string(),
                Some(closed.to_string()),
                serde_json::json!({"closed_form": closed.to_string(), "s_checked": 4 * n, "mismatches": mismatches}),
            ));
        }
        _ => {}
    }

    let claimed = match &value {
        Evaluation::Integer(v) => v.clone(),
        Evaluation::Margin(_) => unreachable!(),
    };
    let expected = match info.kind {
        ClaimKind::UpperBound => format!("<= {claimed}"),
        ClaimKind::LowerBound => format!(">= {claimed}"),
        _ => claimed.to_string(),
    };
    let (g, report) = match oracle(id, p, opts) {
        Ok(x) => x,
        Err(e) => {
            return Ok(record(
                Status::Inconclusive,
                expected,
                None,
                serde_json::json!({"error": e.to_string()}),
            ))
        }
    };
    let evidence = report.to_json(&g);
    let Some(found) = report.value else {
        return Ok(record(Status::Inconclusive, expected, None, evidence));
    };
    let claimed_u64: Option<u64> = claimed.to_string().parse().ok();
    let status = match claimed_u64 {
        Some(c) => compare(info.kind, c, found),
        None => Status::Inconclusive,
    };
    let mut rec = record(status, expected, Some(found.to_string()), evidence);
    if id == ClaimId::PathGraph {
        let n = p.n.unwrap();
        let printed = (1u128 << n) - 1;
        rec = rec.with_note(format!(
            "printed formula 2^n - 1 gives {printed}, {} the search",
            if printed == found as u128 {
                "agreeing with"
            } else {
                "contradicting"
            }
        ));
    }
    if report.targets_restricted {
        let note = rec.note.take().map(|n| format!("{n}; ")).unwrap_or_default();
        rec = rec.with_note(format!(
            "{note}targets restricted to {}",
            report
                .targets
                .iter()
                .map(|&v| g.label(v).to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ));
    }
    Ok(rec)
}

/// Checks `id` at each parameter point: by exact arithmetic for inequalities
/// and `delta`, otherwise against an exhaustive pebbling-number sweep.
/// A sweep that runs out of budget gives `inconclusive`, never `refuted`.
pub fn check_claim(id: ClaimId, points: &[Params], opts: &SweepOptions) -> Result<Vec<ClaimRecord>, FormulaError> {
    if id == ClaimId::Graham {
        return Err(FormulaError::OutOfDomain {
            claim: "graham",
            params: "integer parameters".into(),
            domain: "pairs of graphs; use check_graham",
        });
    }
    points.iter().map(|p| check_point(id, p, opts)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrahamVerdict {
    Holds,
    Violated,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrahamReport {
    pub f_left: Option<u64>,
    pub f_right: Option<u64>,
    pub f_product: Option<u64>,
    pub bound: Option<u64>,
    pub verdict: GrahamVerdict,
    pub reasons: Vec<String>,
}

impl GrahamReport {
    pub fn record(&self, left: &str, right: &str) -> ClaimRecord {
        let status = match self.verdict {
            GrahamVerdict::Holds => Status::Confirmed,
            GrahamVerdict::Violated => Status::Refuted,
            GrahamVerdict::Inconclusive => Status::Inconclusive,
        };
        let show = |v: Option<u64>| v.map_or("?".to_string(), |v| v.to_string());
        ClaimRecord::new(
            "graham",
            serde_json::json!({"left": left, "right": right}),
            status,
            true,
            format!(
                "<= {} * {} = {}",
                show(self.f_left),
                show(self.f_right),
                show(self.bound)
            ),
            self.f_product.map(|v| v.to_string()),
            serde_json::to_value(self).unwrap(),
        )
    }
}

/// Computes `f(G)`, `f(H)` and `f(G x H)` exactly and compares.
pub fn check_graham(g: &Graph, h: &Graph, opts: &SweepOptions) -> Result<GrahamReport, EngineError> {
    let mut reasons = Vec::new();
    let mut exact = |r: PebblingReport, what: &str| {
        if let Some(reason) = &r.inconclusive {
            reasons.push(format!("{what}: {reason}"));
        }
        r.value
    };
    let f_left = exact(pebbling_number(g, None, opts)?, "left factor");
    let f_right = exact(pebbling_number(h, None, opts)?, "right factor");
    let bound = f_left.zip(f_right).map(|(a, b)| a * b);
    let f_product = if bound.is_some() {
        let p = cartesian_product(g, h)?;
        exact(pebbling_number(&p, None, opts)?, "product")
    } else {
        None
    };
    let verdict = match (f_product, bound) {
        (Some(fp), Some(b)) if fp <= b => GrahamVerdict::Holds,
        (Some(_), Some(_)) => GrahamVerdict::Violated,
        _ => GrahamVerdict::Inconclusive,
    };
    Ok(GrahamReport {
        f_left,
        f_right,
        f_product,
        bound,
        verdict,
        reasons,
    })
}

/// Per-claim status counts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LedgerSummary {
    pub claim: String,
    pub points: usize,
    pub confirmed: usize,
    pub refuted: usize,
    pub unchecked: usize,
    pub inconclusive: usize,
}

/// Check records, stored as JSON lines.
#[derive(Clone, Debug, Default)]
pub struct ClaimLedger {
    pub records: Vec<ClaimRecord>,
}

impl ClaimLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn extend(&mut self, records: impl IntoIterator<Item = ClaimRecord>) {
        self.records.extend(records);
    }

    pub fn load(path: &Path) -> std::io::Result<Self> {
        let file = std::fs::File::open(path)?;
        let mut records = Vec::new();
        for line in std::io::BufReader::new(file).lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            records.push(serde_json::from_str(&line).map_err(std::io::Error::other)?);
        }
        Ok(ClaimLedger { records })
    }

    /// Appends every record to `path`, one JSON object per line.
    pub fn append_to(&self, path: &Path) -> std::io::Result<()> {
        let mut file = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
        for r in &self.records {
            writeln!(file, "{}", serde_json::to_string(r).map_err(std::io::Error::other)?)?;
        }
        Ok(())
    }

    pub fn summary(&self) -> Vec<LedgerSummary> {
        let mut by: BTreeMap<&str, LedgerSummary> = BTreeMap::new();
        for r in &self.records {
            let s = by.entry(&r.claim).or_insert_with(|| LedgerSummary {
                claim: r.claim.clone(),
                ..LedgerSummary::default()
            });
            s.points += 1;
            match r.status {
                Status::Confirmed => s.confirmed += 1,
                Status::Refuted => s.refuted += 1,
                Status::Unchecked => s.unchecked += 1,
                Status::Inconclusive => s.inconclusive += 1,
            }
        }
        by.into_values().collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        for s in self.summary() {
            w.serialize(s)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_claims() {
        let opts = SweepOptions::default();
        let recs = check_claim(ClaimId::Ineq22, &(4..=6).map(Params::m).collect::<Vec<_>>(), &opts).unwrap();
        assert_eq!(recs[0].status, Status::Unchecked);
        assert_eq!(recs[0].observed.as_deref(), Some("-15"));
        assert_eq!(recs[1].status, Status::Confirmed);
        assert_eq!(recs[1].observed.as_deref(), Some("39"));
        let recs = check_claim(ClaimId::Delta, &[Params::mn(5, 7)], &opts).unwrap();
        assert_eq!(recs[0].status, Status::Confirmed);
        assert_eq!(recs[0].expected, "17371");
    }

    #[test]
    fn oracle_claims() {
        let opts = SweepOptions::default();
        let recs = check_claim(ClaimId::PathGraph, &[Params::n(2), Params::n(3)], &opts).unwrap();
        assert!(recs.iter().all(|r| r.status == Status::Confirmed));
        assert!(recs[0].note.as_deref().unwrap().contains("contradicting"));
        let recs = check_claim(ClaimId::MiddleEvenCycle, &[Params::n(3)], &opts).unwrap();
        assert_eq!(recs[0].status, Status::Inconclusive);
    }

    #[test]
    fn graham_small() {
        let r = check_graham(&path(2).unwrap(), &path(2).unwrap(), &SweepOptions::default()).unwrap();
        assert_eq!((r.f_left, r.f_right, r.f_product), (Some(2), Some(2), Some(4)));
        assert_eq!(r.verdict, GrahamVerdict::Holds);
        let rec = r.record("path:2", "path:2");
        assert_eq!(rec.status, Status::Confirmed);
    }

    #[test]
    fn ledger_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("ledger.jsonl");
        let mut ledger = ClaimLedger::new();
        ledger.extend(check_claim(ClaimId::Ineq22, &[Params::m(5), Params::m(4)], &SweepOptions::default()).unwrap());
        ledger.append_to(&file).unwrap();
        ledger.append_to(&file).unwrap();
        let back = ClaimLedger::load(&file).unwrap();
        assert_eq!(back.records.len(), 4);
        let s = back.summary();
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].confirmed, s[0].unchecked), (2, 2));
        let mut csv = Vec::new();
        back.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("claim,points,confirmed,refuted,unchecked,inconclusive"));
    }
}
