//! Run reports in JSON and plain text.
//!
//! Numbers carry the exact fraction next to a six-significant-digit decimal;
//! only the fraction is read back.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arena::{GameArena, PlayerId, Role, VertexId};
use crate::equilibria::{EquilibriumResult, FrequencySolution, Mode, Region, SolveStats};
use crate::rational::{decimal, fraction, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Number {
    pub exact: String,
    pub decimal: String,
}

impl From<&Rational> for Number {
    fn from(q: &Rational) -> Self {
        Number {
            exact: fraction(q),
            decimal: decimal(q),
        }
    }
}

impl Number {
    pub fn value(&self) -> Result<Rational, ReportError> {
        parse_rational(&self.exact).ok_or_else(|| ReportError::BadNumber(self.exact.clone()))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReportError {
    #[error("malformed report: {0}")]
    Json(String),
    #[error("malformed number `{0}` in report")]
    BadNumber(String),
    #[error("report names unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("report names unknown edge {0} -> {1}")]
    UnknownEdge(String, String),
    #[error("report names unknown player {0}")]
    UnknownPlayer(usize),
    #[error("unknown mode `{0}` in report")]
    UnknownMode(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayerReport {
    pub player: usize,
    pub role: String,
    pub raw: Number,
    pub incentive: Number,
    pub total: Number,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRatio {
    pub vertex: String,
    pub ratio: Number,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRatio {
    pub source: String,
    pub target: String,
    pub ratio: Number,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Threshold {
    pub player: usize,
    pub bound: Number,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub values_ms: f64,
    pub enumeration_ms: f64,
    pub lp_ms: f64,
    pub total_ms: f64,
    pub q_sets: usize,
    pub programs: usize,
    pub solved: usize,
}

impl From<&SolveStats> for Timings {
    fn from(s: &SolveStats) -> Self {
        let ms = |d: Duration| d.as_secs_f64() * 1e3;
        Timings {
            values_ms: ms(s.values),
            enumeration_ms: ms(s.enumeration),
            lp_ms: ms(s.lp),
            total_ms: ms(s.total),
            q_sets: s.q_sets,
            programs: s.programs,
            solved: s.solved,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeReport {
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    pub leader_payoff: Number,
    pub players: Vec<PlayerReport>,
    pub q: Vec<String>,
    pub s: Vec<String>,
    pub thresholds: Vec<Threshold>,
    pub vertex_ratios: Vec<VertexRatio>,
    pub edge_ratios: Vec<EdgeRatio>,
    #[serde(default)]
    pub timings: Timings,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub fingerprint: String,
    pub results: Vec<ModeReport>,
}

impl ModeReport {
    pub fn new(arena: &GameArena, r: &EquilibriumResult, stats: &SolveStats) -> Self {
        let names = |vs: &BTreeSet<VertexId>| vs.iter().map(|v| arena.name(*v).to_string()).collect();
        ModeReport {
            mode: r.mode.name().to_string(),
            epsilon: r.mode.epsilon().map(fraction),
            leader_payoff: (&r.leader_payoff).into(),
            players: arena
                .players()
                .map(|p| {
                    let leader = arena.role(p) == Role::Leader;
                    let incentive = if leader { -r.solution.incentive_total() } else { r.solution.incentive(p) };
                    let total = if leader { r.leader_payoff.clone() } else { r.follower_payoffs[&p].clone() };
                    PlayerReport {
                        player: p.0,
                        role: if leader { "leader" } else { "follower" }.into(),
                        raw: (&r.raw_payoffs[&p]).into(),
                        incentive: (&incentive).into(),
                        total: (&total).into(),
                    }
                })
                .collect(),
            q: names(&r.region.q),
            s: names(&r.region.s),
            thresholds: r
                .region
                .thresholds
                .iter()
                .map(|(p, t)| Threshold { player: p.0, bound: t.into() })
                .collect(),
            vertex_ratios: r
                .solution
                .vertex_ratio
                .iter()
                .map(|(v, q)| VertexRatio {
                    vertex: arena.name(*v).to_string(),
                    ratio: q.into(),
                })
                .collect(),
            edge_ratios: r
                .solution
                .edge_ratio
                .iter()
                .map(|(e, q)| {
                    let edge = arena.edge(*e);
                    EdgeRatio {
                        source: arena.name(edge.source).to_string(),
                        target: arena.name(edge.target).to_string(),
                        ratio: q.into(),
                    }
                })
                .collect(),
            timings: stats.into(),
        }
    }

    pub fn parse_mode(&self) -> Result<Mode, ReportError> {
        Mode::parse(&self.mode, self.epsilon.as_deref()).map_err(|_| ReportError::UnknownMode(self.mode.clone()))
    }

    /// Rebuilds the result against `arena`. Payoffs are taken as reported,
    /// so a verifier can compare them with the ratios.
    pub fn to_result(&self, arena: &GameArena) -> Result<EquilibriumResult, ReportError> {
        let vertex = |name: &str| arena.vertex_by_name(name).ok_or_else(|| ReportError::UnknownVertex(name.into()));
        let player = |i: usize| {
            (i < arena.player_count())
                .then_some(PlayerId(i))
                .ok_or(ReportError::UnknownPlayer(i))
        };
        let q = self.q.iter().map(|n| vertex(n)).collect::<Result<_, _>>()?;
        let s = self.s.iter().map(|n| vertex(n)).collect::<Result<_, _>>()?;
        let thresholds = self
            .thresholds
            .iter()
            .map(|t| Ok((player(t.player)?, t.bound.value()?)))
            .collect::<Result<_, ReportError>>()?;
        let mut solution = FrequencySolution::default();
        for vr in &self.vertex_ratios {
            solution.vertex_ratio.insert(vertex(&vr.vertex)?, vr.ratio.value()?);
        }
        for er in &self.edge_ratios {
            let (u, w) = (vertex(&er.source)?, vertex(&er.target)?);
            let e = arena
                .find_edge(u, w)
                .ok_or_else(|| ReportError::UnknownEdge(er.source.clone(), er.target.clone()))?;
            solution.edge_ratio.insert(e, er.ratio.value()?);
        }
        let mut raw_payoffs = BTreeMap::new();
        let mut follower_payoffs = BTreeMap::new();
        for pr in &self.players {
            let p = player(pr.player)?;
            raw_payoffs.insert(p, pr.raw.value()?);
            if arena.role(p) == Role::Follower {
                solution.incentives.insert(p, pr.incentive.value()?);
                follower_payoffs.insert(p, pr.total.value()?);
            }
        }
        Ok(EquilibriumResult {
            mode: self.parse_mode()?,
            region: Region { q, s, thresholds },
            solution,
            leader_payoff: self.leader_payoff.value()?,
            follower_payoffs,
            raw_payoffs,
        })
    }
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, ReportError> {
        serde_json::from_str(text).map_err(|e| ReportError::Json(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "arena {}", self.fingerprint).unwrap();
        for r in &self.results {
            s.push('\n');
            match &r.epsilon {
                Some(e) => writeln!(s, "mode {} (epsilon {e})", r.mode).unwrap(),
                None => writeln!(s, "mode {}", r.mode).unwrap(),
            }
            writeln!(s, "leader payoff {} ({})", r.leader_payoff.exact, r.leader_payoff.decimal).unwrap();
            writeln!(s, "{:>8} {:>9} {:>20} {:>20} {:>20}", "player", "role", "raw", "incentive", "total").unwrap();
            for p in &r.players {
                let cell = |n: &Number| format!("{} ({})", n.exact, n.decimal);
                writeln!(
                    s,
                    "{:>8} {:>9} {:>20} {:>20} {:>20}",
                    p.player,
                    p.role,
                    cell(&p.raw),
                    cell(&p.incentive),
                    cell(&p.total)
                )
                .unwrap();
            }
            writeln!(s, "Q = {{{}}}", r.q.join(", ")).unwrap();
            writeln!(s, "S = {{{}}}", r.s.join(", ")).unwrap();
            for e in &r.edge_ratios {
                writeln!(s, "  p[{} -> {}] = {} ({})", e.source, e.target, e.ratio.exact, e.ratio.decimal).unwrap();
            }
            writeln!(
                s,
                "time values {:.1} ms, enumeration {:.1} ms, lp {:.1} ms, total {:.1} ms ({} of {} programs solved)",
                r.timings.values_ms,
                r.timings.enumeration_ms,
                r.timings.lp_ms,
                r.timings.total_ms,
                r.timings.solved,
                r.timings.programs
            )
            .unwrap();
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::{solve_with, SolveOptions};
    use crate::generators::{builtin, Builtin};
    use crate::rational::frac;

    fn report(b: Builtin, mode: Mode) -> (GameArena, EquilibriumResult, RunReport) {
        let a = builtin(b);
        let (r, stats) = solve_with(&a, &mode, &SolveOptions::default()).unwrap();
        let rep = RunReport {
            fingerprint: a.fingerprint(),
            results: vec![ModeReport::new(&a, &r, &stats)],
        };
        (a, r, rep)
    }

    #[test]
    fn json_round_trip_rebuilds_results() {
        for b in Builtin::ALL {
            for m in [Mode::Incentive, Mode::Leader, Mode::SecureIncentive(frac(1, 100))] {
                let (a, r, rep) = report(b, m);
                let back = RunReport::from_json(&rep.to_json()).unwrap();
                assert_eq!(back.results[0].to_result(&a).unwrap(), r);
            }
        }
    }

    #[test]
    fn numbers_show_fraction_and_decimal() {
        let (_, _, rep) = report(Builtin::Fig2, Mode::Incentive);
        let json = rep.to_json();
        assert!(json.contains("\"exact\": \"2/3\""));
        assert!(json.contains("\"decimal\": \"0.666667\""));
        let text = rep.to_text();
        assert!(text.contains("leader payoff 2/3 (0.666667)"));
        assert!(text.contains("1/12 (0.0833333)"));
    }

    #[test]
    fn malformed_reports() {
        assert!(matches!(RunReport::from_json("{"), Err(ReportError::Json(_))));
        let (a, _, mut rep) = report(Builtin::Fig1, Mode::Incentive);
        rep.results[0].q.push("nowhere".into());
        assert_eq!(rep.results[0].to_result(&a), Err(ReportError::UnknownVertex("nowhere".into())));
    }
}
