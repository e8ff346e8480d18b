//! Leader-optimal equilibria via region enumeration and exact LPs.
//!
//! A well-behaved play is summarized by the set `Q` of vertices it visits,
//! the strongly connected set `S` it visits infinitely often and the limit
//! ratio of every edge. A follower `p` is kept on the play iff its total
//! payoff is at least its punishment value `r_p(v)` at every vertex `v` of
//! `Q` it owns. For fixed `(Q, S)` that is a linear program over the edge
//! ratios and incentives; the leader-optimal answer is the best LP over
//! all candidate regions.
//!
//! Candidate sets `Q` are generated from per-player thresholds: removing
//! every vertex whose owner's value exceeds the threshold, then pruning dead
//! ends and unreachable vertices, gives the most liberal `Q` for those
//! thresholds. Every strongly connected part of `Q` with an internal edge is
//! a candidate `S`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::arena::{ArenaError, EdgeId, GameArena, PlayerId, Role, VertexId, ZeroSumGame};
use crate::graph::{has_internal_edge, mask_of, members, prune, sccs};
use crate::lp::{check_solution, solve_lp, LinearProgram, LpOutcome, LpViolation, Relation, VarId};
use crate::rational::{parse_rational, Rational};
use crate::zerosum::{vertex_values, VertexValues};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    Incentive,
    Leader,
    Nash,
    SecureIncentive(Rational),
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Incentive => "incentive",
            Mode::Leader => "leader",
            Mode::Nash => "nash",
            Mode::SecureIncentive(_) => "secure",
        }
    }

    pub fn epsilon(&self) -> Option<&Rational> {
        match self {
            Mode::SecureIncentive(e) => Some(e),
            _ => None,
        }
    }

    /// Incentive variables appear in the constraint system.
    pub fn pays_incentives(&self) -> bool {
        matches!(self, Mode::Incentive | Mode::SecureIncentive(_))
    }

    /// `incentive`, `leader`, `nash`, or `secure` with an ε.
    pub fn parse(name: &str, epsilon: Option<&str>) -> Result<Mode, EquilibriumError> {
        match name {
            "incentive" => Ok(Mode::Incentive),
            "leader" => Ok(Mode::Leader),
            "nash" => Ok(Mode::Nash),
            "secure" | "secure_incentive" => {
                let raw = epsilon.ok_or_else(|| EquilibriumError::InvalidEpsilon("missing".into()))?;
                let e = parse_rational(raw).ok_or_else(|| EquilibriumError::InvalidEpsilon(raw.into()))?;
                if !e.is_positive() {
                    return Err(EquilibriumError::InvalidEpsilon(raw.into()));
                }
                Ok(Mode::SecureIncentive(e))
            }
            other => Err(EquilibriumError::UnknownMode(other.into())),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::SecureIncentive(e) => write!(f, "secure(ε={e})"),
            m => f.write_str(m.name()),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EquilibriumError {
    #[error(transparent)]
    Arena(#[from] ArenaError),
    #[error("no feasible region in {0} mode")]
    Infeasible(String),
    #[error("ε must be a positive rational, got `{0}`")]
    InvalidEpsilon(String),
    #[error("unknown mode `{0}` (expected incentive, leader, nash or secure)")]
    UnknownMode(String),
    #[error("secure uplift applies to incentive results, got {0} mode")]
    NotIncentive(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub q: BTreeSet<VertexId>,
    pub s: BTreeSet<VertexId>,
    /// Stability bound `max r_p(v)` over `Q ∩ V_p`, for every constrained
    /// player owning a vertex of `Q`. In Nash mode the leader is included.
    pub thresholds: BTreeMap<PlayerId, Rational>,
}

impl Region {
    fn key(&self) -> (Vec<VertexId>, Vec<VertexId>) {
        (self.q.iter().copied().collect(), self.s.iter().copied().collect())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FrequencySolution {
    /// Nonzero edge ratios `p_e`.
    pub edge_ratio: BTreeMap<EdgeId, Rational>,
    /// Nonzero vertex ratios `p_v`.
    pub vertex_ratio: BTreeMap<VertexId, Rational>,
    /// Incentive `ι_p` of every follower.
    pub incentives: BTreeMap<PlayerId, Rational>,
}

impl FrequencySolution {
    pub fn edge(&self, e: EdgeId) -> Rational {
        self.edge_ratio.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn vertex(&self, v: VertexId) -> Rational {
        self.vertex_ratio.get(&v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn incentive(&self, p: PlayerId) -> Rational {
        self.incentives.get(&p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn incentive_total(&self) -> Rational {
        self.incentives.values().sum()
    }

    pub fn support(&self) -> BTreeSet<VertexId> {
        self.vertex_ratio.keys().copied().collect()
    }

    /// Mean reward of player `p` under these ratios.
    pub fn raw_payoff(&self, arena: &GameArena, p: PlayerId) -> Rational {
        self.edge_ratio.iter().map(|(e, q)| q * arena.reward(p, *e)).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquilibriumResult {
    pub mode: Mode,
    pub region: Region,
    pub solution: FrequencySolution,
    pub leader_payoff: Rational,
    /// Raw payoff plus incentive, per follower.
    pub follower_payoffs: BTreeMap<PlayerId, Rational>,
    /// Raw payoff of every player, leader included.
    pub raw_payoffs: BTreeMap<PlayerId, Rational>,
}

impl EquilibriumResult {
    fn from_solution(arena: &GameArena, mode: Mode, region: Region, mut solution: FrequencySolution) -> Self {
        for p in arena.followers() {
            solution.incentives.entry(p).or_insert_with(Rational::zero);
        }
        let raw_payoffs: BTreeMap<PlayerId, Rational> =
            arena.players().map(|p| (p, solution.raw_payoff(arena, p))).collect();
        let leader_payoff = &raw_payoffs[&arena.leader()] - solution.incentive_total();
        let follower_payoffs = arena
            .followers()
            .map(|p| (p, &raw_payoffs[&p] + solution.incentive(p)))
            .collect();
        EquilibriumResult {
            mode,
            region,
            solution,
            leader_payoff,
            follower_payoffs,
            raw_payoffs,
        }
    }
}

/// Punishment values for the players a mode constrains.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PunishmentValues {
    pub values: BTreeMap<PlayerId, VertexValues>,
}

impl PunishmentValues {
    /// Solves `G_p` for each listed player.
    pub fn compute(arena: &GameArena, players: &[PlayerId]) -> Result<Self, ArenaError> {
        let games = players
            .iter()
            .map(|&p| ZeroSumGame::for_player(arena, p).map(|g| (p, g)))
            .collect::<Result<Vec<_>, _>>()?;
        let values = games.par_iter().map(|(p, g)| (*p, vertex_values(g))).collect();
        Ok(PunishmentValues { values })
    }

    pub fn get(&self, p: PlayerId) -> Option<&VertexValues> {
        self.values.get(&p)
    }
}

/// Players whose stability is enforced in `mode`.
pub fn constrained_players(arena: &GameArena, mode: &Mode) -> Vec<PlayerId> {
    arena
        .players()
        .filter(|&p| arena.role(p) == Role::Follower || *mode == Mode::Nash)
        .collect()
}

/// Sorted distinct values `r_p(v)` over the vertices each player owns.
pub fn follower_thresholds(arena: &GameArena, values: &PunishmentValues) -> BTreeMap<PlayerId, Vec<Rational>> {
    values
        .values
        .iter()
        .map(|(&p, vals)| {
            let set: BTreeSet<Rational> = arena
                .vertices()
                .filter(|&v| arena.owner(v) == p)
                .map(|v| vals.get(v).clone())
                .collect();
            (p, set.into_iter().collect())
        })
        .collect()
}

fn effective_thresholds(arena: &GameArena, values: &PunishmentValues, q: &BTreeSet<VertexId>) -> BTreeMap<PlayerId, Rational> {
    let mut out: BTreeMap<PlayerId, Rational> = BTreeMap::new();
    for &v in q {
        let p = arena.owner(v);
        if let Some(vals) = values.get(p) {
            let r = vals.get(v);
            match out.get_mut(&p) {
                Some(t) if *t >= *r => {}
                Some(t) => *t = r.clone(),
                None => {
                    out.insert(p, r.clone());
                }
            }
        }
    }
    out
}

fn regions_of(arena: &GameArena, values: &PunishmentValues, q_mask: &[bool]) -> Vec<Region> {
    let q: BTreeSet<VertexId> = members(q_mask).into_iter().collect();
    if q.is_empty() {
        return Vec::new();
    }
    let thresholds = effective_thresholds(arena, values, &q);
    sccs(arena, q_mask)
        .into_iter()
        .filter(|c| has_internal_edge(arena, &mask_of(arena.vertex_count(), c.iter().copied())))
        .map(|c| Region {
            q: q.clone(),
            s: c.into_iter().collect(),
            thresholds: thresholds.clone(),
        })
        .collect()
}

/// Regions for one threshold per player: `Q` is the most liberal vertex set
/// in which every vertex owned by a listed player `p` has `r_p(v) ≤ t_p`.
/// Players without an entry are unconstrained.
pub fn candidate_regions(
    arena: &GameArena,
    values: &PunishmentValues,
    combo: &BTreeMap<PlayerId, Rational>,
) -> Vec<Region> {
    let allowed: Vec<bool> = arena
        .vertices()
        .map(|v| {
            let p = arena.owner(v);
            match (combo.get(&p), values.get(p)) {
                (Some(t), Some(vals)) => vals.get(v) <= t,
                _ => true,
            }
        })
        .collect();
    regions_of(arena, values, &prune(arena, &allowed))
}

/// All most-liberal `Q` sets reachable by choosing, player by player, either
/// one of the values present in the current `Q` or the exclusion of all of
/// that player's vertices.
pub fn candidate_q_sets(arena: &GameArena, values: &PunishmentValues) -> Vec<Vec<bool>> {
    let players: Vec<PlayerId> = values.values.keys().copied().collect();
    let mut seen: HashSet<(usize, Vec<bool>)> = HashSet::new();
    let mut leaves: BTreeSet<Vec<bool>> = BTreeSet::new();
    let start = prune(arena, &vec![true; arena.vertex_count()]);
    let mut stack = vec![(0usize, start)];
    while let Some((level, q)) = stack.pop() {
        if !q[arena.initial().0] || !seen.insert((level, q.clone())) {
            continue;
        }
        if level == players.len() {
            leaves.insert(q);
            continue;
        }
        let p = players[level];
        let vals = &values.values[&p];
        let owned: Vec<VertexId> = members(&q).into_iter().filter(|&v| arena.owner(v) == p).collect();
        if owned.is_empty() {
            stack.push((level + 1, q));
            continue;
        }
        let options: BTreeSet<&Rational> = owned.iter().map(|&v| vals.get(v)).collect();
        for t in options {
            let mut allowed = q.clone();
            for &v in &owned {
                if vals.get(v) > t {
                    allowed[v.0] = false;
                }
            }
            stack.push((level + 1, prune(arena, &allowed)));
        }
        let mut allowed = q.clone();
        for &v in &owned {
            allowed[v.0] = false;
        }
        stack.push((level + 1, prune(arena, &allowed)));
    }
    leaves.into_iter().collect()
}

/// The LP of one region, with maps back to arena entities.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub program: LinearProgram,
    pub vertex_vars: Vec<(VertexId, VarId)>,
    pub edge_vars: Vec<(EdgeId, VarId)>,
    pub incentive_vars: Vec<(PlayerId, VarId)>,
}

/// Off-support entries of a frequency solution, or LP violations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolutionViolation {
    OffSupport(String),
    Constraint(LpViolation),
}

impl fmt::Display for SolutionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolutionViolation::OffSupport(v) => write!(f, "{v} must be 0 outside S"),
            SolutionViolation::Constraint(c) => c.fmt(f),
        }
    }
}

impl ConstraintSystem {
    pub fn frequency(&self, assignment: &[Rational]) -> FrequencySolution {
        let nonzero = |var: VarId| {
            let x = &assignment[var.0];
            (!x.is_zero()).then(|| x.clone())
        };
        FrequencySolution {
            edge_ratio: self.edge_vars.iter().filter_map(|&(e, x)| nonzero(x).map(|q| (e, q))).collect(),
            vertex_ratio: self.vertex_vars.iter().filter_map(|&(v, x)| nonzero(x).map(|q| (v, q))).collect(),
            incentives: self.incentive_vars.iter().map(|&(p, x)| (p, assignment[x.0].clone())).collect(),
        }
    }

    /// Checks a solution against this system, including zero ratios off `S`.
    pub fn check(&self, arena: &GameArena, sol: &FrequencySolution) -> Vec<SolutionViolation> {
        let mut out = Vec::new();
        let mut assignment = vec![Rational::zero(); self.program.variables().len()];
        let vmap: HashMap<VertexId, VarId> = self.vertex_vars.iter().copied().collect();
        let emap: HashMap<EdgeId, VarId> = self.edge_vars.iter().copied().collect();
        let imap: HashMap<PlayerId, VarId> = self.incentive_vars.iter().copied().collect();
        for (v, q) in &sol.vertex_ratio {
            match vmap.get(v) {
                Some(x) => assignment[x.0] = q.clone(),
                None if q.is_zero() => {}
                None => out.push(SolutionViolation::OffSupport(format!("p[{}]", arena.name(*v)))),
            }
        }
        for (e, q) in &sol.edge_ratio {
            match emap.get(e) {
                Some(x) => assignment[x.0] = q.clone(),
                None if q.is_zero() => {}
                None => {
                    let edge = arena.edge(*e);
                    out.push(SolutionViolation::OffSupport(format!(
                        "p[{},{}]",
                        arena.name(edge.source),
                        arena.name(edge.target)
                    )));
                }
            }
        }
        for (p, q) in &sol.incentives {
            match imap.get(p) {
                Some(x) => assignment[x.0] = q.clone(),
                None if q.is_zero() => {}
                // incentives to followers without a stability row are legal but wasted
                None if q.is_positive() => {}
                None => out.push(SolutionViolation::Constraint(LpViolation {
                    constraint: format!("nonneg[iota[{}]]", p.0),
                    lhs: q.clone(),
                    relation: Relation::Ge,
                    rhs: Rational::zero(),
                })),
            }
        }
        let lp = check_solution(&self.program, &assignment).expect("assignment matches program");
        out.extend(lp.into_iter().map(SolutionViolation::Constraint));
        out
    }
}

/// Constraint system of `region`: ratios on `S` and its internal edges,
/// flow conservation, total mass 1, and one stability row per entry of
/// `region.thresholds`. Incentive variables exist only in incentive modes.
pub fn build_constraint_system(arena: &GameArena, region: &Region, mode: &Mode) -> ConstraintSystem {
    let mut lp = LinearProgram::new();
    let in_s = mask_of(arena.vertex_count(), region.s.iter().copied());
    let vertex_vars: Vec<(VertexId, VarId)> = region
        .s
        .iter()
        .map(|&v| (v, lp.add_var(format!("p[{}]", arena.name(v)))))
        .collect();
    let edge_vars: Vec<(EdgeId, VarId)> = arena
        .edges()
        .filter(|(_, e)| in_s[e.source.0] && in_s[e.target.0])
        .map(|(id, e)| (id, lp.add_var(format!("p[{},{}]", arena.name(e.source), arena.name(e.target)))))
        .collect();
    let incentive_vars: Vec<(PlayerId, VarId)> = if mode.pays_incentives() {
        region
            .thresholds
            .keys()
            .filter(|&&p| arena.role(p) == Role::Follower)
            .map(|&p| (p, lp.add_var(format!("iota[{}]", p.0))))
            .collect()
    } else {
        Vec::new()
    };
    let one = Rational::from_integer(1.into());

    for &(v, x) in &vertex_vars {
        let mut out = vec![(x, one.clone())];
        let mut inc = vec![(x, one.clone())];
        for &(e, y) in &edge_vars {
            let edge = arena.edge(e);
            if edge.source == v {
                out.push((y, -one.clone()));
            }
            if edge.target == v {
                inc.push((y, -one.clone()));
            }
        }
        lp.add_constraint(format!("flow_out[{}]", arena.name(v)), out, Relation::Eq, Rational::zero());
        lp.add_constraint(format!("flow_in[{}]", arena.name(v)), inc, Relation::Eq, Rational::zero());
    }
    lp.add_constraint(
        "total",
        vertex_vars.iter().map(|&(_, x)| (x, one.clone())).collect(),
        Relation::Eq,
        one.clone(),
    );
    for (&p, t) in &region.thresholds {
        let mut expr: Vec<(VarId, Rational)> = edge_vars
            .iter()
            .filter(|(e, _)| !arena.reward(p, *e).is_zero())
            .map(|&(e, y)| (y, arena.reward(p, e).clone()))
            .collect();
        if let Some(&(_, i)) = incentive_vars.iter().find(|(q, _)| *q == p) {
            expr.push((i, one.clone()));
        }
        lp.add_constraint(format!("stability[{}]", p.0), expr, Relation::Ge, t.clone());
    }
    let leader = arena.leader();
    let mut objective: Vec<(VarId, Rational)> = edge_vars
        .iter()
        .filter(|(e, _)| !arena.reward(leader, *e).is_zero())
        .map(|&(e, y)| (y, arena.reward(leader, e).clone()))
        .collect();
    objective.extend(incentive_vars.iter().map(|&(_, i)| (i, -one.clone())));
    lp.set_objective(objective);
    ConstraintSystem {
        program: lp,
        vertex_vars,
        edge_vars,
        incentive_vars,
    }
}

/// Adds `ε/|P|` to every follower's incentive.
pub fn secure_epsilon(result: &EquilibriumResult, arena: &GameArena, epsilon: &Rational) -> Result<EquilibriumResult, EquilibriumError> {
    if !epsilon.is_positive() {
        return Err(EquilibriumError::InvalidEpsilon(epsilon.to_string()));
    }
    if result.mode != Mode::Incentive {
        return Err(EquilibriumError::NotIncentive(result.mode.name().into()));
    }
    let share = epsilon / Rational::from_integer(arena.player_count().into());
    let mut solution = result.solution.clone();
    for p in arena.followers() {
        *solution.incentives.entry(p).or_insert_with(Rational::zero) += &share;
    }
    Ok(EquilibriumResult::from_solution(
        arena,
        Mode::SecureIncentive(epsilon.clone()),
        result.region.clone(),
        solution,
    ))
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Worker threads for value computation and LP solving.
    pub jobs: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { jobs: 1 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub values: Duration,
    pub enumeration: Duration,
    pub lp: Duration,
    pub total: Duration,
    pub q_sets: usize,
    pub regions: usize,
    pub programs: usize,
    /// Programs actually solved; the rest were cut off by the payoff bound.
    pub solved: usize,
}

pub fn solve_equilibrium(arena: &GameArena, mode: &Mode) -> Result<EquilibriumResult, EquilibriumError> {
    solve_with(arena, mode, &SolveOptions::default()).map(|(r, _)| r)
}

pub fn solve_with(
    arena: &GameArena,
    mode: &Mode,
    options: &SolveOptions,
) -> Result<(EquilibriumResult, SolveStats), EquilibriumError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| solve_in_pool(arena, mode))
}

/// Support `S` and stability bounds, which determine a program.
type ProgramKey = (Vec<VertexId>, Vec<(PlayerId, Rational)>);

fn solve_in_pool(arena: &GameArena, mode: &Mode) -> Result<(EquilibriumResult, SolveStats), EquilibriumError> {
    let start = Instant::now();
    let mut stats = SolveStats::default();
    if let Mode::SecureIncentive(e) = mode {
        if !e.is_positive() {
            return Err(EquilibriumError::InvalidEpsilon(e.to_string()));
        }
    }
    let base_mode = if mode.pays_incentives() { Mode::Incentive } else { mode.clone() };

    let values = PunishmentValues::compute(arena, &constrained_players(arena, &base_mode))?;
    stats.values = start.elapsed();

    let t = Instant::now();
    let q_sets = candidate_q_sets(arena, &values);
    stats.q_sets = q_sets.len();
    // the LP depends on S and the stability bounds only; keep the smallest region per program
    let mut programs: BTreeMap<ProgramKey, Region> = BTreeMap::new();
    for q in &q_sets {
        for region in regions_of(arena, &values, q) {
            stats.regions += 1;
            let key = (
                region.s.iter().copied().collect::<Vec<_>>(),
                region.thresholds.iter().map(|(p, t)| (*p, t.clone())).collect::<Vec<_>>(),
            );
            match programs.get(&key) {
                Some(r) if r.key() <= region.key() => {}
                _ => {
                    programs.insert(key, region);
                }
            }
        }
    }
    stats.programs = programs.len();
    stats.enumeration = t.elapsed();

    let t = Instant::now();
    // The leader never earns more than her best edge inside S, so regions are
    // solved best bound first and skipped once their bound is strictly worse
    // than the incumbent, or equal with a larger region key. Skipped regions
    // could not win the reduction either.
    let leader = arena.leader();
    let mut regions: Vec<(Rational, Region)> = programs
        .into_values()
        .map(|r| {
            let ub = arena
                .edges()
                .filter(|(_, e)| r.s.contains(&e.source) && r.s.contains(&e.target))
                .map(|(id, _)| arena.reward(leader, id).clone())
                .max()
                .expect("regions have an internal edge");
            (ub, r)
        })
        .collect();
    regions.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.key().cmp(&b.1.key())));
    let batch = 2 * rayon::current_num_threads();
    let mut best: Option<EquilibriumResult> = None;
    for chunk in regions.chunks(batch) {
        let live: Vec<&Region> = chunk
            .iter()
            .filter(|(ub, r)| {
                best.as_ref().is_none_or(|b| {
                    *ub > b.leader_payoff || (*ub == b.leader_payoff && r.key() < b.region.key())
                })
            })
            .map(|(_, r)| r)
            .collect();
        if live.is_empty() {
            break;
        }
        stats.solved += live.len();
        let solved: Vec<EquilibriumResult> = live
            .into_par_iter()
            .filter_map(|region| {
                let system = build_constraint_system(arena, region, &base_mode);
                match solve_lp(&system.program).expect("constraint systems are well formed") {
                    LpOutcome::Optimal(s) => {
                        let sol = system.frequency(&s.assignment);
                        Some(EquilibriumResult::from_solution(arena, base_mode.clone(), region.clone(), sol))
                    }
                    // flows are bounded by the total-mass row
                    LpOutcome::Infeasible | LpOutcome::Unbounded => None,
                }
            })
            .collect();
        best = best.into_iter().chain(solved).reduce(|a, b| {
            use std::cmp::Ordering::*;
            match a.leader_payoff.cmp(&b.leader_payoff) {
                Greater => a,
                Less => b,
                Equal if a.region.key() <= b.region.key() => a,
                Equal => b,
            }
        });
    }
    stats.lp = t.elapsed();
    let best = best.ok_or_else(|| EquilibriumError::Infeasible(base_mode.name().into()))?;
    let best = match mode {
        Mode::SecureIncentive(e) => secure_epsilon(&best, arena, e)?,
        _ => best,
    };
    stats.total = start.elapsed();
    Ok((best, stats))
}
