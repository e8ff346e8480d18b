//! Plays that realize a frequency solution.
//!
//! Inside one island (a strongly connected part of the solution's support)
//! every vertex keeps a usage counter per outgoing edge and takes the first
//! edge, in input order, that is behind its target share; the first edge
//! breaks ties. Several islands are visited in rounds: round `i` spends
//! `i·c_j` moves in island `j`, where `c` is the integer vector proportional
//! to the islands' masses, so the shortest-path transfers between islands
//! vanish in the limit.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arena::{max_abs_reward, max_reward, EdgeId, GameArena, PlayerId, VertexId};
use crate::equilibria::{EquilibriumResult, FrequencySolution, Region};
use crate::graph::{mask_of, shortest_path, VertexMask};
use crate::rational::Rational;
use crate::zerosum::{punish_strategy, vertex_values, PositionalStrategy};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlayError {
    #[error("frequency solution has empty support")]
    EmptySupport,
    #[error("vertex `{to}` is unreachable from `{from}` inside Q")]
    Unreachable { from: String, to: String },
    #[error("a play needs at least {min} vertices, got {found}")]
    TooShort { min: usize, found: usize },
}

#[derive(Clone, Debug)]
struct Island {
    mask: VertexMask,
    /// Where the island was last left; `None` before the first visit.
    exit: Option<VertexId>,
    weight: u64,
}

/// Deterministic, unbounded play for a frequency solution.
#[derive(Clone, Debug)]
pub struct PlaySchedule<'a> {
    arena: &'a GameArena,
    q: VertexMask,
    edge_ratio: Vec<Rational>,
    vertex_ratio: Vec<Rational>,
    visits: Vec<BigInt>,
    usage: Vec<BigInt>,
    islands: Vec<Island>,
    current: VertexId,
    pending: VecDeque<VertexId>,
    started: bool,
    round: u64,
    island: usize,
    remaining: u64,
}

impl<'a> PlaySchedule<'a> {
    pub fn new(arena: &'a GameArena, solution: &FrequencySolution, region: &Region) -> Result<Self, PlayError> {
        let n = arena.vertex_count();
        let support: Vec<VertexId> = solution
            .vertex_ratio
            .iter()
            .filter(|(_, q)| q.is_positive())
            .map(|(v, _)| *v)
            .collect();
        if support.is_empty() {
            return Err(PlayError::EmptySupport);
        }
        let mut edge_ratio = vec![Rational::zero(); arena.edge_count()];
        for (e, q) in &solution.edge_ratio {
            edge_ratio[e.0] = q.clone();
        }
        let mut vertex_ratio = vec![Rational::zero(); n];
        for (v, q) in &solution.vertex_ratio {
            vertex_ratio[v.0] = q.clone();
        }
        let islands = support_islands(arena, &edge_ratio, &vertex_ratio);
        let mut q = mask_of(n, region.q.iter().copied());
        q[arena.initial().0] = true;
        for &v in &support {
            q[v.0] = true;
        }
        Ok(PlaySchedule {
            arena,
            q,
            edge_ratio,
            vertex_ratio,
            visits: vec![BigInt::zero(); n],
            usage: vec![BigInt::zero(); arena.edge_count()],
            islands,
            current: arena.initial(),
            pending: VecDeque::new(),
            started: false,
            round: 0,
            island: 0,
            remaining: 0,
        })
    }

    pub fn from_result(arena: &'a GameArena, result: &EquilibriumResult) -> Result<Self, PlayError> {
        Self::new(arena, &result.solution, &result.region)
    }

    pub fn island_count(&self) -> usize {
        self.islands.len()
    }

    /// Integer island weights `c_j`.
    pub fn island_weights(&self) -> Vec<u64> {
        self.islands.iter().map(|i| i.weight).collect()
    }

    /// The first `moves + 1` vertices of the play.
    pub fn take_moves(self, moves: usize) -> Result<Vec<VertexId>, PlayError> {
        let mut out = Vec::with_capacity(moves + 1);
        for v in self {
            out.push(v?);
            if out.len() == moves + 1 {
                break;
            }
        }
        Ok(out)
    }

    fn counter_step(&mut self) -> VertexId {
        let v = self.current;
        self.visits[v.0] += 1;
        let pv = &self.vertex_ratio[v.0];
        let out: Vec<EdgeId> = self
            .arena
            .out_edges(v)
            .iter()
            .copied()
            .filter(|e| self.edge_ratio[e.0].is_positive())
            .collect();
        // usage·p_v < p_e·visits, compared on cross-multiplied integers
        let behind = |e: &EdgeId| {
            let pe = &self.edge_ratio[e.0];
            let lhs = &self.usage[e.0] * pv.numer() * pe.denom();
            let rhs = pe.numer() * &self.visits[v.0] * pv.denom();
            lhs < rhs
        };
        let e = out.iter().copied().find(behind).unwrap_or(out[0]);
        self.usage[e.0] += 1;
        self.arena.edge(e).target
    }

    fn start_segment(&mut self) -> Result<(), PlayError> {
        if self.round == 0 {
            self.round = 1;
            self.island = 0;
        } else {
            self.islands[self.island].exit = Some(self.current);
            self.island += 1;
            if self.island == self.islands.len() {
                self.island = 0;
                self.round += 1;
            }
        }
        let isl = &self.islands[self.island];
        self.remaining = self.round * isl.weight;
        if isl.mask[self.current.0] && (isl.exit.is_none() || isl.exit == Some(self.current)) {
            return Ok(());
        }
        let target = isl.exit;
        let mask = isl.mask.clone();
        let path = match target {
            Some(t) => shortest_path(self.arena, self.current, &self.q, |x| x == t),
            None => shortest_path(self.arena, self.current, &self.q, |x| mask[x.0]),
        }
        .ok_or_else(|| PlayError::Unreachable {
            from: self.arena.name(self.current).to_string(),
            to: match target {
                Some(t) => self.arena.name(t).to_string(),
                None => format!("island {}", self.island + 1),
            },
        })?;
        self.pending.extend(path.into_iter().skip(1));
        Ok(())
    }
}

impl Iterator for PlaySchedule<'_> {
    type Item = Result<VertexId, PlayError>;

    fn next(&mut self) -> Option<Self::Item> {
        if !self.started {
            self.started = true;
            return Some(Ok(self.current));
        }
        loop {
            if let Some(v) = self.pending.pop_front() {
                self.current = v;
                return Some(Ok(v));
            }
            if self.remaining > 0 {
                self.remaining -= 1;
                self.current = self.counter_step();
                return Some(Ok(self.current));
            }
            if let Err(e) = self.start_segment() {
                return Some(Err(e));
            }
        }
    }
}

/// Strongly connected parts of the support, with integer mass ratios.
fn support_islands(arena: &GameArena, edge_ratio: &[Rational], vertex_ratio: &[Rational]) -> Vec<Island> {
    let n = arena.vertex_count();
    let in_support: Vec<bool> = vertex_ratio.iter().map(|q| q.is_positive()).collect();
    // restrict to positive edges by building a filtered arena view
    let positive = |e: EdgeId| edge_ratio[e.0].is_positive();
    let comps = support_components(arena, &in_support, positive);
    let masses: Vec<Rational> = comps
        .iter()
        .map(|c| c.iter().map(|v| vertex_ratio[v.0].clone()).sum())
        .collect();
    let lcm = masses.iter().fold(BigInt::one(), |acc, m| acc.lcm(m.denom()));
    let scaled: Vec<BigInt> = masses.iter().map(|m| (m * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = scaled.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    comps
        .into_iter()
        .zip(scaled)
        .map(|(c, s)| Island {
            mask: mask_of(n, c),
            exit: None,
            weight: (s / &g).to_u64().expect("island weight fits in u64"),
        })
        .collect()
}

/// SCCs of the graph of support vertices and positive edges, ordered by
/// smallest vertex.
fn support_components(arena: &GameArena, within: &[bool], positive: impl Fn(EdgeId) -> bool) -> Vec<Vec<VertexId>> {
    let n = arena.vertex_count();
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            arena
                .out_edges(VertexId(v))
                .iter()
                .filter(|&&e| positive(e) && within[arena.edge(e).target.0])
                .map(|&e| arena.edge(e).target.0)
                .collect()
        })
        .collect();
    let reach = |from: usize| {
        let mut seen = vec![false; n];
        seen[from] = true;
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            for &t in &succ[v] {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    };
    let reach_all: Vec<Vec<bool>> = (0..n).map(|v| if within[v] { reach(v) } else { Vec::new() }).collect();
    let mut assigned = vec![false; n];
    let mut out = Vec::new();
    for v in 0..n {
        if !within[v] || assigned[v] {
            continue;
        }
        let comp: Vec<VertexId> = (v..n)
            .filter(|&u| within[u] && !assigned[u] && reach_all[v][u] && reach_all[u][v])
            .map(VertexId)
            .collect();
        for u in &comp {
            assigned[u.0] = true;
        }
        out.push(comp);
    }
    out
}

/// Play for a solution supported on one island: transfer into the support,
/// then the counter rule.
pub fn schedule_single_scc(
    arena: &GameArena,
    solution: &FrequencySolution,
    region: &Region,
    moves: usize,
) -> Result<Vec<VertexId>, PlayError> {
    PlaySchedule::new(arena, solution, region)?.take_moves(moves)
}

/// Play for a solution with any number of islands.
pub fn schedule_multi_scc(
    arena: &GameArena,
    solution: &FrequencySolution,
    region: &Region,
    moves: usize,
) -> Result<Vec<VertexId>, PlayError> {
    PlaySchedule::new(arena, solution, region)?.take_moves(moves)
}

/// Average edge reward of every player along `play`, with incentives added
/// for followers and their sum deducted for the leader.
pub fn empirical_payoffs(
    play: &[VertexId],
    arena: &GameArena,
    incentives: &BTreeMap<PlayerId, Rational>,
) -> Result<BTreeMap<PlayerId, Rational>, PlayError> {
    if play.len() < 2 {
        return Err(PlayError::TooShort { min: 2, found: play.len() });
    }
    let mut sums: Vec<Rational> = vec![Rational::zero(); arena.player_count()];
    for w in play.windows(2) {
        let e = arena.find_edge(w[0], w[1]).expect("play follows arena edges");
        for (p, r) in arena.rewards_of_edge(e).iter().enumerate() {
            sums[p] += r;
        }
    }
    let moves = Rational::from_integer(BigInt::from(play.len() - 1));
    let total: Rational = incentives.values().sum();
    Ok(arena
        .players()
        .map(|p| {
            let avg = &sums[p.0] / &moves;
            let adj = if p == arena.leader() {
                avg - &total
            } else {
                avg + incentives.get(&p).cloned().unwrap_or_else(Rational::zero)
            };
            (p, adj)
        })
        .collect())
}

/// Per-edge empirical frequency along a play.
pub fn edge_frequencies(play: &[VertexId], arena: &GameArena) -> Vec<Rational> {
    let mut counts = vec![0u64; arena.edge_count()];
    for w in play.windows(2) {
        counts[arena.find_edge(w[0], w[1]).expect("play follows arena edges").0] += 1;
    }
    let moves = BigInt::from(play.len().saturating_sub(1).max(1));
    counts
        .into_iter()
        .map(|c| Rational::new(BigInt::from(c), moves.clone()))
        .collect()
}

/// Convergence tolerance `max|reward| · 2|V| / horizon` for single-island plays.
pub fn payoff_tolerance(arena: &GameArena, horizon: usize) -> Rational {
    let n = BigInt::from(2 * arena.vertex_count());
    max_abs_reward(arena) * Rational::new(n, BigInt::from(horizon.max(1)))
}

/// Auditable description of the perfectly incentivised profile behind a
/// result: constant on-path incentives, one coalition strategy per possible
/// deviator, and the top-up paid to compliant punishers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PspDescription {
    pub incentives: BTreeMap<PlayerId, Rational>,
    pub punishments: BTreeMap<PlayerId, PositionalStrategy>,
    /// Punishers are paid up to this total per step.
    pub top_up: Rational,
}

impl PspDescription {
    /// On-path incentive of `p`; it does not depend on the history.
    pub fn on_path_incentive(&self, p: PlayerId, _history: &[VertexId]) -> Rational {
        self.incentives.get(&p).cloned().unwrap_or_else(Rational::zero)
    }

    /// Incentive paid to a compliant punisher whose step earned `reward`.
    pub fn punisher_incentive(&self, reward: &Rational) -> Rational {
        &self.top_up - reward
    }
}

/// Coalition strategy of every follower's punishment game.
pub fn punishment_strategies(arena: &GameArena) -> BTreeMap<PlayerId, PositionalStrategy> {
    arena
        .followers()
        .map(|p| {
            let g = crate::arena::punishment_game(arena, p).expect("followers have punishment games");
            let vals = vertex_values(&g);
            (p, punish_strategy(&g, &vals))
        })
        .collect()
}

pub fn psp_description(
    arena: &GameArena,
    result: &EquilibriumResult,
    punishments: BTreeMap<PlayerId, PositionalStrategy>,
) -> PspDescription {
    PspDescription {
        incentives: arena.followers().map(|p| (p, result.solution.incentive(p))).collect(),
        punishments,
        top_up: max_reward(arena).0 + Rational::one(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::{solve_equilibrium, Mode};
    use crate::generators::{builtin, random_game, Builtin, RandomGameParams};
    use crate::rational::{frac, int};
    use num_traits::Signed;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn names(a: &GameArena, vs: &[VertexId]) -> Vec<String> {
        vs.iter().map(|v| a.name(*v).to_string()).collect()
    }

    #[test]
    fn fig1_play_enters_the_loop() {
        let a = builtin(Builtin::Fig1);
        let r = solve_equilibrium(&a, &Mode::Incentive).unwrap();
        let p = schedule_single_scc(&a, &r.solution, &r.region, 6).unwrap();
        assert_eq!(names(&a, &p), ["1", "2", "3", "3", "3", "3", "3"]);
    }

    #[test]
    fn fig2_play_cycles_the_inner_ring() {
        let a = builtin(Builtin::Fig2);
        let r = solve_equilibrium(&a, &Mode::Incentive).unwrap();
        let p = schedule_single_scc(&a, &r.solution, &r.region, 12).unwrap();
        assert_eq!(names(&a, &p).join(""), "1234123412341");
    }

    #[test]
    fn two_cycle_alternates() {
        let mut b = crate::arena::ArenaBuilder::new(1, 0);
        b.vertex("a", 0).vertex("b", 0).initial("a");
        b.edge("a", "b", vec![int(1)]).edge("b", "a", vec![int(0)]);
        let a = b.build().unwrap();
        let r = solve_equilibrium(&a, &Mode::Leader).unwrap();
        assert_eq!(r.solution.vertex(VertexId(0)), frac(1, 2));
        let p = schedule_single_scc(&a, &r.solution, &r.region, 10).unwrap();
        assert_eq!(names(&a, &p).join(""), "ababababab a".replace(' ', ""));
    }

    #[test]
    fn counter_rule_splits_a_vertex() {
        // vertex 1 of fig2 shared by the inner ring and its outer ring, equal mass
        let a = builtin(Builtin::Fig2);
        let v = |n: &str| a.vertex_by_name(n).unwrap();
        let e = |x: &str, y: &str| a.find_edge(v(x), v(y)).unwrap();
        let mut sol = FrequencySolution::default();
        for (x, y) in [("1", "2"), ("2", "3"), ("3", "4"), ("4", "1")] {
            sol.edge_ratio.insert(e(x, y), frac(1, 8));
        }
        for (x, y) in [("1", "5"), ("5", "6"), ("6", "1")] {
            sol.edge_ratio.insert(e(x, y), frac(1, 6));
        }
        for x in ["2", "3", "4"] {
            sol.vertex_ratio.insert(v(x), frac(1, 8));
        }
        for x in ["5", "6"] {
            sol.vertex_ratio.insert(v(x), frac(1, 6));
        }
        sol.vertex_ratio.insert(v("1"), frac(1, 8) + frac(1, 6));
        let region = Region {
            q: a.vertices().collect(),
            s: sol.support(),
            thresholds: BTreeMap::new(),
        };
        let sched = PlaySchedule::new(&a, &sol, &region).unwrap();
        assert_eq!(sched.island_count(), 1);
        let play = sched.take_moves(7 * 1000).unwrap();
        let got = empirical_payoffs(&play, &a, &BTreeMap::new()).unwrap();
        // player 1 earns 1/4 on the inner ring and 1/3 on its outer ring
        let expected = (frac(1, 4) + frac(1, 3)) / int(2);
        let err = (&got[&PlayerId(1)] - &expected).abs();
        assert!(err <= payoff_tolerance(&a, 7000), "{got:?}");
    }

    #[test]
    fn two_islands_share_time_by_mass() {
        let a = builtin(Builtin::Fig2);
        let v = |n: &str| a.vertex_by_name(n).unwrap();
        let e = |x: &str, y: &str| a.find_edge(v(x), v(y)).unwrap();
        let mut sol = FrequencySolution::default();
        for (x, y) in [("1", "5"), ("5", "6"), ("6", "1"), ("2", "7"), ("7", "8"), ("8", "2")] {
            sol.edge_ratio.insert(e(x, y), frac(1, 6));
        }
        for x in ["1", "5", "6", "2", "7", "8"] {
            sol.vertex_ratio.insert(v(x), frac(1, 6));
        }
        let region = Region {
            q: a.vertices().collect(),
            s: a.vertices().collect(),
            thresholds: BTreeMap::new(),
        };
        let sched = PlaySchedule::new(&a, &sol, &region).unwrap();
        assert_eq!(sched.island_weights(), vec![1, 1]);
        let horizon = 20_000;
        let play = sched.take_moves(horizon).unwrap();
        let freq = edge_frequencies(&play, &a);
        let transfer: Rational = [("2", "3"), ("3", "4"), ("4", "1"), ("1", "2")]
            .iter()
            .map(|(x, y)| freq[e(x, y).0].clone())
            .sum();
        // transfers take O(sqrt(T)) of T moves
        assert!(transfer < frac(1, 20), "{transfer}");
        let got = empirical_payoffs(&play, &a, &BTreeMap::new()).unwrap();
        for p in [1, 2] {
            assert!((&got[&PlayerId(p)] - frac(1, 6)).abs() < frac(1, 50), "{got:?}");
        }
    }

    #[test]
    fn empirical_payoffs_basics() {
        let mut b = crate::arena::ArenaBuilder::new(2, 0);
        b.vertex("x", 0).initial("x").edge("x", "x", vec![int(3), int(-2)]);
        let a = b.build().unwrap();
        let inc = BTreeMap::from([(PlayerId(1), frac(1, 2))]);
        for len in [2, 5, 17] {
            let play = vec![VertexId(0); len];
            let got = empirical_payoffs(&play, &a, &inc).unwrap();
            assert_eq!(got[&PlayerId(0)], frac(5, 2));
            assert_eq!(got[&PlayerId(1)], frac(-3, 2));
        }
        assert!(matches!(empirical_payoffs(&[VertexId(0)], &a, &inc), Err(PlayError::TooShort { .. })));
    }

    #[test]
    fn fig1_and_fig2_convergence() {
        for b in [Builtin::Fig1, Builtin::Fig2] {
            let a = builtin(b);
            let r = solve_equilibrium(&a, &Mode::Incentive).unwrap();
            for horizon in [1000, 10_000] {
                let play = schedule_single_scc(&a, &r.solution, &r.region, horizon).unwrap();
                let got = empirical_payoffs(&play, &a, &r.solution.incentives).unwrap();
                let tol = payoff_tolerance(&a, horizon);
                assert!((&got[&a.leader()] - &r.leader_payoff).abs() <= tol);
                for (p, x) in &r.follower_payoffs {
                    assert!((&got[p] - x).abs() <= tol, "{b} {p}");
                }
                let freq = edge_frequencies(&play, &a);
                let ftol = Rational::new(BigInt::from(10 * a.vertex_count()), BigInt::from(horizon));
                for (id, _) in a.edges() {
                    assert!((&freq[id.0] - r.solution.edge(id)).abs() <= ftol);
                }
            }
        }
    }

    #[test]
    fn psp_descriptions() {
        let a = builtin(Builtin::Fig1);
        let r = solve_equilibrium(&a, &Mode::Incentive).unwrap();
        let d = psp_description(&a, &r, punishment_strategies(&a));
        let g3 = &d.punishments[&PlayerId(2)];
        let two = a.vertex_by_name("2").unwrap();
        assert_eq!(a.name(a.edge(g3.get(two).unwrap()).target), "3");
        assert_eq!(d.top_up, int(10));
        assert_eq!(d.punisher_incentive(&int(-9)), int(19));
        assert_eq!(d.on_path_incentive(PlayerId(0), &[]), int(1));
        assert_eq!(d.on_path_incentive(PlayerId(0), &[two, two]), int(1));

        let a = builtin(Builtin::Fig2);
        let r = solve_equilibrium(&a, &Mode::Incentive).unwrap();
        let d = psp_description(&a, &r, punishment_strategies(&a));
        assert_eq!(d.incentives.len(), 4);
        assert!(d.incentives.values().all(|i| *i == frac(1, 12)));

        let mut b = crate::arena::ArenaBuilder::new(1, 0);
        b.vertex("x", 0).initial("x").edge("x", "x", vec![int(0)]);
        let a = b.build().unwrap();
        assert!(punishment_strategies(&a).is_empty());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn plays_stay_in_q_and_settle_in_s(seed in any::<u64>(), n in 2usize..9) {
            let a = random_game(&RandomGameParams { seed, vertices: n, players: 3, density: 0.5 });
            let r = solve_equilibrium(&a, &Mode::Incentive).unwrap();
            let sched = PlaySchedule::from_result(&a, &r).unwrap();
            let single = sched.island_count() == 1;
            let play = sched.take_moves(400).unwrap();
            for w in play.windows(2) {
                prop_assert!(a.find_edge(w[0], w[1]).is_some());
            }
            for v in &play {
                prop_assert!(r.region.q.contains(v));
            }
            if single {
                let support: BTreeSet<VertexId> = r.solution.support();
                let first = play.iter().position(|v| support.contains(v)).unwrap();
                prop_assert!(play[first..].iter().all(|v| support.contains(v)));
                let got = empirical_payoffs(&play, &a, &r.solution.incentives).unwrap();
                prop_assert!((&got[&a.leader()] - &r.leader_payoff).abs() <= payoff_tolerance(&a, 400));
            }
        }
    }
}
