//! Acceptance criteria for the `mmpg` solver. Each check returns a one-line
//! summary on success and the reason on failure.

#[path = "../../core/tests/common/mod.rs"]
pub mod oracles;

use std::time::{Duration, Instant};

use mmpg::arena::{GameArena, PlayerId, ZeroSumGame};
use mmpg::cli::predicted_frontier;
use mmpg::equilibria::{solve_equilibrium, solve_with, EquilibriumResult, Mode, SolveOptions};
use mmpg::generators::{builtin, random_game, token_ring, Builtin, RandomGameParams, TokenRingParams};
use mmpg::lp::{solve_lp, LpOutcome};
use mmpg::play::{empirical_payoffs, payoff_tolerance, PlaySchedule};
use mmpg::rational::{frac, int, Rational};
use mmpg::zerosum::vertex_values;
use num_traits::Signed;

pub type Outcome = Result<String, String>;

fn solve(a: &GameArena, m: Mode) -> EquilibriumResult {
    solve_equilibrium(a, &m).unwrap_or_else(|e| panic!("{m}: {e}"))
}

fn within(limit: Duration, start: Instant, what: &str) -> Result<Duration, String> {
    let t = start.elapsed();
    if t < limit {
        Ok(t)
    } else {
        Err(format!("{what} took {t:.2?}, limit {limit:?}"))
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn golden_fig1() -> Outcome {
    let start = Instant::now();
    let a = builtin(Builtin::Fig1);
    let inc = solve(&a, Mode::Incentive);
    let lead = solve(&a, Mode::Leader);
    let nash = solve(&a, Mode::Nash);
    let t = within(Duration::from_secs(1), start, "fig1")?;
    let (p0, p1, p2) = (PlayerId(0), PlayerId(1), PlayerId(2));
    ensure(inc.leader_payoff == int(8), || format!("incentive leader payoff {}", inc.leader_payoff))?;
    ensure(inc.solution.incentive(p0) == int(1), || format!("iota_0 = {}", inc.solution.incentive(p0)))?;
    let raw = [&inc.raw_payoffs[&p0], &inc.raw_payoffs[&p1], &inc.raw_payoffs[&p2]];
    ensure(raw == [&int(0), &int(9), &int(-9)], || format!("raw payoffs {raw:?}"))?;
    // Follower totals next to the leader's raw payoff: (1, 9, -9).
    let shown = [&inc.follower_payoffs[&p0], &inc.raw_payoffs[&p1], &inc.follower_payoffs[&p2]];
    ensure(shown == [&int(1), &int(9), &int(-9)], || format!("payoff vector {shown:?}"))?;
    ensure(lead.leader_payoff == int(1), || format!("leader mode {}", lead.leader_payoff))?;
    ensure(nash.leader_payoff == int(0), || format!("nash mode {}", nash.leader_payoff))?;
    Ok(format!("incentive 8 (iota_0 = 1, raw 0/9/-9, totals 1/8/-9), leader 1, nash 0 in {t:.2?}"))
}

pub fn golden_fig2() -> Outcome {
    let start = Instant::now();
    let a = builtin(Builtin::Fig2);
    let inc = solve(&a, Mode::Incentive);
    let lead = solve(&a, Mode::Leader);
    let t = within(Duration::from_secs(1), start, "fig2")?;
    ensure(inc.leader_payoff == frac(2, 3), || format!("incentive leader payoff {}", inc.leader_payoff))?;
    for p in a.followers() {
        ensure(inc.follower_payoffs[&p] == frac(1, 3), || format!("{p} total {}", inc.follower_payoffs[&p]))?;
        ensure(inc.solution.incentive(p) == frac(1, 12), || format!("{p} incentive {}", inc.solution.incentive(p)))?;
    }
    ensure(lead.leader_payoff == frac(1, 3), || format!("leader mode {}", lead.leader_payoff))?;
    Ok(format!("incentive 2/3 with totals 1/3 and iota 1/12, leader 1/3 in {t:.2?}"))
}

pub fn secure_example() -> Outcome {
    let a = builtin(Builtin::Secure);
    let eps = frac(1, 100);
    let r = solve(&a, Mode::SecureIncentive(eps.clone()));
    let half = &eps / int(2);
    ensure(r.leader_payoff == int(1) - &half, || format!("leader {}", r.leader_payoff))?;
    for p in a.followers() {
        let uplift = &r.follower_payoffs[&p] - &r.raw_payoffs[&p];
        ensure(uplift == half, || format!("{p} uplift {uplift}"))?;
    }
    Ok(format!("epsilon 1/100: leader {}, follower uplift {half}", r.leader_payoff))
}

pub fn token_ring_frontier() -> Outcome {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    let mut points = 0;
    for n in 3..=5usize {
        for d in 1..=n + 2 {
            let a = token_ring(TokenRingParams { n, d });
            let inc = solve(&a, Mode::Incentive).leader_payoff;
            let lead = solve(&a, Mode::Leader).leader_payoff;
            let helps = inc > lead;
            let predicted = predicted_frontier(n as u64, d as u64);
            points += 1;
            if helps != predicted {
                mismatches.push(format!("(n={n}, d={d}: incentive {inc}, leader {lead}, predicted helps {predicted})"));
            }
        }
    }
    let t = within(Duration::from_secs(60), start, "token-ring sweep")?;
    ensure(mismatches.is_empty(), || {
        format!("{} of {points} points disagree with n > d > n(n-1)/(2n-1): {}", mismatches.len(), mismatches.join(" "))
    })?;
    Ok(format!("{points} points match in {t:.2?}"))
}

pub fn ordering() -> Outcome {
    let start = Instant::now();
    for seed in 0..200 {
        let a = oracles::random_arena(seed, 12, 3, 5);
        let nash = solve(&a, Mode::Nash).leader_payoff;
        let lead = solve(&a, Mode::Leader).leader_payoff;
        let inc = solve(&a, Mode::Incentive).leader_payoff;
        ensure(nash <= lead && lead <= inc, || format!("seed {seed}: nash {nash}, leader {lead}, incentive {inc}"))?;
    }
    let t = within(Duration::from_secs(300), start, "ordering check")?;
    Ok(format!("nash <= leader <= incentive on 200 arenas in {t:.2?}"))
}

pub fn zero_sum_oracle() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for seed in 0..100 {
        let a = oracles::random_arena(10_000 + seed, 8, 2, 5);
        for p in a.players() {
            let g = ZeroSumGame::for_player(&a, p).unwrap();
            let fast = oracles::values_vec(&vertex_values(&g));
            let brute = oracles::brute_values(&g);
            ensure(fast == brute, || format!("seed {seed}, {p}: {fast:?} vs {brute:?}"))?;
            checked += 1;
        }
    }
    let t = within(Duration::from_secs(300), start, "zero-sum oracle")?;
    Ok(format!("{checked} games agree with positional brute force in {t:.2?}"))
}

pub fn lp_oracle() -> Outcome {
    let mut feasible = 0;
    for seed in 0..50 {
        let p = oracles::random_lp(seed);
        let brute = oracles::brute_lp(&p);
        let got = match solve_lp(&p).unwrap() {
            LpOutcome::Optimal(s) => Some(s.value),
            LpOutcome::Infeasible => None,
            LpOutcome::Unbounded => return Err(format!("seed {seed}: unbounded on a bounded program")),
        };
        ensure(got == brute, || format!("seed {seed}: simplex {got:?}, brute force {brute:?}"))?;
        feasible += usize::from(got.is_some());
    }
    Ok(format!("50 programs agree ({feasible} feasible)"))
}

pub fn play_convergence() -> Outcome {
    const HORIZON: usize = 10_000;
    let mut report = Vec::new();
    for b in [Builtin::Fig1, Builtin::Fig2] {
        let a = builtin(b);
        let r = solve(&a, Mode::Incentive);
        let play = PlaySchedule::from_result(&a, &r)
            .and_then(|s| s.take_moves(HORIZON))
            .map_err(|e| format!("{b}: {e}"))?;
        let got = empirical_payoffs(&play, &a, &r.solution.incentives).map_err(|e| e.to_string())?;
        let tol = payoff_tolerance(&a, HORIZON);
        let mut worst = Rational::from_integer(0.into());
        for p in a.players() {
            let want = if p == a.leader() { &r.leader_payoff } else { &r.follower_payoffs[&p] };
            let gap = (&got[&p] - want).abs();
            ensure(gap <= tol, || format!("{b} {p}: empirical {} vs {want}, tolerance {tol}", got[&p]))?;
            worst = worst.max(gap);
        }
        report.push(format!("{b} worst gap {worst} <= {tol}"));
    }
    Ok(report.join(", "))
}

pub fn scale() -> Outcome {
    let start = Instant::now();
    let a = random_game(&RandomGameParams {
        seed: 0,
        vertices: 100,
        players: 10,
        density: 0.1,
    });
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let (r, stats) = solve_with(&a, &Mode::Incentive, &SolveOptions { jobs }).map_err(|e| e.to_string())?;
    let t = within(Duration::from_secs(30 * 60), start, "100-vertex instance")?;
    Ok(format!(
        "100 vertices, 10 players: leader payoff {} after {} of {} programs in {t:.2?}",
        r.leader_payoff, stats.solved, stats.programs
    ))
}

/// Criteria in order, numbered from 1.
pub const CRITERIA: [fn() -> Outcome; 9] = [
    golden_fig1,
    golden_fig2,
    secure_example,
    token_ring_frontier,
    ordering,
    zero_sum_oracle,
    lp_oracle,
    play_convergence,
    scale,
];
