//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use mmpg::arena::{ArenaBuilder, EdgeId, GameArena, PlayerId, VertexId, ZeroSumGame};
use mmpg::lp::{LinearProgram, Relation};
use mmpg::rational::{int, Rational};
use mmpg::zerosum::{PositionalStrategy, VertexValues};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Mean of the cycle reached from `start` when every vertex follows `choice`.
pub fn lasso_mean(g: &ZeroSumGame<'_>, choice: &[EdgeId], start: VertexId) -> Rational {
    let a = g.arena();
    let mut seen = vec![usize::MAX; a.vertex_count()];
    let mut path = Vec::new();
    let mut v = start;
    while seen[v.0] == usize::MAX {
        seen[v.0] = path.len();
        path.push(choice[v.0]);
        v = a.edge(choice[v.0]).target;
    }
    let cycle = &path[seen[v.0]..];
    let sum: Rational = cycle.iter().map(|e| g.reward(*e).clone()).sum();
    sum / int(cycle.len() as i64)
}

fn all_choices(a: &GameArena, vs: &[VertexId]) -> Vec<Vec<(VertexId, EdgeId)>> {
    let mut out = vec![Vec::new()];
    for &v in vs {
        let mut next = Vec::new();
        for partial in &out {
            for &e in a.out_edges(v) {
                let mut p = partial.clone();
                p.push((v, e));
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// `max` over protagonist positional strategies of `min` over coalition ones.
pub fn brute_values(g: &ZeroSumGame<'_>) -> Vec<Rational> {
    let a = g.arena();
    let n = a.vertex_count();
    let mine = all_choices(a, &g.protagonist_vertices());
    let theirs = all_choices(a, &g.coalition_vertices());
    let mut best: Vec<Option<Rational>> = vec![None; n];
    for sigma in &mine {
        let mut worst: Vec<Option<Rational>> = vec![None; n];
        for tau in &theirs {
            let mut choice = vec![EdgeId(0); n];
            for &(v, e) in sigma.iter().chain(tau) {
                choice[v.0] = e;
            }
            for v in a.vertices() {
                let m = lasso_mean(g, &choice, v);
                if worst[v.0].as_ref().is_none_or(|w| m < *w) {
                    worst[v.0] = Some(m);
                }
            }
        }
        for v in 0..n {
            let w = worst[v].clone().unwrap();
            if best[v].as_ref().is_none_or(|b| w > *b) {
                best[v] = Some(w);
            }
        }
    }
    best.into_iter().map(Option::unwrap).collect()
}

/// Worst and best protagonist payoff from each vertex over all positional
/// choices at the vertices `strategy` leaves open.
pub fn outcome_range(g: &ZeroSumGame<'_>, strategy: &PositionalStrategy) -> (Vec<Rational>, Vec<Rational>) {
    let a = g.arena();
    let n = a.vertex_count();
    let open: Vec<VertexId> = a.vertices().filter(|v| strategy.get(*v).is_none()).collect();
    let mut lo: Vec<Option<Rational>> = vec![None; n];
    let mut hi: Vec<Option<Rational>> = vec![None; n];
    for free in all_choices(a, &open) {
        let mut choice = vec![EdgeId(0); n];
        for (v, e) in free.into_iter().chain(strategy.choice.iter().map(|(v, e)| (*v, *e))) {
            choice[v.0] = e;
        }
        for v in a.vertices() {
            let m = lasso_mean(g, &choice, v);
            if lo[v.0].as_ref().is_none_or(|b| m < *b) {
                lo[v.0] = Some(m.clone());
            }
            if hi[v.0].as_ref().is_none_or(|b| m > *b) {
                hi[v.0] = Some(m);
            }
        }
    }
    let unwrap = |v: Vec<Option<Rational>>| v.into_iter().map(Option::unwrap).collect();
    (unwrap(lo), unwrap(hi))
}

/// Random arena with 1 to `max_vertices` vertices, uniformly random owners,
/// 1 to 3 distinct successors per vertex and integer rewards in `[-w, w]`.
/// Player 0 leads.
pub fn random_arena(seed: u64, max_vertices: usize, players: usize, w: i64) -> GameArena {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_vertices);
    let mut b = ArenaBuilder::new(players, 0);
    for v in 0..n {
        b.vertex(v.to_string(), rng.gen_range(0..players));
    }
    b.initial("0");
    for v in 0..n {
        let k = rng.gen_range(1..=3usize).min(n);
        let targets = rand::seq::index::sample(&mut rng, n, k).into_vec();
        for t in targets {
            let rewards = (0..players).map(|_| int(rng.gen_range(-w..=w))).collect();
            b.edge(v.to_string(), t.to_string(), rewards);
        }
    }
    b.build().unwrap()
}

pub fn values_vec(v: &VertexValues) -> Vec<Rational> {
    v.as_slice().to_vec()
}

/// Exact Gaussian elimination; `None` if singular.
#[allow(clippy::needless_range_loop)]
fn solve_square(mut m: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = &m[r][col] / &m[col][col];
                for c in col..n {
                    let d = &f * &m[col][c];
                    m[r][c] -= d;
                }
                let d = &f * &b[col];
                b[r] -= d;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &m[i][i]).collect())
}

/// Optimum over basic feasible points: every choice of `n` tight rows among
/// the constraints and nonnegativity bounds. `None` if infeasible. Assumes a
/// bounded feasible region.
pub fn brute_lp(p: &LinearProgram) -> Option<Rational> {
    let n = p.variables().len();
    let mut rows: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for c in p.constraints() {
        let mut a = vec![Rational::zero(); n];
        for (v, q) in &c.expr {
            a[v.0] += q;
        }
        rows.push((a, c.rhs.clone()));
    }
    for i in 0..n {
        let mut a = vec![Rational::zero(); n];
        a[i] = int(1);
        rows.push((a, Rational::zero()));
    }
    let feasible = |x: &[Rational]| {
        x.iter().all(|v| !v.is_negative())
            && p.constraints().iter().all(|c| c.relation.holds(&p.evaluate(&c.expr, x), &c.rhs))
    };
    let mut best: Option<Rational> = None;
    let m = rows.len();
    let mut idx: Vec<usize> = (0..n).collect();
    if n > m {
        return None;
    }
    loop {
        let mat = idx.iter().map(|&i| rows[i].0.clone()).collect();
        let rhs = idx.iter().map(|&i| rows[i].1.clone()).collect();
        if let Some(x) = solve_square(mat, rhs) {
            if feasible(&x) {
                let v = p.evaluate(p.objective(), &x);
                if best.as_ref().is_none_or(|b| v > *b) {
                    best = Some(v);
                }
            }
        }
        // next combination
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if idx[i] < m - n + i {
                idx[i] += 1;
                for j in i + 1..n {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Random LP with up to 3 variables and up to 6 constraints, one of which
/// bounds the feasible region.
pub fn random_lp(seed: u64) -> LinearProgram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=3);
    let mut p = LinearProgram::new();
    let vs: Vec<_> = (0..n).map(|i| p.add_var(format!("x{i}"))).collect();
    let q = |rng: &mut ChaCha8Rng| Rational::new(rng.gen_range(-6i64..=6).into(), rng.gen_range(1i64..=3).into());
    let extra = rng.gen_range(0..=5);
    for i in 0..extra {
        let rel = [Relation::Le, Relation::Ge, Relation::Le, Relation::Eq][rng.gen_range(0..4)];
        let expr = vs.iter().map(|v| (*v, q(&mut rng))).collect();
        let rhs = q(&mut rng);
        p.add_constraint(format!("r{i}"), expr, rel, rhs);
    }
    p.add_constraint("box", vs.iter().map(|v| (*v, int(1))).collect(), Relation::Le, int(10));
    p.set_objective(vs.iter().map(|v| (*v, q(&mut rng))).collect());
    p
}

/// Best leader payoff over lasso plays (simple path into a simple cycle),
/// each paying every follower the least incentive that keeps it at or above
/// its punishment value at all of its vertices on the lasso.
pub fn best_lasso_payoff(arena: &GameArena, values: &BTreeMap<PlayerId, VertexValues>, with_incentives: bool) -> Option<Rational> {
    let leader = arena.leader();
    let mut best: Option<Rational> = None;
    let mut path = vec![arena.initial()];
    let mut evaluate = |path: &[VertexId], start: usize, closing: EdgeId| {
        let cyc_edges: Vec<EdgeId> = (start..path.len())
            .map(|i| {
                if i + 1 < path.len() {
                    arena.find_edge(path[i], path[i + 1]).unwrap()
                } else {
                    closing
                }
            })
            .collect();
        let len = int(cyc_edges.len() as i64);
        let mean = |p: PlayerId| cyc_edges.iter().map(|e| arena.reward(p, *e).clone()).sum::<Rational>() / &len;
        let mut payoff = mean(leader);
        for (p, vals) in values {
            let need = path.iter().filter(|v| arena.owner(**v) == *p).map(|v| vals.get(*v).clone()).max();
            if let Some(need) = need {
                let gap = need - mean(*p);
                if gap.is_positive() {
                    if !with_incentives {
                        return;
                    }
                    payoff -= gap;
                }
            }
        }
        if best.as_ref().is_none_or(|b| payoff > *b) {
            best = Some(payoff);
        }
    };
    fn dfs(
        arena: &GameArena,
        path: &mut Vec<VertexId>,
        eval: &mut dyn FnMut(&[VertexId], usize, EdgeId),
    ) {
        let v = *path.last().unwrap();
        for &e in arena.out_edges(v) {
            let t = arena.edge(e).target;
            if let Some(i) = path.iter().position(|x| *x == t) {
                eval(path, i, e);
            } else {
                path.push(t);
                dfs(arena, path, eval);
                path.pop();
            }
        }
    }
    dfs(arena, &mut path, &mut evaluate);
    best
}
