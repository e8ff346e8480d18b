//! Two-player zero-sum mean-payoff games.
//!
//! The qualitative oracle is an energy-game progress-measure lifting: the
//! protagonist has value at least `0` at a vertex exactly when it wins the
//! energy game there with a finite initial credit. Thresholds `α = a/l` are
//! handled by reweighting every edge to `w·l − a`. Exact values come from a
//! search over the finitely many candidate fractions `a/l` with `l ≤ |V|`,
//! since optimal positional strategies end in a simple cycle.
//!
//! Rational rewards are scaled by the LCM of their denominators first, so
//! the lifting runs on `i64` weights.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::arena::{EdgeId, VertexId, ZeroSumGame};
use crate::rational::{denominator_lcm, Rational};

/// Vertices whose value is at least `threshold`, and the rest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeanPartition {
    pub threshold: Rational,
    pub at_least: BTreeSet<VertexId>,
    pub below: BTreeSet<VertexId>,
}

/// Exact protagonist value at every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexValues {
    values: Vec<Rational>,
}

impl VertexValues {
    pub fn new(values: Vec<Rational>) -> Self {
        VertexValues { values }
    }

    pub fn get(&self, v: VertexId) -> &Rational {
        &self.values[v.0]
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, &Rational)> {
        self.values.iter().enumerate().map(|(i, q)| (VertexId(i), q))
    }
}

/// One chosen outgoing edge per vertex of one side.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PositionalStrategy {
    pub choice: BTreeMap<VertexId, EdgeId>,
}

impl PositionalStrategy {
    pub fn get(&self, v: VertexId) -> Option<EdgeId> {
        self.choice.get(&v).copied()
    }
}

/// Small exact fraction used for candidate thresholds, in scaled units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Frac {
    num: i64,
    den: i64,
}

impl Frac {
    fn new(num: i64, den: i64) -> Self {
        debug_assert!(den > 0);
        let g = num.gcd(&den).max(1);
        Frac {
            num: num / g,
            den: den / g,
        }
    }

    fn int(n: i64) -> Self {
        Frac { num: n, den: 1 }
    }

    fn mid(self, other: Frac) -> (i128, i128) {
        let n = self.num as i128 * other.den as i128 + other.num as i128 * self.den as i128;
        let d = 2 * self.den as i128 * other.den as i128;
        (n, d)
    }
}

impl Ord for Frac {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Integer view of a zero-sum game.
struct ScaledGame {
    n: usize,
    /// (target, scaled weight, edge id) per vertex, input order
    succ: Vec<Vec<(usize, i64, EdgeId)>>,
    protagonist: Vec<bool>,
    scale: BigInt,
    min_w: i64,
    max_w: i64,
}

impl ScaledGame {
    fn new(g: &ZeroSumGame<'_>) -> Self {
        let arena = g.arena();
        let scale = denominator_lcm(arena.edges().map(|(e, _)| g.reward(e)));
        let mut succ = vec![Vec::new(); arena.vertex_count()];
        let mut min_w = i64::MAX;
        let mut max_w = i64::MIN;
        for (id, e) in arena.edges() {
            let scaled = g.reward(id) * Rational::from_integer(scale.clone());
            let w = scaled
                .to_integer()
                .to_i64()
                .expect("scaled reward does not fit in i64");
            min_w = min_w.min(w);
            max_w = max_w.max(w);
            succ[e.source.0].push((e.target.0, w, id));
        }
        ScaledGame {
            n: arena.vertex_count(),
            succ,
            protagonist: arena.vertices().map(|v| g.is_protagonist_vertex(v)).collect(),
            scale,
            min_w,
            max_w,
        }
    }

    fn unscale(&self, f: Frac) -> Rational {
        Rational::new(BigInt::from(f.num), BigInt::from(f.den) * &self.scale)
    }

    /// Scaled threshold for an original-unit rational, as weight map `w ↦ w·mul − sub`.
    fn threshold_weights(&self, mul: i64, sub: i64) -> Vec<Vec<i64>> {
        self.succ
            .iter()
            .map(|out| {
                out.iter()
                    .map(|&(_, w, _)| {
                        w.checked_mul(mul)
                            .and_then(|x| x.checked_sub(sub))
                            .expect("threshold weight overflow")
                    })
                    .collect()
            })
            .collect()
    }

    /// Least progress measure of the energy game with the given weights, in
    /// which `energy_side[v]` marks vertices where the energy player moves.
    /// `None` is the top element (energy player loses).
    fn progress_measure(&self, weights: &[Vec<i64>], energy_side: &[bool]) -> Vec<Option<i64>> {
        let n = self.n;
        let bound: i64 = weights
            .iter()
            .map(|ws| ws.iter().map(|w| (-w).max(0)).max().unwrap_or(0))
            .sum();
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (v, out) in self.succ.iter().enumerate() {
            for &(t, _, _) in out {
                preds[t].push(v);
            }
        }
        let mut f: Vec<Option<i64>> = vec![Some(0); n];
        let mut queued = vec![true; n];
        let mut queue: VecDeque<usize> = (0..n).collect();
        while let Some(v) = queue.pop_front() {
            queued[v] = false;
            let cur = f[v];
            if cur.is_none() {
                continue;
            }
            let step = |i: usize| -> Option<i64> {
                let (t, _, _) = self.succ[v][i];
                let need = f[t]?.saturating_sub(weights[v][i]).max(0);
                (need <= bound).then_some(need)
            };
            let lifted = if energy_side[v] {
                // best (smallest) requirement; None is worst
                (0..self.succ[v].len()).map(step).fold(None::<Option<i64>>, |acc, x| match (acc, x) {
                    (None, x) => Some(x),
                    (Some(None), x) => Some(x),
                    (Some(Some(a)), Some(b)) => Some(Some(a.min(b))),
                    (Some(Some(a)), None) => Some(Some(a)),
                })
            } else {
                (0..self.succ[v].len()).map(step).fold(None::<Option<i64>>, |acc, x| match (acc, x) {
                    (None, x) => Some(x),
                    (Some(None), _) | (_, None) => Some(None),
                    (Some(Some(a)), Some(b)) => Some(Some(a.max(b))),
                })
            }
            .expect("vertex without successor");
            let grows = match (cur, lifted) {
                (Some(a), Some(b)) => b > a,
                (Some(_), None) => true,
                _ => false,
            };
            if grows {
                f[v] = lifted;
                for &u in &preds[v] {
                    if !queued[u] && f[u].is_some() {
                        queued[u] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
        f
    }

    /// Protagonist wins the threshold `c` (scaled units): value ≥ c.
    fn partition_at(&self, c: Frac) -> Vec<bool> {
        let weights = self.threshold_weights(c.den, c.num);
        self.progress_measure(&weights, &self.protagonist)
            .into_iter()
            .map(|x| x.is_some())
            .collect()
    }

    fn candidates_between(&self, lo: Frac, hi: Frac) -> Vec<Frac> {
        let mut out = BTreeSet::new();
        for l in 1..=self.n as i64 {
            // numerators a with lo < a/l < hi
            let first = (lo.num as i128 * l as i128).div_euclid(lo.den as i128) + 1;
            let mut a = first;
            loop {
                let f = Frac::new(a as i64, l);
                if f >= hi {
                    break;
                }
                if f > lo {
                    out.insert(FracKey(f));
                }
                a += 1;
            }
        }
        out.into_iter().map(|k| k.0).collect()
    }

    fn nearest_candidate(&self, lo: Frac, hi: Frac) -> Option<Frac> {
        let (mn, md) = lo.mid(hi);
        let mut best: Option<(Frac, i128, i128)> = None;
        for l in 1..=self.n as i128 {
            let a = (mn * l).div_euclid(md);
            for a in [a, a + 1] {
                let f = Frac::new(a as i64, l as i64);
                if f <= lo || f >= hi {
                    continue;
                }
                // |a/l - mn/md| = |a*md - mn*l| / (l*md)
                let dn = (a * md - mn * l).abs();
                let dd = l * md;
                let better = match best {
                    None => true,
                    Some((bf, bn, bd)) => {
                        let c = (dn * bd).cmp(&(bn * dd));
                        c == Ordering::Less || (c == Ordering::Equal && f.den < bf.den)
                    }
                };
                if better {
                    best = Some((f, dn, dd));
                }
            }
        }
        best.map(|(f, _, _)| f)
    }

    /// Next threshold strictly inside `(lo, hi)`, or `None` if `lo` is the
    /// only candidate left in `[lo, hi)`.
    fn split_point(&self, lo: Frac, hi: Frac) -> Option<Frac> {
        let n = self.n as i128;
        // width * n(n-1) >= 1 means at least two candidates per denominator may remain
        let width_n = (hi.num as i128 * lo.den as i128 - lo.num as i128 * hi.den as i128) * n * (n - 1);
        let wide = width_n >= hi.den as i128 * lo.den as i128;
        if wide {
            if let Some(f) = self.nearest_candidate(lo, hi) {
                return Some(f);
            }
        }
        let cands = self.candidates_between(lo, hi);
        if cands.is_empty() {
            None
        } else {
            Some(cands[cands.len() / 2])
        }
    }
}

#[derive(PartialEq, Eq)]
struct FracKey(Frac);

impl Ord for FracKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl PartialOrd for FracKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn partition_from(g: &ZeroSumGame<'_>, threshold: Rational, wins: &[bool]) -> MeanPartition {
    let mut at_least = BTreeSet::new();
    let mut below = BTreeSet::new();
    for v in g.arena().vertices() {
        if wins[v.0] {
            at_least.insert(v);
        } else {
            below.insert(v);
        }
    }
    MeanPartition {
        threshold,
        at_least,
        below,
    }
}

pub fn zero_mean_partition(g: &ZeroSumGame<'_>) -> MeanPartition {
    let sg = ScaledGame::new(g);
    let wins = sg.partition_at(Frac::int(0));
    partition_from(g, Rational::from_integer(0.into()), &wins)
}

/// Vertices with value `≥ alpha`.
pub fn alpha_mean_partition(g: &ZeroSumGame<'_>, alpha: &Rational) -> MeanPartition {
    let sg = ScaledGame::new(g);
    // value ≥ a/b  ⇔  mean(w·b − a·L) ≥ 0 with w already scaled by L
    let scaled = alpha * Rational::from_integer(sg.scale.clone());
    let (a, b) = (scaled.numer().clone(), scaled.denom().clone());
    let wins = match (a.to_i64(), b.to_i64()) {
        (Some(a), Some(b)) => sg.partition_at(Frac::new(a, b)),
        _ => {
            // far outside the reward range
            let above = scaled > Rational::from_integer(BigInt::from(sg.max_w));
            vec![!above; sg.n]
        }
    };
    partition_from(g, alpha.clone(), &wins)
}

/// Exact value of every vertex.
pub fn vertex_values(g: &ZeroSumGame<'_>) -> VertexValues {
    let sg = ScaledGame::new(g);
    let mut values: Vec<Option<Frac>> = vec![None; sg.n];
    let mut cache: HashMap<Frac, Vec<bool>> = HashMap::new();
    // every value lies in [lo, hi)
    let mut work: Vec<(Vec<usize>, Frac, Frac)> =
        vec![((0..sg.n).collect(), Frac::int(sg.min_w), Frac::int(sg.max_w + 1))];
    while let Some((block, lo, hi)) = work.pop() {
        if block.is_empty() {
            continue;
        }
        let Some(alpha) = sg.split_point(lo, hi) else {
            for v in block {
                values[v] = Some(lo);
            }
            continue;
        };
        let part = cache.entry(alpha).or_insert_with(|| sg.partition_at(alpha));
        let (ge, lt): (Vec<usize>, Vec<usize>) = block.into_iter().partition(|&v| part[v]);
        work.push((ge, alpha, hi));
        work.push((lt, lo, alpha));
    }
    VertexValues {
        values: values
            .into_iter()
            .map(|f| sg.unscale(f.expect("every vertex resolved")))
            .collect(),
    }
}

fn to_scaled(sg: &ScaledGame, q: &Rational) -> Frac {
    let s = q * Rational::from_integer(sg.scale.clone());
    Frac::new(
        s.numer().to_i64().expect("value numerator"),
        s.denom().to_i64().expect("value denominator"),
    )
}

fn extract_strategy(g: &ZeroSumGame<'_>, values: &VertexValues, for_protagonist: bool) -> PositionalStrategy {
    let sg = ScaledGame::new(g);
    let side: Vec<bool> = sg.protagonist.iter().map(|p| *p == for_protagonist).collect();
    let mut by_value: BTreeMap<FracKey, Vec<usize>> = BTreeMap::new();
    for (v, &mine) in side.iter().enumerate() {
        if mine {
            by_value.entry(FracKey(to_scaled(&sg, &values.values[v]))).or_default().push(v);
        }
    }
    let mut choice = BTreeMap::new();
    for (FracKey(c), vs) in by_value {
        // protagonist: mean(w) ≥ c, i.e. energy for w·l − a;
        // coalition: mean(w) ≤ c, i.e. energy for a − w·l
        let weights: Vec<Vec<i64>> = if for_protagonist {
            sg.threshold_weights(c.den, c.num)
        } else {
            sg.threshold_weights(-c.den, -c.num)
        };
        let f = sg.progress_measure(&weights, &side);
        for v in vs {
            let fv = f[v].expect("optimal side wins its own value threshold");
            let pick = sg.succ[v]
                .iter()
                .enumerate()
                .find(|(i, (t, _, _))| match f[*t] {
                    Some(ft) => fv >= (ft - weights[v][*i]).max(0),
                    None => false,
                })
                .map(|(_, (_, _, e))| *e)
                .expect("consistent progress measure has a witnessing edge");
            choice.insert(VertexId(v), pick);
        }
    }
    PositionalStrategy { choice }
}

/// Optimal positional strategy for the coalition: from every vertex the
/// protagonist gets at most its value. Ties fall to the lowest edge index.
pub fn punish_strategy(g: &ZeroSumGame<'_>, values: &VertexValues) -> PositionalStrategy {
    extract_strategy(g, values, false)
}

/// Optimal positional strategy for the protagonist.
pub fn protagonist_strategy(g: &ZeroSumGame<'_>, values: &VertexValues) -> PositionalStrategy {
    extract_strategy(g, values, true)
}
