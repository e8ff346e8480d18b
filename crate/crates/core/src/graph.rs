//! Graph routines over vertex subsets of an arena: dead-end pruning,
//! reachability, Tarjan SCCs and BFS transfer paths.

use std::collections::VecDeque;

use crate::arena::{GameArena, VertexId};

/// Indicator vector over the arena's vertices.
pub type VertexMask = Vec<bool>;

pub fn mask_of(n: usize, vs: impl IntoIterator<Item = VertexId>) -> VertexMask {
    let mut m = vec![false; n];
    for v in vs {
        m[v.0] = true;
    }
    m
}

pub fn members(mask: &[bool]) -> Vec<VertexId> {
    mask.iter()
        .enumerate()
        .filter(|(_, b)| **b)
        .map(|(i, _)| VertexId(i))
        .collect()
}

/// Greatest subset of `allowed` in which every vertex keeps a successor.
pub fn remove_dead_ends(arena: &GameArena, allowed: &[bool]) -> VertexMask {
    let n = arena.vertex_count();
    let mut alive = allowed.to_vec();
    let mut live_succ = vec![0usize; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (_, e) in arena.edges() {
        if alive[e.source.0] && alive[e.target.0] {
            live_succ[e.source.0] += 1;
            preds[e.target.0].push(e.source.0);
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| alive[v] && live_succ[v] == 0).collect();
    for &v in &queue {
        alive[v] = false;
    }
    while let Some(v) = queue.pop_front() {
        for &u in &preds[v] {
            if alive[u] {
                live_succ[u] -= 1;
                if live_succ[u] == 0 {
                    alive[u] = false;
                    queue.push_back(u);
                }
            }
        }
    }
    alive
}

/// Vertices of `within` reachable from `from` using only `within`.
pub fn reachable(arena: &GameArena, from: VertexId, within: &[bool]) -> VertexMask {
    let mut seen = vec![false; arena.vertex_count()];
    if !within[from.0] {
        return seen;
    }
    seen[from.0] = true;
    let mut stack = vec![from];
    while let Some(v) = stack.pop() {
        for &e in arena.out_edges(v) {
            let t = arena.edge(e).target;
            if within[t.0] && !seen[t.0] {
                seen[t.0] = true;
                stack.push(t);
            }
        }
    }
    seen
}

/// Dead-end removal followed by reachability from the initial vertex.
pub fn prune(arena: &GameArena, allowed: &[bool]) -> VertexMask {
    let core = remove_dead_ends(arena, allowed);
    reachable(arena, arena.initial(), &core)
}

/// Strongly connected components of the subgraph induced by `within`.
/// Each component is sorted; components are ordered by their smallest vertex.
pub fn sccs(arena: &GameArena, within: &[bool]) -> Vec<Vec<VertexId>> {
    let n = arena.vertex_count();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next = 0usize;
    let mut out = Vec::new();

    for root in 0..n {
        if !within[root] || index[root] != usize::MAX {
            continue;
        }
        // (vertex, next out-edge position)
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let edges = arena.out_edges(VertexId(v));
            if *pos < edges.len() {
                let w = arena.edge(edges[*pos]).target.0;
                *pos += 1;
                if !within[w] {
                    continue;
                }
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(VertexId(w));
                        if w == v {
                            break;
                        }
                    }
                    comp.sort();
                    out.push(comp);
                }
            }
        }
    }
    out.sort_by_key(|c| c[0]);
    out
}

/// True if some edge has both endpoints in `component`.
pub fn has_internal_edge(arena: &GameArena, component: &[bool]) -> bool {
    arena
        .edges()
        .any(|(_, e)| component[e.source.0] && component[e.target.0])
}

/// Shortest path (as a vertex list, endpoints included) from `from` to any
/// vertex satisfying `goal`, moving only through `within`. Ties fall to the
/// lowest edge index.
pub fn shortest_path(
    arena: &GameArena,
    from: VertexId,
    within: &[bool],
    goal: impl Fn(VertexId) -> bool,
) -> Option<Vec<VertexId>> {
    if goal(from) {
        return Some(vec![from]);
    }
    let n = arena.vertex_count();
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[from.0] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &e in arena.out_edges(v) {
            let t = arena.edge(e).target;
            if !within[t.0] || seen[t.0] {
                continue;
            }
            seen[t.0] = true;
            parent[t.0] = v.0;
            if goal(t) {
                let mut path = vec![t];
                let mut cur = t.0;
                while cur != from.0 {
                    cur = parent[cur];
                    path.push(VertexId(cur));
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(t);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{builtin, random_game, Builtin, RandomGameParams};
    use proptest::prelude::*;

    fn names(a: &GameArena, vs: &[VertexId]) -> Vec<String> {
        vs.iter().map(|v| a.name(*v).to_string()).collect()
    }

    #[test]
    fn fig2_components() {
        let a = builtin(Builtin::Fig2);
        let all = vec![true; a.vertex_count()];
        let comps = sccs(&a, &all);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].len(), 12);

        // Dropping vertex 3 breaks the inner ring.
        let mut allowed = all.clone();
        allowed[a.vertex_by_name("3").unwrap().0] = false;
        let q = prune(&a, &allowed);
        let comps: Vec<Vec<String>> = sccs(&a, &q).iter().map(|c| names(&a, c)).collect();
        assert_eq!(comps, vec![vec!["1", "5", "6"], vec!["2", "7", "8"]]);
    }

    #[test]
    fn fig1_components_and_pruning() {
        let a = builtin(Builtin::Fig1);
        let all = vec![true; 5];
        let comps: Vec<Vec<String>> = sccs(&a, &all).iter().map(|c| names(&a, c)).collect();
        assert_eq!(comps, vec![vec!["1"], vec!["2"], vec!["3"], vec!["4"], vec!["5"]]);
        // Removing vertex 3 and 5 leaves 2 dead; it is pruned.
        let mut allowed = all.clone();
        allowed[2] = false;
        allowed[4] = false;
        assert_eq!(names(&a, &members(&prune(&a, &allowed))), ["1", "4"]);
        // Removing v0 empties everything.
        let mut allowed = all;
        allowed[0] = false;
        assert!(members(&prune(&a, &allowed)).is_empty());
    }

    #[test]
    fn bfs_prefers_lowest_edge() {
        let a = builtin(Builtin::Fig2);
        let all = vec![true; a.vertex_count()];
        let to4 = shortest_path(&a, a.initial(), &all, |v| a.name(v) == "4").unwrap();
        assert_eq!(names(&a, &to4), ["1", "2", "3", "4"]);
    }

    fn brute_reach(a: &GameArena, u: usize, v: usize, within: &[bool]) -> bool {
        shortest_path(a, VertexId(u), within, |x| x.0 == v).is_some()
    }

    proptest! {
        #[test]
        fn sccs_match_mutual_reachability(seed in any::<u64>(), n in 1usize..10) {
            let a = random_game(&RandomGameParams { seed, vertices: n, players: 2, density: 0.5 });
            let all = vec![true; n];
            let comps = sccs(&a, &all);
            let mut comp_of = vec![usize::MAX; n];
            for (i, c) in comps.iter().enumerate() {
                for v in c { comp_of[v.0] = i; }
            }
            prop_assert!(comp_of.iter().all(|c| *c != usize::MAX));
            for u in 0..n {
                for v in 0..n {
                    let same = brute_reach(&a, u, v, &all) && brute_reach(&a, v, u, &all);
                    prop_assert_eq!(same, comp_of[u] == comp_of[v]);
                }
            }
        }

        #[test]
        fn pruned_sets_are_closed(seed in any::<u64>(), n in 1usize..12, drop in any::<u16>()) {
            let a = random_game(&RandomGameParams { seed, vertices: n, players: 2, density: 0.5 });
            let allowed: Vec<bool> = (0..n).map(|i| drop >> (i % 16) & 1 == 0).collect();
            let q = prune(&a, &allowed);
            for v in members(&q) {
                prop_assert!(allowed[v.0]);
                prop_assert!(a.out_edges(v).iter().any(|e| q[a.edge(*e).target.0]));
            }
        }
    }
}
