//! Punishment values of every follower, the threshold partitions they
//! induce, and the coalition strategy that holds each follower down.
//!
//! Run with `cargo run --example zero_sum_values [fig1|fig2|secure|client_server]`.

use mmpg::arena::punishment_game;
use mmpg::generators::builtin_by_name;
use mmpg::rational::{fraction, int};
use mmpg::zerosum::{alpha_mean_partition, punish_strategy, vertex_values, zero_mean_partition};

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "fig1".into());
    let arena = builtin_by_name(&name).unwrap_or_else(|e| panic!("{e}"));
    for p in arena.followers() {
        let g = punishment_game(&arena, p).expect("followers have punishment games");
        let values = vertex_values(&g);
        println!("{p}");
        for (v, q) in values.iter() {
            println!("  r({}) = {}", arena.name(v), fraction(q));
        }
        let zero = zero_mean_partition(&g);
        let one = alpha_mean_partition(&g, &int(1));
        let show = |s: &std::collections::BTreeSet<_>| s.iter().map(|v| arena.name(*v)).collect::<Vec<_>>().join(" ");
        println!("  value >= 0 at {{{}}}, value >= 1 at {{{}}}", show(&zero.at_least), show(&one.at_least));
        let punish = punish_strategy(&g, &values);
        for (v, e) in &punish.choice {
            println!("  punisher at {} moves to {}", arena.name(*v), arena.name(arena.edge(*e).target));
        }
    }
}
