//! Solves the three-player game where paying an incentive lifts the leader
//! from 1 to 8.
//!
//! Run with `cargo run --example solve_fig1`.

use mmpg::equilibria::{solve_equilibrium, Mode};
use mmpg::generators::{builtin, Builtin};
use mmpg::rational::fraction;

fn main() {
    let arena = builtin(Builtin::Fig1);
    for mode in [Mode::Nash, Mode::Leader, Mode::Incentive] {
        let r = solve_equilibrium(&arena, &mode).expect("every mode has an equilibrium");
        let names = |vs: &std::collections::BTreeSet<_>| vs.iter().map(|v| arena.name(*v)).collect::<Vec<_>>().join(" ");
        println!("{mode}: leader payoff {}", fraction(&r.leader_payoff));
        println!("  Q = {{{}}}, S = {{{}}}", names(&r.region.q), names(&r.region.s));
        for p in arena.followers() {
            println!(
                "  {p}: raw {} + incentive {} = {}",
                fraction(&r.raw_payoffs[&p]),
                fraction(&r.solution.incentive(p)),
                fraction(&r.follower_payoffs[&p])
            );
        }
    }
}
