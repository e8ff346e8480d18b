//! Sweeps the token-ring family and reports where incentives pay off.
//!
//! Run with `cargo run --release --example token_ring_frontier -- 3 5`
//! to cover inner rings of length 3 to 5.

use mmpg::equilibria::{solve_equilibrium, Mode};
use mmpg::generators::{token_ring, TokenRingParams};
use mmpg::rational::{decimal, fraction};

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (lo, hi) = match args[..] {
        [a, b] => (a, b),
        [a] => (a, a),
        _ => (3, 5),
    };
    println!("{:>3} {:>3} {:>12} {:>12} {:>8}", "n", "d", "leader", "incentive", "helps");
    for n in lo.max(2)..=hi {
        for d in 1..=n + 2 {
            let arena = token_ring(TokenRingParams { n, d });
            let leader = solve_equilibrium(&arena, &Mode::Leader).expect("leader mode").leader_payoff;
            let incentive = solve_equilibrium(&arena, &Mode::Incentive).expect("incentive mode").leader_payoff;
            println!(
                "{n:>3} {d:>3} {:>12} {:>12} {:>8}   ({} vs {})",
                fraction(&leader),
                fraction(&incentive),
                incentive > leader,
                decimal(&leader),
                decimal(&incentive)
            );
        }
    }
}
