//! Nash, leader and incentive payoffs on random games, which always come
//! out in that order.
//!
//! Run with `cargo run --release --example random_ordering -- 20 12 3`
//! for 20 seeds of 12-vertex, 3-player games.

use mmpg::equilibria::{solve_equilibrium, Mode};
use mmpg::generators::{random_game, RandomGameParams};
use mmpg::rational::fraction;

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (seeds, vertices, players) = match args[..] {
        [s, v, p] => (s, v, p),
        _ => (20, 12, 3),
    };
    println!("{:>4} {:>8} {:>8} {:>9}", "seed", "nash", "leader", "incentive");
    for seed in 0..seeds as u64 {
        let arena = random_game(&RandomGameParams { seed, vertices, players, density: 0.3 });
        let [nash, leader, incentive] = [Mode::Nash, Mode::Leader, Mode::Incentive]
            .map(|m| solve_equilibrium(&arena, &m).expect("equilibria exist").leader_payoff);
        assert!(nash <= leader && leader <= incentive);
        println!("{seed:>4} {:>8} {:>8} {:>9}", fraction(&nash), fraction(&leader), fraction(&incentive));
    }
}
