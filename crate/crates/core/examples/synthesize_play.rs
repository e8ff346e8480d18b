//! Turns the incentive equilibrium of the two-follower ring into a concrete
//! play and watches its empirical payoffs approach the exact ones.
//!
//! Run with `cargo run --release --example synthesize_play`.

use mmpg::equilibria::{solve_equilibrium, Mode};
use mmpg::generators::{builtin, Builtin};
use mmpg::play::{empirical_payoffs, payoff_tolerance, psp_description, punishment_strategies, PlaySchedule};
use mmpg::rational::{decimal, fraction};

fn main() {
    let arena = builtin(Builtin::Fig2);
    let r = solve_equilibrium(&arena, &Mode::Incentive).expect("incentive mode");
    let prefix = PlaySchedule::from_result(&arena, &r).unwrap().take_moves(12).unwrap();
    let names: Vec<&str> = prefix.iter().map(|v| arena.name(*v)).collect();
    println!("play starts {}", names.join(" "));

    for horizon in [100, 1_000, 10_000] {
        let play = PlaySchedule::from_result(&arena, &r).unwrap().take_moves(horizon).unwrap();
        let got = empirical_payoffs(&play, &arena, &r.solution.incentives).unwrap();
        let cells: Vec<String> = arena.players().map(|p| format!("{p} {}", decimal(&got[&p]))).collect();
        println!("T = {horizon:>6}: {} (tolerance {})", cells.join(", "), decimal(&payoff_tolerance(&arena, horizon)));
    }

    let psp = psp_description(&arena, &r, punishment_strategies(&arena));
    for (p, i) in &psp.incentives {
        println!("{p} is paid {} per step on the path", fraction(i));
    }
    println!("compliant punishers are topped up to {} per step", fraction(&psp.top_up));
}
