//! Secure incentive equilibria: the leader gives up a little so that no
//! follower can deviate without hurting itself.
//!
//! Run with `cargo run --example secure_epsilon`.

use mmpg::equilibria::{solve_equilibrium, Mode};
use mmpg::generators::{builtin, Builtin};
use mmpg::rational::{frac, fraction};

fn main() {
    let arena = builtin(Builtin::Secure);
    let plain = solve_equilibrium(&arena, &Mode::Incentive).expect("incentive mode");
    println!("incentive: leader {}", fraction(&plain.leader_payoff));
    for eps in [frac(1, 10), frac(1, 100), frac(1, 1000)] {
        let r = solve_equilibrium(&arena, &Mode::SecureIncentive(eps.clone())).expect("secure mode");
        let followers: Vec<String> = arena
            .followers()
            .map(|p| format!("{p} {}", fraction(&r.follower_payoffs[&p])))
            .collect();
        println!(
            "epsilon {}: leader {}, {}",
            fraction(&eps),
            fraction(&r.leader_payoff),
            followers.join(", ")
        );
    }
}
