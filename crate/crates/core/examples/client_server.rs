//! The client/server resource example. The full product game lets the
//! server keep the resource; the interesting part is the client's choice
//! between the `s` and `s'` transitions, studied here on its own.
//!
//! Run with `cargo run --example client_server`.

use mmpg::arena::{ArenaBuilder, PlayerId};
use mmpg::equilibria::{solve_equilibrium, FrequencySolution, Mode};
use mmpg::generators::{builtin, Builtin};
use mmpg::rational::{frac, fraction, int, Rational};

fn main() {
    let full = builtin(Builtin::ClientServer);
    let r = solve_equilibrium(&full, &Mode::Incentive).expect("incentive mode");
    println!("product game: server payoff {}", fraction(&r.leader_payoff));

    // client 0, server 1 (leader), passive player 2
    let mut b = ArenaBuilder::new(3, 1);
    b.vertex("cs", 0).vertex("s", 0).vertex("s2", 0).initial("cs");
    let s = vec![int(0), int(1), int(-1)];
    let s2 = vec![int(-1), int(3), int(-2)];
    b.edge("cs", "s", s.clone()).edge("s", "cs", s);
    b.edge("cs", "s2", s2.clone()).edge("s2", "cs", s2);
    let choice = b.build().expect("well formed");

    let (client, server) = (PlayerId(0), PlayerId(1));
    let mix = |w_s: Rational| {
        let mut sol = FrequencySolution::default();
        let w_s2 = int(1) - &w_s;
        for (from, to, w) in [("cs", "s", &w_s), ("s", "cs", &w_s), ("cs", "s2", &w_s2), ("s2", "cs", &w_s2)] {
            let e = choice.find_edge(choice.vertex_by_name(from).unwrap(), choice.vertex_by_name(to).unwrap()).unwrap();
            sol.edge_ratio.insert(e, w / int(2));
        }
        (sol.raw_payoff(&choice, client), sol.raw_payoff(&choice, server))
    };
    let (c, sv) = mix(frac(1, 2));
    println!("alternating s and s': client {}, server {}", fraction(&c), fraction(&sv));
    let (c, sv) = mix(frac(1, 4));
    let bonus = frac(1, 4);
    println!(
        "s a quarter of the time, incentive {}: client {}, server {}",
        fraction(&bonus),
        fraction(&(&c + &bonus)),
        fraction(&(&sv - &bonus))
    );

    for mode in [Mode::Leader, Mode::Incentive] {
        let r = solve_equilibrium(&choice, &mode).expect("equilibria exist");
        println!(
            "{mode} equilibrium of the choice: server {}, client raw {} with incentive {}",
            fraction(&r.leader_payoff),
            fraction(&r.raw_payoffs[&client]),
            fraction(&r.solution.incentive(client))
        );
    }
}
