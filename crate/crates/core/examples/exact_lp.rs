//! The exact simplex on its own: a small production plan, then Beale's
//! program, on which textbook pivoting cycles.
//!
//! Run with `cargo run --example exact_lp`.

use mmpg::lp::{check_solution, solve_lp, LinearProgram, LpOutcome, Relation};
use mmpg::rational::{frac, fraction, int};

fn report(name: &str, p: &LinearProgram) {
    match solve_lp(p).expect("well formed") {
        LpOutcome::Optimal(s) => {
            let xs: Vec<String> = p
                .variables()
                .iter()
                .zip(&s.assignment)
                .map(|(n, q)| format!("{n} = {}", fraction(q)))
                .collect();
            assert!(check_solution(p, &s.assignment).unwrap().is_empty());
            println!("{name}: optimum {} at {}", fraction(&s.value), xs.join(", "));
        }
        other => println!("{name}: {:?}", other.status()),
    }
}

fn main() {
    let mut plan = LinearProgram::new();
    let (x, y) = (plan.add_var("x"), plan.add_var("y"));
    plan.add_constraint("labour", vec![(x, int(1)), (y, int(3))], Relation::Le, int(6));
    plan.add_constraint("stock", vec![(x, int(1)), (y, int(1))], Relation::Le, int(4));
    plan.add_constraint("demand", vec![(x, int(1))], Relation::Le, int(3));
    plan.set_objective(vec![(x, int(3)), (y, int(2))]);
    report("plan", &plan);
    print!("{}", plan.to_lp_text());

    let mut beale = LinearProgram::new();
    let v: Vec<_> = (1..=4).map(|i| beale.add_var(format!("x{i}"))).collect();
    beale.add_constraint(
        "a",
        vec![(v[0], frac(1, 4)), (v[1], int(-60)), (v[2], frac(-1, 25)), (v[3], int(9))],
        Relation::Le,
        int(0),
    );
    beale.add_constraint(
        "b",
        vec![(v[0], frac(1, 2)), (v[1], int(-90)), (v[2], frac(-1, 50)), (v[3], int(3))],
        Relation::Le,
        int(0),
    );
    beale.add_constraint("c", vec![(v[2], int(1))], Relation::Le, int(1));
    beale.set_objective(vec![(v[0], frac(3, 4)), (v[1], int(-150)), (v[2], frac(1, 50)), (v[3], int(-6))]);
    report("beale", &beale);
}
