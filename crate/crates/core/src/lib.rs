//! Equilibria of multi-player mean-payoff games.
//!
//! A leader and its followers jointly move a token through a weighted graph;
//! each player scores the limit average of their edge rewards. The leader may
//! pay followers incentives to keep them on a play it prefers. This crate
//! computes leader-optimal incentive equilibria, leader (Stackelberg)
//! equilibria without incentives, a Nash baseline and secure ε-incentive
//! equilibria, and synthesizes plays that realize them.
//!
//! Pipeline:
//!
//! 1. [`zerosum`] solves the punishment game of every follower, giving the
//!    value `r_p(v)` each follower can guarantee from each vertex.
//! 2. [`equilibria`] enumerates the vertex sets a play may visit, restricts
//!    the graph accordingly and solves one exact [`lp`] per strongly
//!    connected part.
//! 3. [`play`] turns the optimal frequencies into an explicit schedule.
//!
//! ```
//! use mmpg::equilibria::{solve_equilibrium, Mode};
//! use mmpg::generators::{builtin, Builtin};
//! use mmpg::rational::int;
//!
//! let arena = builtin(Builtin::Fig1);
//! let result = solve_equilibrium(&arena, &Mode::Incentive).unwrap();
//! assert_eq!(result.leader_payoff, int(8));
//! ```

pub mod arena;
pub mod cli;
pub mod equilibria;
pub mod generators;
pub mod graph;
pub mod lp;
pub mod play;
pub mod rational;
pub mod report;
pub mod zerosum;
