//! Benchmark arenas: the token-ring family, seeded random games and the
//! checked-in worked examples.

use std::fmt;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arena::{parse_game, ArenaBuilder, GameArena};
use crate::rational::int;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    Fig1,
    Fig2,
    Secure,
    ClientServer,
}

impl Builtin {
    pub const ALL: [Builtin; 4] = [Builtin::Fig1, Builtin::Fig2, Builtin::Secure, Builtin::ClientServer];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Fig1 => "fig1",
            Builtin::Fig2 => "fig2",
            Builtin::Secure => "secure",
            Builtin::ClientServer => "client_server",
        }
    }

    /// Checked-in game text.
    pub fn source(self) -> &'static str {
        match self {
            Builtin::Fig1 => include_str!("../games/fig1.game"),
            Builtin::Fig2 => include_str!("../games/fig2.game"),
            Builtin::Secure => include_str!("../games/secure.game"),
            Builtin::ClientServer => include_str!("../games/client_server.game"),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown built-in game `{0}` (expected fig1, fig2, secure or client_server)")]
pub struct UnknownBuiltin(pub String);

pub fn builtin(b: Builtin) -> GameArena {
    parse_game(b.source()).expect("checked-in game parses")
}

pub fn builtin_by_name(name: &str) -> Result<GameArena, UnknownBuiltin> {
    Builtin::ALL
        .into_iter()
        .find(|b| b.name() == name)
        .map(builtin)
        .ok_or_else(|| UnknownBuiltin(name.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TokenRingParams {
    /// Inner ring length, one follower per inner vertex.
    pub n: usize,
    /// Outer ring length through each inner vertex.
    pub d: usize,
}

/// Leader `0` and followers `1..=n`. Follower `i` owns inner vertex `i`; the
/// `d - 1` outer vertices of each private ring belong to the leader. Entering
/// inner vertex `i` pays 1 to the leader and 1 to follower `i`.
pub fn token_ring(params: TokenRingParams) -> GameArena {
    let TokenRingParams { n, d } = params;
    assert!(n >= 2 && d >= 1, "token ring needs n >= 2 and d >= 1");
    let k = n + 1;
    let entering = |i: usize| {
        let mut r = vec![int(0); k];
        r[0] = int(1);
        r[i] = int(1);
        r
    };
    let outer = |i: usize, j: usize| (n + 1 + (i - 1) * (d - 1) + j).to_string();

    let mut b = ArenaBuilder::new(k, 0);
    for i in 1..=n {
        b.vertex(i.to_string(), i);
    }
    for i in 1..=n {
        for j in 0..d - 1 {
            b.vertex(outer(i, j), 0);
        }
    }
    b.initial("1");
    for i in 1..=n {
        let next = i % n + 1;
        b.edge(i.to_string(), next.to_string(), entering(next));
    }
    for i in 1..=n {
        if d == 1 {
            b.edge(i.to_string(), i.to_string(), entering(i));
            continue;
        }
        let mut prev = i.to_string();
        for j in 0..d - 1 {
            b.edge(prev, outer(i, j), vec![int(0); k]);
            prev = outer(i, j);
        }
        b.edge(prev, i.to_string(), entering(i));
    }
    b.build().expect("token ring is well formed")
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomGameParams {
    pub seed: u64,
    pub vertices: usize,
    pub players: usize,
    /// Probability that a reward entry is 1 rather than 0.
    pub density: f64,
}

/// Vertex `i` is named `i` and owned by player `i mod players`; the leader is
/// player 0 and the initial vertex is `0`. Each vertex gets 1 to 3 distinct
/// successors.
pub fn random_game(params: &RandomGameParams) -> GameArena {
    let RandomGameParams {
        seed,
        vertices: n,
        players: k,
        density,
    } = *params;
    assert!(n >= 1 && k >= 1, "random game needs a vertex and a player");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = ArenaBuilder::new(k, 0);
    for v in 0..n {
        b.vertex(v.to_string(), v % k);
    }
    b.initial("0");
    for v in 0..n {
        let out = rng.gen_range(1..=3usize).min(n);
        let mut targets = sample(&mut rng, n, out).into_vec();
        targets.sort_unstable();
        for t in targets {
            let rewards = (0..k).map(|_| int(rng.gen_bool(density) as i64)).collect();
            b.edge(v.to_string(), t.to_string(), rewards);
        }
    }
    b.build().expect("random game is well formed")
}
