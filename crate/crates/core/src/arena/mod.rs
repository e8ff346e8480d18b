//! Multi-player mean-payoff game arenas.
//!
//! An arena is a finite digraph whose vertices are partitioned among the
//! players, with one distinguished leader, an initial vertex, and one exact
//! rational reward per player on every edge. Arenas are immutable once
//! built; [`ArenaBuilder`] collects an unchecked description and
//! [`ArenaBuilder::build`] validates it.

mod text;

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_traits::Zero;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::rational::Rational;

pub use text::parse_game;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlayerId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "player {}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Leader,
    Follower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub source: VertexId,
    pub target: VertexId,
}

/// A structural problem with an arena description.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("no leader among the players")]
    NoLeader,
    #[error("more than one leader: players {0:?}")]
    MultipleLeaders(Vec<usize>),
    #[error("arena has no vertices")]
    NoVertices,
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
    #[error("vertex `{vertex}` has no owner")]
    MissingOwner { vertex: String },
    #[error("vertex `{vertex}` is owned by unknown player {owner}")]
    UnknownOwner { vertex: String, owner: usize },
    #[error("no initial vertex")]
    MissingInitial,
    #[error("more than one initial vertex: {0:?}")]
    MultipleInitial(Vec<String>),
    #[error("edge refers to unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate edge {from} -> {to}")]
    DuplicateEdge { from: String, to: String },
    #[error("edge {from} -> {to} has {found} rewards, expected {expected}")]
    RewardArity {
        from: String,
        to: String,
        expected: usize,
        found: usize,
    },
    #[error("dead-end vertex `{0}` has no successor")]
    DeadEnd(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArenaError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid arena: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("{0} is the leader and has no punishment game")]
    LeaderHasNoPunishmentGame(PlayerId),
    #[error("unknown player {0}")]
    UnknownPlayer(usize),
}

fn join_violations(vs: &[Violation]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Clone, Debug)]
struct VertexDecl {
    name: String,
    owner: Option<usize>,
    initial: bool,
}

#[derive(Clone, Debug)]
struct EdgeDecl {
    source: String,
    target: String,
    rewards: Vec<Rational>,
}

/// Unchecked arena description.
#[derive(Clone, Debug)]
pub struct ArenaBuilder {
    roles: Vec<Role>,
    vertices: Vec<VertexDecl>,
    edges: Vec<EdgeDecl>,
}

impl ArenaBuilder {
    /// `players` players of which `leader` is the leader.
    pub fn new(players: usize, leader: usize) -> Self {
        let roles = (0..players)
            .map(|p| if p == leader { Role::Leader } else { Role::Follower })
            .collect();
        Self::with_roles(roles)
    }

    pub fn with_roles(roles: Vec<Role>) -> Self {
        ArenaBuilder {
            roles,
            vertices: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn vertex(&mut self, name: impl Into<String>, owner: usize) -> &mut Self {
        self.vertices.push(VertexDecl {
            name: name.into(),
            owner: Some(owner),
            initial: false,
        });
        self
    }

    pub fn unowned_vertex(&mut self, name: impl Into<String>) -> &mut Self {
        self.vertices.push(VertexDecl {
            name: name.into(),
            owner: None,
            initial: false,
        });
        self
    }

    /// Marks an already declared vertex as initial.
    pub fn initial(&mut self, name: &str) -> &mut Self {
        for v in &mut self.vertices {
            if v.name == name {
                v.initial = true;
            }
        }
        self
    }

    pub fn edge(
        &mut self,
        source: impl Into<String>,
        target: impl Into<String>,
        rewards: Vec<Rational>,
    ) -> &mut Self {
        self.edges.push(EdgeDecl {
            source: source.into(),
            target: target.into(),
            rewards,
        });
        self
    }

    /// Every violated arena invariant, in a stable order.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let leaders: Vec<usize> = self
            .roles
            .iter()
            .enumerate()
            .filter(|(_, r)| **r == Role::Leader)
            .map(|(i, _)| i)
            .collect();
        match leaders.len() {
            0 => out.push(Violation::NoLeader),
            1 => {}
            _ => out.push(Violation::MultipleLeaders(leaders)),
        }
        if self.vertices.is_empty() {
            out.push(Violation::NoVertices);
        }
        let mut index = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if index.insert(v.name.as_str(), i).is_some() {
                out.push(Violation::DuplicateVertex(v.name.clone()));
            }
            match v.owner {
                None => out.push(Violation::MissingOwner {
                    vertex: v.name.clone(),
                }),
                Some(o) if o >= self.roles.len() => out.push(Violation::UnknownOwner {
                    vertex: v.name.clone(),
                    owner: o,
                }),
                Some(_) => {}
            }
        }
        let initials: Vec<String> = self
            .vertices
            .iter()
            .filter(|v| v.initial)
            .map(|v| v.name.clone())
            .collect();
        match initials.len() {
            0 if !self.vertices.is_empty() => out.push(Violation::MissingInitial),
            0 | 1 => {}
            _ => out.push(Violation::MultipleInitial(initials)),
        }
        let mut seen = HashSet::new();
        let mut has_successor = vec![false; self.vertices.len()];
        for e in &self.edges {
            let s = index.get(e.source.as_str());
            let t = index.get(e.target.as_str());
            if s.is_none() {
                out.push(Violation::UnknownVertex(e.source.clone()));
            }
            if t.is_none() {
                out.push(Violation::UnknownVertex(e.target.clone()));
            }
            if e.rewards.len() != self.roles.len() {
                out.push(Violation::RewardArity {
                    from: e.source.clone(),
                    to: e.target.clone(),
                    expected: self.roles.len(),
                    found: e.rewards.len(),
                });
            }
            if let (Some(&s), Some(&t)) = (s, t) {
                has_successor[s] = true;
                if !seen.insert((s, t)) {
                    out.push(Violation::DuplicateEdge {
                        from: e.source.clone(),
                        to: e.target.clone(),
                    });
                }
            }
        }
        for (v, ok) in self.vertices.iter().zip(&has_successor) {
            if !ok {
                out.push(Violation::DeadEnd(v.name.clone()));
            }
        }
        out
    }

    pub fn build(&self) -> Result<GameArena, ArenaError> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(ArenaError::Invalid(violations));
        }
        let leader = self
            .roles
            .iter()
            .position(|r| *r == Role::Leader)
            .expect("validated");
        let index: HashMap<&str, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.name.as_str(), i))
            .collect();
        let mut out_edges = vec![Vec::new(); self.vertices.len()];
        let mut edges = Vec::with_capacity(self.edges.len());
        let mut rewards = Vec::with_capacity(self.edges.len());
        for (i, e) in self.edges.iter().enumerate() {
            let s = index[e.source.as_str()];
            let t = index[e.target.as_str()];
            out_edges[s].push(EdgeId(i));
            edges.push(Edge {
                source: VertexId(s),
                target: VertexId(t),
            });
            rewards.push(e.rewards.clone());
        }
        Ok(GameArena {
            player_count: self.roles.len(),
            leader: PlayerId(leader),
            names: self.vertices.iter().map(|v| v.name.clone()).collect(),
            owners: self
                .vertices
                .iter()
                .map(|v| PlayerId(v.owner.expect("validated")))
                .collect(),
            initial: VertexId(
                self.vertices
                    .iter()
                    .position(|v| v.initial)
                    .expect("validated"),
            ),
            edges,
            rewards,
            out_edges,
        })
    }
}

/// A validated arena. Vertex and edge order follow the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameArena {
    player_count: usize,
    leader: PlayerId,
    names: Vec<String>,
    owners: Vec<PlayerId>,
    initial: VertexId,
    edges: Vec<Edge>,
    /// `rewards[edge][player]`
    rewards: Vec<Vec<Rational>>,
    out_edges: Vec<Vec<EdgeId>>,
}

impl GameArena {
    pub fn player_count(&self) -> usize {
        self.player_count
    }

    pub fn players(&self) -> impl Iterator<Item = PlayerId> {
        (0..self.player_count).map(PlayerId)
    }

    pub fn leader(&self) -> PlayerId {
        self.leader
    }

    pub fn role(&self, p: PlayerId) -> Role {
        if p == self.leader {
            Role::Leader
        } else {
            Role::Follower
        }
    }

    pub fn followers(&self) -> impl Iterator<Item = PlayerId> + '_ {
        self.players().filter(move |p| *p != self.leader)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.names.len()).map(VertexId)
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.0]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.names.iter().position(|n| n == name).map(VertexId)
    }

    pub fn owner(&self, v: VertexId) -> PlayerId {
        self.owners[v.0]
    }

    pub fn initial(&self) -> VertexId {
        self.initial
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, Edge)> + '_ {
        self.edges.iter().enumerate().map(|(i, e)| (EdgeId(i), *e))
    }

    pub fn edge(&self, e: EdgeId) -> Edge {
        self.edges[e.0]
    }

    pub fn find_edge(&self, source: VertexId, target: VertexId) -> Option<EdgeId> {
        self.out_edges[source.0]
            .iter()
            .copied()
            .find(|e| self.edges[e.0].target == target)
    }

    /// Outgoing edges of `v` in input order.
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v.0]
    }

    pub fn reward(&self, p: PlayerId, e: EdgeId) -> &Rational {
        &self.rewards[e.0][p.0]
    }

    pub fn rewards_of_edge(&self, e: EdgeId) -> &[Rational] {
        &self.rewards[e.0]
    }

    /// Re-checks the arena invariants; always empty for a built arena.
    pub fn validate(&self) -> Vec<Violation> {
        self.to_builder().validate()
    }

    pub fn to_builder(&self) -> ArenaBuilder {
        let mut b = ArenaBuilder::new(self.player_count, self.leader.0);
        for v in self.vertices() {
            b.vertex(self.name(v), self.owner(v).0);
        }
        b.initial(self.name(self.initial));
        for (id, e) in self.edges() {
            b.edge(
                self.name(e.source),
                self.name(e.target),
                self.rewards[id.0].clone(),
            );
        }
        b
    }

    /// Canonical text form; `parse_game(a.to_text())` reproduces `a`.
    pub fn to_text(&self) -> String {
        text::serialize(self)
    }

    /// Hex SHA-256 of the canonical text form.
    pub fn fingerprint(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }
}

/// Largest edge reward over all players and edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMax(pub Rational);

impl RMax {
    pub fn value(&self) -> &Rational {
        &self.0
    }
}

pub fn max_reward(arena: &GameArena) -> RMax {
    RMax(
        arena
            .rewards
            .iter()
            .flatten()
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero),
    )
}

/// Largest absolute edge reward.
pub fn max_abs_reward(arena: &GameArena) -> Rational {
    arena
        .rewards
        .iter()
        .flatten()
        .map(|r| if *r < Rational::zero() { -r } else { r.clone() })
        .max()
        .unwrap_or_else(Rational::zero)
}

/// Two-player zero-sum projection: the protagonist keeps `r_p`, every other
/// player (leader included) minimises it.
#[derive(Clone, Debug)]
pub struct ZeroSumGame<'a> {
    arena: &'a GameArena,
    protagonist: PlayerId,
}

impl<'a> ZeroSumGame<'a> {
    /// Projection for any player, including the leader (used for Nash
    /// stability). [`punishment_game`] restricts this to followers.
    pub fn for_player(arena: &'a GameArena, p: PlayerId) -> Result<Self, ArenaError> {
        if p.0 >= arena.player_count {
            return Err(ArenaError::UnknownPlayer(p.0));
        }
        Ok(ZeroSumGame {
            arena,
            protagonist: p,
        })
    }

    pub fn arena(&self) -> &'a GameArena {
        self.arena
    }

    pub fn protagonist(&self) -> PlayerId {
        self.protagonist
    }

    pub fn is_protagonist_vertex(&self, v: VertexId) -> bool {
        self.arena.owner(v) == self.protagonist
    }

    pub fn protagonist_vertices(&self) -> Vec<VertexId> {
        self.arena
            .vertices()
            .filter(|v| self.is_protagonist_vertex(*v))
            .collect()
    }

    pub fn coalition_vertices(&self) -> Vec<VertexId> {
        self.arena
            .vertices()
            .filter(|v| !self.is_protagonist_vertex(*v))
            .collect()
    }

    /// Protagonist reward on `e`; the coalition receives its negation.
    pub fn reward(&self, e: EdgeId) -> &Rational {
        self.arena.reward(self.protagonist, e)
    }

    pub fn coalition_reward(&self, e: EdgeId) -> Rational {
        -self.reward(e)
    }
}

pub fn punishment_game(arena: &GameArena, p: PlayerId) -> Result<ZeroSumGame<'_>, ArenaError> {
    if p == arena.leader() {
        return Err(ArenaError::LeaderHasNoPunishmentGame(p));
    }
    ZeroSumGame::for_player(arena, p)
}
