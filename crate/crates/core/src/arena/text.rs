//! Line-oriented game text format.
//!
//! ```text
//! players <k> leader <index>
//! vertex <name> owner <index> [initial]
//! edge <src> <tgt> <r_0> ... <r_{k-1}>
//! ```
//!
//! Rewards are integers or `a/b`; `#` starts a comment.

use std::fmt::Write;

use super::{ArenaBuilder, ArenaError, GameArena};
use crate::rational::{fraction, parse_rational};

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let code = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in code.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token {
                    text: &code[s..i],
                    column: s + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &code[s..],
            column: s + 1,
        });
    }
    out
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ArenaError {
    ArenaError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn expect_keyword(tokens: &[Token<'_>], at: usize, word: &str, line: usize, eol: usize) -> Result<(), ArenaError> {
    match tokens.get(at) {
        Some(t) if t.text == word => Ok(()),
        Some(t) => Err(syntax(line, t.column, format!("expected `{word}`, found `{}`", t.text))),
        None => Err(syntax(line, eol, format!("expected `{word}`"))),
    }
}

fn expect_index(tokens: &[Token<'_>], at: usize, what: &str, line: usize, eol: usize) -> Result<usize, ArenaError> {
    match tokens.get(at) {
        Some(t) => t
            .text
            .parse::<usize>()
            .map_err(|_| syntax(line, t.column, format!("expected {what} (nonnegative integer), found `{}`", t.text))),
        None => Err(syntax(line, eol, format!("expected {what}"))),
    }
}

fn expect_name<'a>(tokens: &[Token<'a>], at: usize, line: usize, eol: usize) -> Result<&'a str, ArenaError> {
    tokens
        .get(at)
        .map(|t| t.text)
        .ok_or_else(|| syntax(line, eol, "expected vertex name"))
}

pub fn parse_game(text: &str) -> Result<GameArena, ArenaError> {
    let mut builder: Option<(ArenaBuilder, usize)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let tokens = tokenize(raw);
        let Some(head) = tokens.first() else { continue };
        let eol = raw.len() + 1;
        match head.text {
            "players" => {
                if builder.is_some() {
                    return Err(syntax(line, head.column, "duplicate `players` header"));
                }
                let k = expect_index(&tokens, 1, "player count", line, eol)?;
                expect_keyword(&tokens, 2, "leader", line, eol)?;
                let leader = expect_index(&tokens, 3, "leader index", line, eol)?;
                if let Some(t) = tokens.get(4) {
                    return Err(syntax(line, t.column, format!("unexpected `{}`", t.text)));
                }
                if k == 0 {
                    return Err(syntax(line, tokens[1].column, "at least one player required"));
                }
                if leader >= k {
                    return Err(syntax(line, tokens[3].column, format!("leader {leader} out of range for {k} players")));
                }
                builder = Some((ArenaBuilder::new(k, leader), k));
            }
            "vertex" => {
                let (b, _) = builder
                    .as_mut()
                    .ok_or_else(|| syntax(line, head.column, "`vertex` before `players` header"))?;
                let name = expect_name(&tokens, 1, line, eol)?;
                expect_keyword(&tokens, 2, "owner", line, eol)?;
                let owner = expect_index(&tokens, 3, "owner index", line, eol)?;
                b.vertex(name, owner);
                match tokens.get(4) {
                    None => {}
                    Some(t) if t.text == "initial" => {
                        b.initial(name);
                        if let Some(t) = tokens.get(5) {
                            return Err(syntax(line, t.column, format!("unexpected `{}`", t.text)));
                        }
                    }
                    Some(t) => return Err(syntax(line, t.column, format!("expected `initial`, found `{}`", t.text))),
                }
            }
            "edge" => {
                let (b, _) = builder
                    .as_mut()
                    .ok_or_else(|| syntax(line, head.column, "`edge` before `players` header"))?;
                let src = expect_name(&tokens, 1, line, eol)?;
                let tgt = expect_name(&tokens, 2, line, eol)?;
                let mut rewards = Vec::new();
                for t in &tokens[3.min(tokens.len())..] {
                    let r = parse_rational(t.text)
                        .ok_or_else(|| syntax(line, t.column, format!("invalid reward `{}`", t.text)))?;
                    rewards.push(r);
                }
                b.edge(src, tgt, rewards);
            }
            other => {
                return Err(syntax(line, head.column, format!("unknown statement `{other}`")));
            }
        }
    }
    let (b, _) = builder.ok_or_else(|| syntax(1, 1, "missing `players <k> leader <index>` header"))?;
    b.build()
}

pub(super) fn serialize(arena: &GameArena) -> String {
    let mut s = String::new();
    writeln!(s, "players {} leader {}", arena.player_count(), arena.leader().0).unwrap();
    for v in arena.vertices() {
        write!(s, "vertex {} owner {}", arena.name(v), arena.owner(v).0).unwrap();
        if v == arena.initial() {
            s.push_str(" initial");
        }
        s.push('\n');
    }
    for (id, e) in arena.edges() {
        write!(s, "edge {} {}", arena.name(e.source), arena.name(e.target)).unwrap();
        for r in arena.rewards_of_edge(id) {
            write!(s, " {}", fraction(r)).unwrap();
        }
        s.push('\n');
    }
    s
}
