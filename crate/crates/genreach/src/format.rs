//! The line-oriented genreach game format.
//!
//! ```text
//! genreach 1
//! colors 2
//! vertex c eve
//! vertex a adam 1
//! edge c a
//! init c
//! ```
//!
//! `#` starts a comment. Colors are numbered from 1 in files. Edges may
//! mention vertices declared later; a vertex without successors is an error.

use std::collections::HashMap;
use std::fmt::Write as _;

use genreach_core::{Arena, Game, Objective, Player};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

/// Non-empty lines with comments stripped, as `(line number, tokens)`.
pub(crate) fn tokenized(text: &str, comment: char) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(move |(i, line)| {
        let line = line.split(comment).next().unwrap_or("");
        let tokens: Vec<&str> = line.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn parse_owner(token: &str, line: usize) -> Result<Player, ParseError> {
    match token {
        "eve" => Ok(Player::Eve),
        "adam" => Ok(Player::Adam),
        _ => Err(ParseError::new(line, format!("owner must be eve or adam, found `{token}`"))),
    }
}

pub fn parse_game(text: &str) -> Result<Game, ParseError> {
    let mut lines = tokenized(text, '#');
    match lines.next() {
        Some((_, t)) if t == ["genreach", "1"] => {}
        Some((line, t)) => {
            return Err(ParseError::new(
                line,
                format!("expected header `genreach 1`, found `{}`", t.join(" ")),
            ))
        }
        None => return Err(ParseError::new(1, "empty document")),
    }

    let mut k: Option<usize> = None;
    let mut names: Vec<String> = Vec::new();
    let mut owners = Vec::new();
    let mut declared_at = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut colors: Vec<Vec<usize>> = Vec::new();
    let mut edges: Vec<(usize, &str, &str)> = Vec::new();
    let mut init: Option<(usize, &str)> = None;
    let mut last_line = 1;

    for (line, t) in lines {
        last_line = line;
        match t[0] {
            "colors" => {
                if k.is_some() {
                    return Err(ParseError::new(line, "duplicate `colors` line"));
                }
                if !names.is_empty() {
                    return Err(ParseError::new(line, "`colors` must precede the vertices"));
                }
                let [_, count] = t[..] else {
                    return Err(ParseError::new(line, "expected `colors <k>`"));
                };
                let count: usize = count
                    .parse()
                    .map_err(|_| ParseError::new(line, format!("bad color count `{count}`")))?;
                if count > genreach_core::model::MAX_COLORS {
                    return Err(ParseError::new(
                        line,
                        format!("at most {} colors are supported", genreach_core::model::MAX_COLORS),
                    ));
                }
                k = Some(count);
                colors = vec![Vec::new(); count];
            }
            "vertex" => {
                let k = k.ok_or_else(|| ParseError::new(line, "`colors` must precede the vertices"))?;
                if t.len() < 3 {
                    return Err(ParseError::new(line, "expected `vertex <name> <eve|adam> [colors...]`"));
                }
                let name = t[1];
                let owner = parse_owner(t[2], line)?;
                let v = names.len();
                if index.insert(name.to_string(), v).is_some() {
                    return Err(ParseError::new(line, format!("duplicate vertex `{name}`")));
                }
                for c in &t[3..] {
                    let c: usize = c.parse().map_err(|_| ParseError::new(line, format!("bad color `{c}`")))?;
                    if c == 0 || c > k {
                        return Err(ParseError::new(line, format!("color {c} outside 1..{k}")));
                    }
                    colors[c - 1].push(v);
                }
                names.push(name.to_string());
                owners.push(owner);
                declared_at.push(line);
            }
            "edge" => {
                let [_, from, to] = t[..] else {
                    return Err(ParseError::new(line, "expected `edge <from> <to>`"));
                };
                edges.push((line, from, to));
            }
            "init" => {
                let [_, name] = t[..] else {
                    return Err(ParseError::new(line, "expected `init <name>`"));
                };
                if init.is_some() {
                    return Err(ParseError::new(line, "duplicate `init`"));
                }
                init = Some((line, name));
            }
            other => return Err(ParseError::new(line, format!("unknown directive `{other}`"))),
        }
    }

    let k = k.ok_or_else(|| ParseError::new(last_line, "missing `colors` line"))?;
    if names.is_empty() {
        return Err(ParseError::new(last_line, "no vertices"));
    }
    let lookup = |line: usize, name: &str| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| ParseError::new(line, format!("unknown vertex `{name}`")))
    };
    let mut pairs = Vec::with_capacity(edges.len());
    let mut seen = std::collections::HashSet::new();
    let mut out_degree = vec![0usize; names.len()];
    for &(line, from, to) in &edges {
        let e = (lookup(line, from)?, lookup(line, to)?);
        if !seen.insert(e) {
            return Err(ParseError::new(line, format!("duplicate edge {from} -> {to}")));
        }
        out_degree[e.0] += 1;
        pairs.push(e);
    }
    if let Some(v) = out_degree.iter().position(|&d| d == 0) {
        return Err(ParseError::new(declared_at[v], format!("dead end at vertex `{}`", names[v])));
    }
    let init = init.map(|(line, name)| lookup(line, name)).transpose()?;

    let n = names.len();
    let arena = Arena::new(names, owners, pairs).map_err(|e| ParseError::new(last_line, e.to_string()))?;
    let objective = Objective::new(n, colors).map_err(|e| ParseError::new(last_line, e.to_string()))?;
    debug_assert_eq!(objective.k(), k);
    Game::new(arena, objective, init).map_err(|e| ParseError::new(last_line, e.to_string()))
}

/// Canonical document: vertices in index order, edges sorted by (source,
/// target) index.
pub fn serialize_game(game: &Game) -> String {
    let arena = game.arena();
    let mut out = String::new();
    writeln!(out, "genreach 1").unwrap();
    writeln!(out, "colors {}", game.k()).unwrap();
    for v in 0..arena.n() {
        write!(out, "vertex {} {}", arena.name(v), arena.owner(v)).unwrap();
        let mask = game.objective().mask(v);
        for i in 0..game.k() {
            if mask & (1 << i) != 0 {
                write!(out, " {}", i + 1).unwrap();
            }
        }
        out.push('\n');
    }
    for (u, v) in arena.edges() {
        writeln!(out, "edge {} {}", arena.name(u), arena.name(v)).unwrap();
    }
    if let Some(v) = game.init() {
        writeln!(out, "init {}", arena.name(v)).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1: &str = "genreach 1
colors 2
vertex c eve
vertex a adam 1
vertex b eve 1
vertex d adam 2
edge c a
edge c b
edge c d
edge a b
edge b a
edge a d
edge b d
edge d d
init c
";

    #[test]
    fn fig1_document() {
        let g = parse_game(FIG1).unwrap();
        assert_eq!((g.n(), g.k(), g.arena().m()), (4, 2, 8));
        assert_eq!(g.init(), g.arena().index_of("c"));
        assert_eq!(g, genreach_core::generators::fig1());
    }

    #[test]
    fn canonical_order_and_round_trip() {
        let g = parse_game(FIG1).unwrap();
        let text = serialize_game(&g);
        assert_eq!(parse_game(&text).unwrap(), g);
        assert!(text.contains("edge c a\nedge c b\nedge c d\n"));
    }

    #[test]
    fn comments_and_forward_edges() {
        let g = parse_game("# a game\ngenreach 1 # header\n\ncolors 0\nedge x x\nvertex x adam\n").unwrap();
        assert_eq!((g.n(), g.k(), g.init()), (1, 0, None));
        assert!(serialize_game(&g).contains("colors 0\n"));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = |s: &str| parse_game(s).unwrap_err();
        assert_eq!(err("genreach 1\ncolors 2\nvertex x eve 3\nedge x x\n").line, 3);
        assert_eq!(err("genreach 1\ncolors 1\nvertex x eve\nedge x y\n").line, 4);
        assert_eq!(err("genreach 1\ncolors 1\nvertex x eve\nvertex y eve\nedge x x\n").line, 4);
        assert_eq!(err("genreach 1\ncolors 1\nvertex x eve\nedge x x\ninit x\ninit x\n").line, 6);
        assert_eq!(err("genreach 2\n").line, 1);
        assert_eq!(err("genreach 1\ncolors 1\nvertex x eve\nedge x x\nedge x x\n").line, 5);
        assert_eq!(err("genreach 1\ncolors 1\nvertex x player\n").line, 3);
        assert!(err("genreach 1\ncolors 1\nvertex x eve\n").message.contains("dead end"));
    }
}
