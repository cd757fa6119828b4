//! Graphviz export: circles for Eve, boxes for Adam, colors in the labels.

use std::fmt::Write as _;

use genreach_core::{FiniteMemoryStrategy, Game, Player, SolveResult};

pub const EVE_FILL: &str = "#a6cee3";
pub const ADAM_FILL: &str = "#fb9a99";

/// Optional decorations for [`export_dot`].
#[derive(Default, Clone, Copy)]
pub struct DotAnnotations<'a> {
    /// Winning regions, drawn as fill colors.
    pub result: Option<&'a SolveResult>,
    /// Edges this strategy can take are drawn bold.
    pub strategy: Option<&'a FiniteMemoryStrategy>,
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn export_dot(game: &Game, notes: DotAnnotations<'_>) -> String {
    let arena = game.arena();
    let mut out = String::from("digraph genreach {\n");
    for v in 0..arena.n() {
        let shape = match arena.owner(v) {
            Player::Eve => "circle",
            Player::Adam => "box",
        };
        let mask = game.objective().mask(v);
        let mut label = arena.name(v).to_string();
        if mask != 0 {
            let colors: Vec<String> = (0..game.k())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| (i + 1).to_string())
                .collect();
            write!(label, "\n{{{}}}", colors.join(",")).unwrap();
        }
        let mut attrs = format!("shape={shape}, label={}", quote(&label).replace("\n", "\\n"));
        if let Some(res) = notes.result {
            let fill = match res.winner(v) {
                Player::Eve => EVE_FILL,
                Player::Adam => ADAM_FILL,
            };
            write!(attrs, ", style=filled, fillcolor=\"{fill}\"").unwrap();
        }
        if game.init() == Some(v) {
            attrs.push_str(", peripheries=2");
        }
        writeln!(out, "  {} [{attrs}];", quote(arena.name(v))).unwrap();
    }
    let chosen: std::collections::HashSet<(usize, usize)> = notes
        .strategy
        .map(|s| s.moves().map(|(v, _, t)| (v, t)).collect())
        .unwrap_or_default();
    for (u, v) in arena.edges() {
        let bold = if chosen.contains(&(u, v)) { " [penwidth=2.5]" } else { "" };
        writeln!(out, "  {} -> {}{bold};", quote(arena.name(u)), quote(arena.name(v))).unwrap();
    }
    out.push_str("}\n");
    out
}
