//! Text, JSON and DOT renderings of a part tree.

use std::fmt::Write as _;

use serde::Serialize;

use crate::multiproj::{Part, PartTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

fn selected(tree: &PartTree, leaves_only: bool) -> Vec<(&Part, Vec<usize>)> {
    if leaves_only {
        tree.leaf_parts()
    } else {
        tree.nodes.iter().map(|p| (p, tree.path(p.id))).collect()
    }
}

fn eq_texts(tree: &PartTree, part: &Part) -> Vec<String> {
    part.eq.generators().iter().map(|g| g.to_text(&tree.layout)).collect()
}

fn neq_texts(tree: &PartTree, part: &Part) -> Vec<String> {
    part.neq.iter().map(|q| q.to_text(&tree.layout)).collect()
}

/// `(0, 1, 3, ideal(g1,g2), {q1, q2})`: the path from the root ends with
/// the node's own id.
pub fn node_line(tree: &PartTree, part: &Part) -> String {
    let path: Vec<String> = tree.path(part.id).iter().map(usize::to_string).collect();
    format!(
        "({}, ideal({}), {{{}}})",
        path.join(", "),
        eq_texts(tree, part).join(","),
        neq_texts(tree, part).join(", ")
    )
}

pub fn render_text(tree: &PartTree, leaves_only: bool) -> String {
    selected(tree, leaves_only).into_iter().map(|(p, _)| node_line(tree, p) + "\n").collect()
}

#[derive(Serialize)]
struct JsonNode {
    id: usize,
    prev: i64,
    path: Vec<usize>,
    #[serde(rename = "frozenLevel")]
    frozen_level: usize,
    eq: Vec<String>,
    neq: Vec<String>,
    leaf: bool,
}

#[derive(Serialize)]
struct JsonTree {
    nodes: Vec<JsonNode>,
}

pub fn render_json(tree: &PartTree, leaves_only: bool) -> String {
    let nodes = selected(tree, leaves_only)
        .into_iter()
        .map(|(p, path)| JsonNode {
            id: p.id,
            prev: p.prev.map_or(-1, |q| q as i64),
            path,
            frozen_level: p.frozen_level,
            eq: eq_texts(tree, p),
            neq: neq_texts(tree, p),
            leaf: tree.is_leaf(p.id),
        })
        .collect();
    serde_json::to_string_pretty(&JsonTree { nodes }).expect("plain data serializes") + "\n"
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn render_dot(tree: &PartTree, leaves_only: bool) -> String {
    let parts = selected(tree, leaves_only);
    let shown: Vec<usize> = parts.iter().map(|(p, _)| p.id).collect();
    let mut out = String::from("digraph parts {\n  node [shape=box, fontname=\"monospace\"];\n");
    for (p, _) in &parts {
        let label = format!(
            "{}\\nideal({})\\n{{{}}}",
            p.id,
            dot_escape(&eq_texts(tree, p).join(",")),
            dot_escape(&neq_texts(tree, p).join(", "))
        );
        let extra = if tree.is_leaf(p.id) { ", peripheries=2" } else { "" };
        let _ = writeln!(out, "  n{} [label=\"{}\"{}];", p.id, label, extra);
    }
    for (p, _) in &parts {
        if let Some(prev) = p.prev.filter(|q| shown.contains(q)) {
            let _ = writeln!(out, "  n{} -> n{};", prev, p.id);
        }
    }
    out.push_str("}\n");
    out
}

pub fn render_tree(tree: &PartTree, format: Format, leaves_only: bool) -> String {
    match format {
        Format::Text => render_text(tree, leaves_only),
        Format::Json => render_json(tree, leaves_only),
        Format::Dot => render_dot(tree, leaves_only),
    }
}
