//! Command-line front end: read a problem, build the part tree, render it,
//! and optionally verify it by brute force over `F_p`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Parser;

use crate::multiproj::{homogenized_generators, partition_variety, PartitionError, PartitionOptions};
use crate::oracle::{check_partition, extension_failures};
use crate::parser::parse_problem;
use crate::render::{render_tree, Format};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_NODE_LIMIT: u8 = 2;
pub const EXIT_ORACLE: u8 = 3;

/// Decompose the variety of a polynomial ideal with coordinates in
/// (P^1)^n into disjoint parts.
#[derive(Debug, Clone, Parser)]
#[command(name = "p1variety", version)]
pub struct RunOptions {
    /// Problem file
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Print only the leaves of the tree
    #[arg(long)]
    pub leaves: bool,
    /// Stop with exit status 2 once the tree has this many nodes
    #[arg(long, default_value_t = PartitionOptions::default().max_nodes)]
    pub max_nodes: usize,
    /// Skip the radical closure after each split
    #[arg(long)]
    pub no_radical: bool,
    /// Check the leaves against every point of (P^1(F_p))^n
    #[arg(long, value_name = "P")]
    pub oracle: Option<u32>,
}

/// What a run writes and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn fail(status: u8, message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        stderr.push('\n');
        Outcome { status, stdout: String::new(), stderr }
    }
}

/// Parses command-line arguments (including the program name) and runs.
/// Usage errors exit with status 1; `--help` and `--version` with 0.
pub fn run_from_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match RunOptions::try_parse_from(args) {
        Ok(options) => run(&options),
        Err(e) => {
            let status = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome { status, stdout: String::new(), stderr: text }
            } else {
                Outcome { status, stdout: text, stderr: String::new() }
            }
        }
    }
}

pub fn run(options: &RunOptions) -> Outcome {
    let text = match std::fs::read_to_string(&options.input) {
        Ok(t) => t,
        Err(e) => return Outcome::fail(EXIT_INPUT, format!("cannot read {}: {e}", options.input.display())),
    };
    let spec = match parse_problem(&text) {
        Ok(s) => s,
        Err(e) => return Outcome::fail(EXIT_INPUT, format!("{}: {e}", options.input.display())),
    };
    if let Some(p) = options.oracle {
        let c = spec.field.characteristic();
        if c == 0 {
            return Outcome::fail(EXIT_INPUT, "--oracle needs a problem over F_p; this one is over Q");
        }
        if c != p {
            return Outcome::fail(EXIT_INPUT, format!("--oracle {p} does not match the problem characteristic {c}"));
        }
    }
    let partition_options = PartitionOptions { max_nodes: options.max_nodes, radical: !options.no_radical };
    let mut stderr = String::new();
    let tree = match partition_variety(&spec, &partition_options) {
        Ok(tree) => tree,
        Err(PartitionError::NodeLimit { limit, partial }) => {
            return Outcome {
                status: EXIT_NODE_LIMIT,
                stdout: render_tree(&partial, options.format, options.leaves),
                stderr: format!("node limit of {limit} reached; printed the partial tree\n"),
            };
        }
        Err(e) => return Outcome::fail(EXIT_INPUT, e.to_string()),
    };
    let d = &tree.diagnostics;
    if d.inconsistent_root {
        stderr.push_str("the ideal is the unit ideal; the variety is empty\n");
    }
    let _ = writeln!(
        stderr,
        "{} nodes, {} leaves; discarded {} unit and {} empty children",
        tree.nodes.len(),
        tree.leaf_parts().len(),
        d.unit_children,
        d.empty_children
    );
    let stdout = render_tree(&tree, options.format, options.leaves);

    let Some(p) = options.oracle else {
        return Outcome { status: EXIT_OK, stdout, stderr };
    };
    let gens = match homogenized_generators(&spec) {
        Ok(g) => g,
        Err(e) => return Outcome::fail(EXIT_INPUT, e.to_string()),
    };
    let report = match check_partition(&tree, &gens, p) {
        Ok(r) => r,
        Err(e) => return Outcome { status: EXIT_INPUT, stdout, stderr: stderr + &e.to_string() + "\n" },
    };
    let mut status = EXIT_OK;
    if report.is_valid() {
        let _ = writeln!(stderr, "partition valid: {} tuples scanned", report.tuples_scanned);
    } else {
        status = EXIT_ORACLE;
        let _ = writeln!(stderr, "partition invalid: {} tuples scanned", report.tuples_scanned);
        stderr.push_str(&report.violations());
    }
    let mut failures = Vec::new();
    for (leaf, _) in tree.leaf_parts() {
        match extension_failures(leaf, &tree.layout, p) {
            Ok(f) => failures.extend(f),
            Err(e) => return Outcome { status: EXIT_INPUT, stdout, stderr: stderr + &e.to_string() + "\n" },
        }
    }
    if failures.is_empty() {
        stderr.push_str("extension property holds on every leaf\n");
    } else {
        status = EXIT_ORACLE;
        for f in &failures {
            let _ = writeln!(stderr, "part {}: prefix {:?} has no value for y_{}", f.part, f.prefix, f.slot);
        }
    }
    Outcome { status, stdout, stderr }
}
