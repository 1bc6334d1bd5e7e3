#![allow(dead_code)]

use std::path::PathBuf;

use p1variety::multiproj::homogenized_generators;
use p1variety::{parse_problem, partition_variety, PartTree, PartitionOptions, Polynomial, ProblemSpec};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("problems").join(name)
}

pub fn load(name: &str) -> ProblemSpec {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture exists");
    parse_problem(&text).expect("fixture parses")
}

pub fn solve(spec: &ProblemSpec) -> PartTree {
    partition_variety(spec, &PartitionOptions::default()).expect("partition finishes")
}

pub fn homogenized(spec: &ProblemSpec) -> Vec<Polynomial> {
    homogenized_generators(spec).expect("homogenizes")
}

/// Fixtures over a prime field, with their characteristic.
pub const PRIME_FIXTURES: [(&str, u32); 6] = [
    ("shared_factor_f5.txt", 5),
    ("shared_factor_f7.txt", 7),
    ("hyperbola_f5.txt", 5),
    ("hyperbola_y_f5.txt", 5),
    ("axes_f3.txt", 3),
    ("whitney_f5.txt", 5),
];

pub const ALL_FIXTURES: [&str; 7] = [
    "shared_factor.txt",
    "shared_factor_f5.txt",
    "shared_factor_f7.txt",
    "hyperbola_f5.txt",
    "hyperbola_y_f5.txt",
    "axes_f3.txt",
    "whitney_f5.txt",
];
