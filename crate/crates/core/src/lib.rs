//! Decomposition of varieties with coordinates in `(P^1)^n` into disjoint
//! parts described by equality and inequality constraints, with exact
//! arithmetic over `Q` or `F_p` and a brute-force finite-field checker.

pub mod cli;
pub mod coeff;
pub mod groebner;
pub mod multiproj;
pub mod oracle;
pub mod parser;
pub mod poly;
pub mod render;

pub use coeff::{Coefficient, FieldSpec};
pub use groebner::IdealBasis;
pub use multiproj::{partition_variety, Part, PartTree, PartitionOptions};
pub use parser::{parse_polynomial, parse_problem, ProblemSpec};
pub use poly::{Polynomial, VariableLayout};
