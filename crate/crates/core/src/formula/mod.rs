//! STL syntax: AST, parsing, negation normal form and structural analysis.

mod ast;
mod bounds;
mod nnf;
mod parser;
mod target;
mod window;

pub use ast::{Expr, Formula, Predicate, TimeInterval, VariableDeclarations};
pub use bounds::{predicate_bounds, Bounds};
pub use nnf::{check_nnf, to_nnf};
pub use parser::{parse_formula, parse_spec, SpecFile};
pub use target::TargetSpec;
pub use window::{aggregation_k, horizon, min_sampling_window};
