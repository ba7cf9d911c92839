//! Polynomial input, benchmark families, an exact Sturm oracle and report
//! records for the `anewdsc` command-line tool.

pub mod families;
pub mod parse;
pub mod report;
pub mod runner;
pub mod sturm;

pub use families::{Family, FamilyParams, FamilyRegistry};
pub use parse::{parse_poly, PolySpec};
pub use runner::{run_bench, BenchConfig};
pub use sturm::{sturm_count, verify, SturmSequence};
