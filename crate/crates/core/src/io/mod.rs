//! Instance files, generators and run reports.

mod file;
mod generate;
mod report;

use serde::Serializer;

use crate::rational::Rational;

pub use file::{parse_instance, serialize_instance, InstanceFile, FORMAT_VERSION};
pub use generate::{generate_instance, GeneratorSpec, ModelKind};
pub use report::{
    oracle_report, pds_report, pmc_report, solve_report, OracleComparison, OracleProblem, PdsAlgo, RunParams,
    RunReport, SolveAlgo,
};

/// Renders `p/q`, or `p` for integers.
pub fn rational_string(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn ser_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(r))
}

pub(crate) fn ser_rationals<S: Serializer>(rs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(rs.iter().map(rational_string))
}
