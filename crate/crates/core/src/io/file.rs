//! JSON instance format.
//!
//! ```json
//! {"version": 1, "n": 3, "m": 2,
//!  "cost_model": {"kind": "unrelated", "matrix": [[1, "inf"], [2, [3, 2]]]},
//!  "sets": [[0, 1], [2]], "dag_edges": [[0, 1]]}
//! ```
//!
//! Speeds and matrix entries are integers or `[num, den]` pairs; infinite
//! matrix entries are the string `"inf"`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{CostModel, ProblemInstance, ValidationIssue};
use crate::rational::{Cost, Rational};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub version: u32,
    pub n: usize,
    pub m: usize,
    pub cost_model: CostModelFile,
    pub sets: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dag_edges: Option<Vec<[usize; 2]>>,
    /// Free-form metadata, ignored by the solvers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CostModelFile {
    Unit,
    Identical { base_costs: Vec<u64> },
    Related { base_costs: Vec<u64>, speeds: Vec<Number> },
    Unrelated { matrix: Vec<Vec<Entry>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Pair([i64; 2]),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Num(Number),
    Text(String),
}

fn number_to_rational(x: &Number, path: &str) -> Result<Rational> {
    match *x {
        Number::Int(v) => Ok(Rational::from_integer(v as i128)),
        Number::Pair([_, 0]) => Err(Error::Validation(format!("{path}: zero denominator"))),
        Number::Pair([a, b]) => Ok(Rational::new(a as i128, b as i128)),
    }
}

fn rational_to_number(r: &Rational) -> Number {
    if *r.denom() == 1 {
        Number::Int(*r.numer() as i64)
    } else {
        Number::Pair([*r.numer() as i64, *r.denom() as i64])
    }
}

impl InstanceFile {
    pub fn from_instance(inst: &ProblemInstance) -> Self {
        let cost_model = match inst.cost_model() {
            CostModel::Unit => CostModelFile::Unit,
            CostModel::Identical { base_costs } => CostModelFile::Identical {
                base_costs: base_costs.clone(),
            },
            CostModel::Related { base_costs, speeds } => CostModelFile::Related {
                base_costs: base_costs.clone(),
                speeds: speeds.iter().map(rational_to_number).collect(),
            },
            CostModel::Unrelated { matrix } => CostModelFile::Unrelated {
                matrix: matrix
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|c| match c {
                                Cost::Finite(r) => Entry::Num(rational_to_number(r)),
                                Cost::Infinite => Entry::Text("inf".into()),
                            })
                            .collect()
                    })
                    .collect(),
            },
        };
        InstanceFile {
            version: FORMAT_VERSION,
            n: inst.n(),
            m: inst.m(),
            cost_model,
            sets: inst.sets().to_vec(),
            dag_edges: inst.dag_edges().map(|e| e.iter().map(|&(a, b)| [a, b]).collect()),
            names: None,
        }
    }

    pub fn to_instance(&self) -> Result<ProblemInstance> {
        if self.version != FORMAT_VERSION {
            return Err(Error::Validation(format!(
                "version: expected {FORMAT_VERSION}, found {}",
                self.version
            )));
        }
        let cost_model = match &self.cost_model {
            CostModelFile::Unit => CostModel::Unit,
            CostModelFile::Identical { base_costs } => CostModel::Identical {
                base_costs: base_costs.clone(),
            },
            CostModelFile::Related { base_costs, speeds } => CostModel::Related {
                base_costs: base_costs.clone(),
                speeds: speeds
                    .iter()
                    .enumerate()
                    .map(|(j, s)| number_to_rational(s, &format!("cost_model.speeds[{j}]")))
                    .collect::<Result<_>>()?,
            },
            CostModelFile::Unrelated { matrix } => CostModel::Unrelated {
                matrix: matrix
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(j, e)| {
                                let path = format!("cost_model.matrix[{i}][{j}]");
                                match e {
                                    Entry::Num(x) => number_to_rational(x, &path).map(Cost::Finite),
                                    Entry::Text(t) if t == "inf" => Ok(Cost::Infinite),
                                    Entry::Text(t) => Err(Error::Validation(format!("{path}: unexpected \"{t}\""))),
                                }
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<_>>()?,
            },
        };
        let dag = self
            .dag_edges
            .as_ref()
            .map(|e| e.iter().map(|&[a, b]| (a, b)).collect());
        let inst = ProblemInstance::new(self.n, self.sets.clone(), self.m, cost_model, dag)?;
        for issue in inst.validate().issues {
            match issue {
                ValidationIssue::CyclicDag(v) => return Err(Error::CyclicDag(v)),
                ValidationIssue::Uncovered(_) => {}
                other => return Err(Error::Validation(other.to_string())),
            }
        }
        Ok(inst)
    }
}

/// Parses and validates an instance. Elements no set covers are allowed here
/// and reported by validation; structural problems, cycles and non-positive
/// costs are errors.
pub fn parse_instance(bytes: &[u8]) -> Result<ProblemInstance> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse(format!("not UTF-8: {e}")))?;
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: InstanceFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::Parse(format!("{path}: {}", e.into_inner()))
    })?;
    file.to_instance()
}

pub fn serialize_instance(inst: &ProblemInstance) -> String {
    serde_json::to_string_pretty(&InstanceFile::from_instance(inst)).expect("instance file serializes")
}
