//! Seeded random instances.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{CostModel, ProblemInstance};
use crate::rational::{Cost, Rational};
use crate::rng::stream_rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Unit,
    Identical,
    Related,
    Unrelated,
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" => Ok(ModelKind::Unit),
            "identical" => Ok(ModelKind::Identical),
            "related" => Ok(ModelKind::Related),
            "unrelated" => Ok(ModelKind::Unrelated),
            other => Err(Error::Parse(format!("unknown cost model \"{other}\""))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub model: ModelKind,
    /// Probability that a set contains a given element.
    pub density: f64,
    pub seed: u64,
    /// Probability of an edge `i -> j` for each `i < j`; no graph when unset.
    pub dag_edge_prob: Option<f64>,
    /// Integer costs are drawn from `1..=max_cost`.
    pub max_cost: u64,
    /// Probability that an unrelated matrix entry is infinite.
    pub inf_prob: f64,
}

impl GeneratorSpec {
    pub fn new(n: usize, k: usize, m: usize, model: ModelKind, density: f64, seed: u64) -> Self {
        GeneratorSpec {
            n,
            k,
            m,
            model,
            density,
            seed,
            dag_edge_prob: None,
            max_cost: 3,
            inf_prob: 0.0,
        }
    }
}

/// Speeds are `a / b` with `a` in `1..=4` and `b` in `1..=2`.
pub fn generate_instance(spec: &GeneratorSpec) -> Result<ProblemInstance> {
    if spec.n == 0 || spec.k == 0 || spec.m == 0 || spec.max_cost == 0 {
        return Err(Error::Domain("n, k, m and max_cost must be positive".into()));
    }
    let probs = [Some(spec.density), spec.dag_edge_prob, Some(spec.inf_prob)];
    if probs.iter().flatten().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::Domain("probabilities must lie in [0, 1]".into()));
    }
    let mut rng = stream_rng(spec.seed, 0);
    let mut sets: Vec<Vec<usize>> = (0..spec.k)
        .map(|_| (0..spec.n).filter(|_| rng.random_bool(spec.density)).collect())
        .collect();
    let mut covered = vec![false; spec.n];
    for &u in sets.iter().flatten() {
        covered[u] = true;
    }
    for u in (0..spec.n).filter(|&u| !covered[u]) {
        let s = rng.random_range(0..spec.k);
        sets[s].push(u);
    }
    let cost = |rng: &mut rand_chacha::ChaCha8Rng| rng.random_range(1..=spec.max_cost);
    let cost_model = match spec.model {
        ModelKind::Unit => CostModel::Unit,
        ModelKind::Identical => CostModel::Identical {
            base_costs: (0..spec.k).map(|_| cost(&mut rng)).collect(),
        },
        ModelKind::Related => CostModel::Related {
            base_costs: (0..spec.k).map(|_| cost(&mut rng)).collect(),
            speeds: (0..spec.m)
                .map(|_| Rational::new(rng.random_range(1..=4), rng.random_range(1..=2)))
                .collect(),
        },
        ModelKind::Unrelated => CostModel::Unrelated {
            matrix: (0..spec.k)
                .map(|_| {
                    let mut row: Vec<Cost> = (0..spec.m)
                        .map(|_| {
                            let c = cost(&mut rng);
                            if rng.random_bool(spec.inf_prob) {
                                Cost::Infinite
                            } else {
                                Cost::from(c as i128)
                            }
                        })
                        .collect();
                    if row.iter().all(|c| c.is_infinite()) {
                        let j = rng.random_range(0..spec.m);
                        row[j] = Cost::from(cost(&mut rng) as i128);
                    }
                    row
                })
                .collect(),
        },
    };
    let dag = spec.dag_edge_prob.map(|p| {
        let mut edges = Vec::new();
        for a in 0..spec.k {
            for b in a + 1..spec.k {
                if rng.random_bool(p) {
                    edges.push((a, b));
                }
            }
        }
        edges
    });
    ProblemInstance::new(spec.n, sets, spec.m, cost_model, dag)
}
