//! Small reference instances used across tests, examples and the CLI.

use crate::instance::{CostModel, ProblemInstance};
use crate::schedule::Schedule;

/// Ten sets over twenty elements on three identical machines.
///
/// Elements and sets are 0-based: `S1` is set 0 and `u1` is element 0.
pub fn fig1() -> ProblemInstance {
    let sets: Vec<Vec<usize>> = [
        &[1, 2][..],
        &[3, 5, 7],
        &[6, 8, 10],
        &[4, 9, 11, 13],
        &[5, 12, 15, 16],
        &[8, 10, 14, 18, 20],
        &[11, 17],
        &[7, 16, 19],
        &[14, 20],
        &[9, 12, 18, 19],
    ]
    .iter()
    .map(|s| s.iter().map(|u| u - 1).collect())
    .collect();
    ProblemInstance::new(
        20,
        sets,
        3,
        CostModel::Identical {
            base_costs: vec![1, 2, 3, 2, 4, 5, 1, 3, 2, 4],
        },
        None,
    )
    .expect("fixture is well formed")
}

/// `M1 = [S1, S2, S5]`, `M2 = [S4, S6, S7]`, `M3 = [S3, S8]`; total cost 83.
pub fn fig1_schedule() -> Schedule {
    Schedule::new(vec![vec![0, 1, 4], vec![3, 5, 6], vec![2, 7]])
}

/// Universe `{a, b, c}`, sets `A = {a, b}` (cost 1), `B = {c}` (cost 1),
/// `C = {a, b, c}` (cost 2) on `m` identical machines.
pub fn t1(m: usize) -> ProblemInstance {
    ProblemInstance::new(
        3,
        vec![vec![0, 1], vec![2], vec![0, 1, 2]],
        m,
        CostModel::Identical {
            base_costs: vec![1, 1, 2],
        },
        None,
    )
    .expect("fixture is well formed")
}
