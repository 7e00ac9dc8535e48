//! Python module `pmssc`: instances, schedule evaluation, solvers and tail
//! bounds. Rationals cross the boundary as `fractions.Fraction`; run reports
//! come back as plain dicts.

use pmssc::bounds::{self, Side};
use pmssc::io::{
    generate_instance, oracle_report, parse_instance, pds_report, pmc_report, serialize_instance, solve_report,
    GeneratorSpec, ModelKind, OracleProblem, PdsAlgo, RunParams, RunReport, SolveAlgo,
};
use pmssc::oracle::OracleLimits;
use pmssc::pmc::PmcMode;
use pmssc::{Assignment, Cost, CostModel, Error, ProblemInstance, Rational, Schedule};
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyString;

create_exception!(pmssc, SolverError, PyRuntimeError, "A solver could not produce a result.");
create_exception!(pmssc, LimitsExceeded, SolverError, "The instance is too large for an exact solver.");

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::LimitsExceeded(_) => LimitsExceeded::new_err(e.to_string()),
        Error::NoIterationKept { .. }
        | Error::NumericalFailure(_)
        | Error::LpStatus(_)
        | Error::StalledOracle { .. }
        | Error::NoCoverage => SolverError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse_name<T: std::str::FromStr<Err = Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(to_py_err)
}

/// Accepts `int`, `fractions.Fraction` or a `"p/q"` string.
fn to_rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if let Ok(i) = obj.extract::<i128>() {
        return Ok(Rational::from_integer(i));
    }
    if let Ok(s) = obj.cast::<PyString>() {
        let text = s.to_str()?;
        return text
            .trim()
            .parse::<Rational>()
            .map_err(|e| PyValueError::new_err(format!("\"{text}\": {e}")));
    }
    let num: i128 = obj.getattr("numerator")?.extract()?;
    let den: i128 = obj.getattr("denominator")?.extract()?;
    if den == 0 {
        return Err(PyValueError::new_err("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// `None` or `"inf"` is an infinite cost; anything else goes through [`to_rational`].
fn to_cost(obj: &Bound<'_, PyAny>) -> PyResult<Cost> {
    if obj.is_none() {
        return Ok(Cost::Infinite);
    }
    if let Ok(s) = obj.cast::<PyString>() {
        if s.to_str()?.trim() == "inf" {
            return Ok(Cost::Infinite);
        }
    }
    Ok(Cost::Finite(to_rational(obj)?))
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((*r.numer(), *r.denom()))
}

fn report_dict<'py>(py: Python<'py>, report: &RunReport) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (report.to_json(),))
}

fn rationals(items: &[Bound<'_, PyAny>]) -> PyResult<Vec<Rational>> {
    items.iter().map(to_rational).collect()
}

fn limits(given: Option<(usize, usize, usize, Option<u64>)>, default: OracleLimits) -> OracleLimits {
    match given {
        None => default,
        Some((max_k, max_m, max_n, nodes)) => OracleLimits {
            max_k,
            max_m,
            max_n,
            node_budget: nodes.unwrap_or(default.node_budget),
        },
    }
}

fn run_params(epsilon: f64, seed: u64, mu: Option<f64>, r_cap: Option<u64>) -> RunParams {
    RunParams {
        mu,
        r_cap,
        ..RunParams::new(epsilon, seed)
    }
}

/// A validated problem instance. Sets and elements are 0-based.
#[pyclass(name = "Instance", module = "pmssc", frozen)]
struct PyInstance {
    inner: ProblemInstance,
}

impl PyInstance {
    fn build(
        n: usize,
        sets: Vec<Vec<usize>>,
        m: usize,
        model: CostModel,
        dag: Option<Vec<(usize, usize)>>,
    ) -> PyResult<Self> {
        let inner = ProblemInstance::new(n, sets, m, model, dag).map_err(to_py_err)?;
        Ok(PyInstance { inner })
    }
}

#[pymethods]
impl PyInstance {
    /// Every set costs 1 on every machine.
    #[staticmethod]
    #[pyo3(signature = (n, sets, m, dag=None))]
    fn unit(n: usize, sets: Vec<Vec<usize>>, m: usize, dag: Option<Vec<(usize, usize)>>) -> PyResult<Self> {
        Self::build(n, sets, m, CostModel::Unit, dag)
    }

    /// Set `s` costs `base_costs[s]` on every machine.
    #[staticmethod]
    #[pyo3(signature = (n, sets, m, base_costs, dag=None))]
    fn identical(
        n: usize,
        sets: Vec<Vec<usize>>,
        m: usize,
        base_costs: Vec<u64>,
        dag: Option<Vec<(usize, usize)>>,
    ) -> PyResult<Self> {
        Self::build(n, sets, m, CostModel::Identical { base_costs }, dag)
    }

    /// Set `s` costs `base_costs[s] / speeds[j]` on machine `j`.
    #[staticmethod]
    #[pyo3(signature = (n, sets, base_costs, speeds, dag=None))]
    fn related(
        n: usize,
        sets: Vec<Vec<usize>>,
        base_costs: Vec<u64>,
        speeds: Vec<Bound<'_, PyAny>>,
        dag: Option<Vec<(usize, usize)>>,
    ) -> PyResult<Self> {
        let speeds = rationals(&speeds)?;
        let m = speeds.len();
        Self::build(n, sets, m, CostModel::Related { base_costs, speeds }, dag)
    }

    /// `matrix[s][j]` is the cost of set `s` on machine `j`; `None` or
    /// `"inf"` forbids the pair.
    #[staticmethod]
    #[pyo3(signature = (n, sets, matrix, dag=None))]
    fn unrelated(
        n: usize,
        sets: Vec<Vec<usize>>,
        matrix: Vec<Vec<Bound<'_, PyAny>>>,
        dag: Option<Vec<(usize, usize)>>,
    ) -> PyResult<Self> {
        let matrix: Vec<Vec<Cost>> = matrix
            .iter()
            .map(|row| row.iter().map(to_cost).collect::<PyResult<_>>())
            .collect::<PyResult<_>>()?;
        let m = matrix.first().map_or(0, Vec::len);
        Self::build(n, sets, m, CostModel::Unrelated { matrix }, dag)
    }

    /// Parses the JSON instance format.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = parse_instance(text.as_bytes()).map_err(to_py_err)?;
        Ok(PyInstance { inner })
    }

    fn to_json(&self) -> String {
        serialize_instance(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn model(&self) -> &'static str {
        self.inner.cost_model().kind()
    }

    #[getter]
    fn sets(&self) -> Vec<Vec<usize>> {
        self.inner.sets().to_vec()
    }

    #[getter]
    fn dag(&self) -> Option<Vec<(usize, usize)>> {
        self.inner.dag_edges().map(<[_]>::to_vec)
    }

    /// Cost of set `s` on machine `j`, `None` when infinite.
    fn cost<'py>(&self, py: Python<'py>, s: usize, j: usize) -> PyResult<Option<Bound<'py, PyAny>>> {
        if s >= self.inner.k() || j >= self.inner.m() {
            return Err(PyValueError::new_err(format!("no cost for set {s} on machine {j}")));
        }
        self.inner.cost(s, j).finite().map(|c| fraction(py, &c)).transpose()
    }

    /// Issues found by validation, as strings. Empty means valid.
    fn validate(&self) -> Vec<String> {
        self.inner.validate().issues.iter().map(ToString::to_string).collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(model={}, n={}, k={}, m={})",
            self.inner.cost_model().kind(),
            self.inner.n(),
            self.inner.k(),
            self.inner.m()
        )
    }
}

/// The running example: identical costs, three machines, twenty elements.
#[pyfunction]
fn fig1() -> PyInstance {
    PyInstance {
        inner: pmssc::fixtures::fig1(),
    }
}

/// Per-machine set order of the running example's schedule.
#[pyfunction]
fn fig1_schedule() -> Vec<Vec<usize>> {
    pmssc::fixtures::fig1_schedule().per_machine.clone()
}

/// Sum over elements of their covering time for a schedule without delays.
#[pyfunction]
fn evaluate_schedule_cost<'py>(
    py: Python<'py>,
    inst: &PyInstance,
    schedule: Vec<Vec<usize>>,
) -> PyResult<Bound<'py, PyAny>> {
    let cost = pmssc::evaluate_schedule_cost(&inst.inner, &Schedule::new(schedule)).map_err(to_py_err)?;
    fraction(py, &cost.total)
}

/// Covered elements over makespan of an assignment, restricted to
/// `remaining` when given.
#[pyfunction]
#[pyo3(signature = (inst, assignment, remaining=None))]
fn density<'py>(
    py: Python<'py>,
    inst: &PyInstance,
    assignment: Vec<Vec<usize>>,
    remaining: Option<Vec<usize>>,
) -> PyResult<Bound<'py, PyAny>> {
    let asg = Assignment::new(assignment).map_err(to_py_err)?;
    let restrict = match remaining {
        Some(r) => pmssc::element_set(inst.inner.n(), r),
        None => inst.inner.universe(),
    };
    let d = pmssc::density(&inst.inner, &asg, &restrict).map_err(to_py_err)?;
    fraction(py, &d.value())
}

/// Elements covered by a family of sets.
#[pyfunction]
fn coverage(inst: &PyInstance, family: Vec<usize>) -> PyResult<Vec<usize>> {
    let covered = pmssc::coverage(&inst.inner, &family, &inst.inner.universe()).map_err(to_py_err)?;
    Ok(covered.ones().collect())
}

/// Full schedule; `compare` adds the exact optimum and the ratio.
#[pyfunction]
#[pyo3(signature = (inst, algo, epsilon=0.1, seed=0, mu=None, compare=false, limits=None))]
#[allow(clippy::too_many_arguments)]
fn solve<'py>(
    py: Python<'py>,
    inst: &PyInstance,
    algo: &str,
    epsilon: f64,
    seed: u64,
    mu: Option<f64>,
    compare: bool,
    limits: Option<(usize, usize, usize, Option<u64>)>,
) -> PyResult<Bound<'py, PyAny>> {
    let algo: SolveAlgo = parse_name(algo)?;
    let explicit = limits.is_some();
    let lim = self::limits(limits, OracleLimits::PMSSC);
    let compare = (compare || (algo == SolveAlgo::Exact && explicit)).then_some(&lim);
    let report = solve_report(&inst.inner, algo, &run_params(epsilon, seed, mu, None), compare).map_err(to_py_err)?;
    report_dict(py, &report)
}

/// One densest-subfamily call on the whole universe.
#[pyfunction]
#[pyo3(signature = (inst, algo, epsilon=0.1, seed=0, mu=None, limits=None))]
fn pds<'py>(
    py: Python<'py>,
    inst: &PyInstance,
    algo: &str,
    epsilon: f64,
    seed: u64,
    mu: Option<f64>,
    limits: Option<(usize, usize, usize, Option<u64>)>,
) -> PyResult<Bound<'py, PyAny>> {
    let algo: PdsAlgo = parse_name(algo)?;
    let lim = self::limits(limits, OracleLimits::ENUMERATION);
    let report = pds_report(&inst.inner, algo, &run_params(epsilon, seed, mu, None), &lim).map_err(to_py_err)?;
    report_dict(py, &report)
}

/// Maximum coverage under per-machine budgets via LP rounding.
#[pyfunction]
#[pyo3(signature = (inst, budgets, mode="poly", epsilon=0.1, seed=0, mu=None, r_cap=None))]
#[allow(clippy::too_many_arguments)]
fn pmc<'py>(
    py: Python<'py>,
    inst: &PyInstance,
    budgets: Vec<Bound<'_, PyAny>>,
    mode: &str,
    epsilon: f64,
    seed: u64,
    mu: Option<f64>,
    r_cap: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let mode = match mode {
        "poly" => PmcMode::Poly,
        "fpt" => PmcMode::Fpt,
        other => return Err(PyValueError::new_err(format!("unknown mode \"{other}\""))),
    };
    let budgets = rationals(&budgets)?;
    let report =
        pmc_report(&inst.inner, &budgets, mode, &run_params(epsilon, seed, mu, r_cap)).map_err(to_py_err)?;
    report_dict(py, &report)
}

/// Exact optimum of a small instance.
#[pyfunction]
#[pyo3(signature = (inst, problem, budgets=None, limits=None))]
fn oracle<'py>(
    py: Python<'py>,
    inst: &PyInstance,
    problem: &str,
    budgets: Option<Vec<Bound<'_, PyAny>>>,
    limits: Option<(usize, usize, usize, Option<u64>)>,
) -> PyResult<Bound<'py, PyAny>> {
    let problem: OracleProblem = parse_name(problem)?;
    let default = match problem {
        OracleProblem::Pmssc => OracleLimits::PMSSC,
        _ => OracleLimits::ENUMERATION,
    };
    let budgets = budgets.as_deref().map(rationals).transpose()?;
    let report =
        oracle_report(&inst.inner, problem, &self::limits(limits, default), budgets.as_deref()).map_err(to_py_err)?;
    report_dict(py, &report)
}

/// Random coverable instance.
#[pyfunction]
#[pyo3(signature = (n, k, m, model, density, seed=0, dag_edge_prob=None))]
fn generate(
    n: usize,
    k: usize,
    m: usize,
    model: &str,
    density: f64,
    seed: u64,
    dag_edge_prob: Option<f64>,
) -> PyResult<PyInstance> {
    let model: ModelKind = parse_name(model)?;
    let spec = GeneratorSpec {
        dag_edge_prob,
        ..GeneratorSpec::new(n, k, m, model, density, seed)
    };
    let inner = generate_instance(&spec).map_err(to_py_err)?;
    Ok(PyInstance { inner })
}

/// Upper bound on `P[X >= (1 + delta) mu]`.
#[pyfunction]
fn chernoff_upper(mu: f64, delta: f64) -> PyResult<f64> {
    bounds::chernoff_upper(mu, delta).map_err(to_py_err)
}

/// Upper bound on `P[X <= (1 - delta) mu]`.
#[pyfunction]
fn chernoff_lower(mu: f64, delta: f64) -> PyResult<f64> {
    bounds::chernoff_lower(mu, delta).map_err(to_py_err)
}

/// Empirical tail frequency against the bound, as a dict.
#[pyfunction]
#[pyo3(signature = (weights, probs, delta, side, trials=100_000, seed=0))]
fn validate_bound_monte_carlo<'py>(
    py: Python<'py>,
    weights: Vec<f64>,
    probs: Vec<f64>,
    delta: f64,
    side: &str,
    trials: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let side = match side {
        "upper" => Side::Upper,
        "lower" => Side::Lower,
        other => return Err(PyValueError::new_err(format!("unknown side \"{other}\""))),
    };
    let check = bounds::validate_bound_monte_carlo(&weights, &probs, delta, side, trials, seed).map_err(to_py_err)?;
    let dict = pyo3::types::PyDict::new(py);
    dict.set_item("empirical_tail", check.empirical_tail)?;
    dict.set_item("bound", check.bound)?;
    dict.set_item("holds", check.holds)?;
    Ok(dict.into_any())
}

#[pymodule(name = "pmssc")]
fn pmssc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<PyInstance>()?;
    m.add("SolverError", py.get_type::<SolverError>())?;
    m.add("LimitsExceeded", py.get_type::<LimitsExceeded>())?;
    m.add_function(wrap_pyfunction!(fig1, m)?)?;
    m.add_function(wrap_pyfunction!(fig1_schedule, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_schedule_cost, m)?)?;
    m.add_function(wrap_pyfunction!(density, m)?)?;
    m.add_function(wrap_pyfunction!(coverage, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(pds, m)?)?;
    m.add_function(wrap_pyfunction!(pmc, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(chernoff_upper, m)?)?;
    m.add_function(wrap_pyfunction!(chernoff_lower, m)?)?;
    m.add_function(wrap_pyfunction!(validate_bound_monte_carlo, m)?)?;
    Ok(())
}
