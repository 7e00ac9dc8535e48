"""Smoke test for the `pmssc` Python module.

Build and install first:
    pip install maturin
    pip install --no-build-isolation -e crates/py
then run:
    python python/smoke_test.py
"""

import json
from fractions import Fraction

import pmssc


def main() -> None:
    inst = pmssc.fig1()
    assert (inst.n, inst.k, inst.m, inst.model) == (20, 10, 3, "identical")
    assert pmssc.evaluate_schedule_cost(inst, pmssc.fig1_schedule()) == 83

    # JSON round trip keeps the instance.
    again = pmssc.Instance.from_json(inst.to_json())
    assert again.sets == inst.sets
    assert again.cost(4, 0) == 4

    # Unit instance: one machine, sets {0,1} and {2}.
    unit = pmssc.Instance.unit(3, [[0, 1], [2]], 1)
    assert pmssc.density(unit, [[0]]) == 2
    assert pmssc.density(unit, [[0, 1]]) == Fraction(3, 2)
    assert pmssc.coverage(unit, [0]) == [0, 1]

    related = pmssc.Instance.related(2, [[0], [1]], [2, 4], [2, Fraction(1, 2)])
    assert related.cost(1, 1) == 8
    unrelated = pmssc.Instance.unrelated(2, [[0], [0, 1]], [[1, "inf"], ["3/2", None]])
    assert unrelated.cost(0, 1) is None
    assert unrelated.cost(1, 0) == Fraction(3, 2)

    limits = (10, 3, 20, 200_000_000)
    greedy = pmssc.solve(inst, "greedy-identical", epsilon=0.1, compare=True, limits=limits)
    exact = pmssc.oracle(inst, "pmssc", limits=limits)
    optimum = Fraction(exact["cost"])
    assert Fraction(greedy["cost"]) >= optimum
    assert greedy["oracle"]["ratio"] >= 1.0
    json.dumps(greedy)

    densest = pmssc.pds(inst, "exact")
    assert Fraction(densest["density"]) > 0

    small = pmssc.generate(6, 4, 2, "unrelated", 0.4, seed=7)
    assert not small.validate()
    cover = pmssc.pmc(small, [2, 2], mode="poly", epsilon=0.2, seed=1)
    best = pmssc.oracle(small, "pmc", budgets=[2, 2])
    assert cover["covered"] <= best["covered"]

    dag = pmssc.generate(6, 5, 2, "unit", 0.5, seed=3, dag_edge_prob=0.3)
    assert dag.dag is not None
    pmssc.solve(dag, "greedy-precedence")

    assert abs(pmssc.chernoff_upper(1.0, 1.0) - 0.6795704571147613) < 1e-12
    check = pmssc.validate_bound_monte_carlo([1.0] * 10, [0.5] * 10, 0.5, "upper", trials=20_000, seed=5)
    assert check["holds"]

    try:
        pmssc.oracle(pmssc.generate(20, 30, 3, "identical", 0.3), "pmssc")
    except pmssc.LimitsExceeded:
        pass
    else:
        raise AssertionError("expected LimitsExceeded")

    try:
        pmssc.Instance.unit(3, [[0, 5]], 1)
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError for an out-of-range element")

    print("python smoke test: OK")


if __name__ == "__main__":
    main()
