"""Smoke test for the powerdiag_py extension module.

Build and install first, e.g.

    pip install maturin
    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install dist/powerdiag_py-*.whl
    python python/smoke_test.py
"""

import json
import pathlib
import sys
from fractions import Fraction

import powerdiag_py as pd

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "crates" / "core" / "fixtures"


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    return cond


def main():
    results = []

    line = pd.CellComplex.paired(1, 2, {(0, 1): ([1], 0)})
    res = pd.detect(line)
    results.append(check(res.is_power_diagram, "two cells on a line"))
    results.append(check(res.stats["variables"] == 2 * 1 + 2 + 2, "variable count"))
    cert = res.certificate
    results.append(check(pd.verify_certificate(line, cert), "certificate verifies"))
    lam = cert.lambdas
    results.append(check(all(v >= 1 for v in lam.values()), "lambdas at least 1"))

    spec = pd.PowerDiagramSpec([[1, 1], [1, 3], [3, 3], [3, 1]], [1, 5, 9, 5])
    dom = pd.Domain.box([0, 0], [4, 4])
    cells = pd.forward_construct(spec, dom)
    results.append(check(cells.adjacency() == [[1, 3], [0, 2], [1, 3], [0, 2]], "quadrant adjacency"))
    results.append(check(spec.classify_point(["1/2", "1/2"]) == [0], "classify interior point"))
    results.append(check(pd.detect(cells, dom).verdict == "IsPowerDiagram", "forward construct detected"))

    for name, want in [
        ("fig1-L.json", "IsPowerDiagram"),
        ("fig1-M.json", "IsPowerDiagram"),
        ("fig1-R.json", "NotPowerDiagram"),
        ("fig2-left.json", "NotPowerDiagram"),
        ("fig2-right.json", "IsPowerDiagram"),
    ]:
        cx = pd.CellComplex.from_json((FIXTURES / name).read_text())
        results.append(check(pd.detect(cx).verdict == want, f"{name} -> {want}"))

    doc = json.loads(cells.to_json())
    results.append(check(doc["schema_version"] == "1", "complex round trips to JSON"))

    square = [([-1, 0], 0), ([0, -1], 0), ([1, 0], 1), ([0, 1], 1)]
    results.append(check(pd.polyhedron_dimension(2, square) == 2, "square dimension"))
    results.append(check(pd.polyhedron_dimension(2, square, [([1, 1], 3)]) == -1, "empty slice"))

    pt = pd.find_feasible(2, equalities=[([1, 1], 1)], lower_bounds={0: 0, 1: 0})
    results.append(check(pt is not None and sum(pt) == 1, "find_feasible point"))
    results.append(check(pd.find_feasible(1, inequalities=[([1], -1)], lower_bounds={0: 0}) is None, "infeasible system"))
    results.append(check(pd.power_value([0, 0], [1, 1], Fraction(1, 2)) == Fraction(3, 2), "power value"))

    try:
        pd.PowerDiagramSpec([[0.5]], [0])
        results.append(check(False, "floats rejected"))
    except ValueError:
        results.append(check(True, "floats rejected"))

    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main())
