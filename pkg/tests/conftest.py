import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qhcurves import CurveSpec, Polynomial, build_algebra  # noqa: E402
from qhcurves.algebra import SeriesSource  # noqa: E402


def _curve(name, branches, equations=None, variables=("x", "y")):
    param = tuple(tuple(s if isinstance(s, SeriesSource) else SeriesSource.polynomial(s)
                        for s in b) for b in branches)
    n = len(param[0])
    variables = tuple(variables[:n]) if len(variables) >= n else None
    eqs = tuple(Polynomial.parse(e, variables) for e in equations) if equations else None
    return CurveSpec(param, variables or (), eqs, name)


APPENDIX_X = SeriesSource((0, 0, 0, 0, 0, 1), (1, -1))

# name -> (spec, expected facts); facts marked None are not asserted
CORPUS = {
    "cusp": (_curve("cusp", [({2: 1}, {3: 1})], ["y^2 - x^3"]),
             dict(delta=(2,), gorenstein=True, qh=True, rho=1)),
    "node": (_curve("node", [({1: 1}, {}), ({}, {1: 1})], ["x*y"]),
             dict(delta=(1, 1), gorenstein=True, qh=True, rho=1)),
    "e6": (_curve("e6", [({3: 1}, {4: 1})], ["y^3 - x^4"]),
           dict(delta=(6,), gorenstein=True, qh=True, rho=1)),
    "space": (_curve("space", [({3: 1}, {4: 1}, {5: 1})], variables=("x", "y", "z")),
              dict(delta=(3,), gorenstein=False, qh=True, rho=None)),
    "tacnode": (_curve("tacnode", [({1: 1}, {2: 1}), ({1: 1}, {2: -1})], ["y^2 - x^4"]),
                dict(delta=(2, 2), gorenstein=True, qh=True, rho=1)),
    "cusp_and_line": (_curve("cusp_and_line", [({2: 1}, {3: 1}), ({1: 1}, {})],
                             ["y^3 - x^3*y"]),
                      dict(delta=(5, 3), gorenstein=True, qh=True, rho=1)),
    "three_lines": (_curve("three_lines", [({1: 1}, {}), ({}, {1: 1}), ({1: 1}, {1: 1})],
                           ["x*y*(x - y)"]),
                    dict(delta=(2, 2, 2), gorenstein=True, qh=True, rho=1)),
    "non_qh_branch": (_curve("non_qh_branch", [({4: 1}, {6: 1, 7: 1})]),
                      dict(delta=(16,), gorenstein=True, qh=False, rho=None)),
    "appendix": (_curve("appendix", [(APPENDIX_X, {4: 1})], ["x^4 - y*(x+y)^4"]),
                 dict(delta=(12,), gorenstein=True, qh=False, rho=3)),
    "smooth": (_curve("smooth", [({1: 1}, {2: 1})], ["y - x^2"]),
               dict(delta=(0,), gorenstein=True, qh=True, rho=0)),
}

SINGULAR = [k for k in CORPUS if k != "smooth"]
GORENSTEIN = [k for k, (_, f) in CORPUS.items() if f["gorenstein"]]


@lru_cache(maxsize=None)
def model_of(name, order=16):
    return build_algebra(CORPUS[name][0], order)


@pytest.fixture(params=list(CORPUS))
def corpus_name(request):
    return request.param


@pytest.fixture(params=SINGULAR)
def singular_name(request):
    return request.param


def random_ideal(model, rng):
    """Fractional ideal generated by 1-3 elements ``t^a (1 + c t^b)`` per branch."""
    from qhcurves.ideals import ideal_from_generators
    from qhcurves.series import MultiSeries, TruncatedSeries

    gens = []
    for _ in range(rng.randint(1, 3)):
        comps = []
        for d in model.delta:
            a = rng.randint(0, d + 2)
            coeffs = [1] + [0] * rng.randint(0, 2) + [rng.randint(-3, 3)]
            comps.append(TruncatedSeries(a, tuple(coeffs)))
        gens.append(MultiSeries(tuple(comps)))
    return ideal_from_generators(model, gens)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, ok = results[number]
        terminalreporter.write_line(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}")
