"""Acceptance criteria, one PASS/FAIL line each.

Tolerances are pinned as module constants. Criterion 4 asserts claims that
do not hold for arbitrary traces (the kernel of a full contraction trace can
carry homology); it is implemented as stated and fails.
"""

import time
from itertools import product

import pytest

from finspace.chains import cokernel_complex
from finspace.cli import main
from finspace.contraction import contract_edge, factorize
from finspace.homology import homology, space_homology
from finspace.matrix import IntegerMatrix, rank, smith_normal_form
from finspace.chains import ChainComplex
from finspace.poset import (
    PointMap,
    build_poset,
    is_continuous,
    is_monotone,
    is_monotone_exhaustive,
)
from finspace.verify import enumerate_posets, random_trace_suite, sweep

from oracles import count_posets_bruteforce

FAST_SECONDS = 1.0
SWEEP_SECONDS = 300.0
SWEEP_MAX_N = 5
RANDOM_TRACES = 1000
RANDOM_MAX_SIZE = 10
RANDOM_SEED = 0
RANDOM_SECONDS = 300.0
MONOTONE_MAX_N = 4


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {number}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail

    return emit


def zigzag(extra=()):
    return build_poset(["a", "b", "t", "s"], [("b", "a"), ("t", "a"), ("b", "s"), *extra])


def named_basis(ec, K, r):
    return [tuple(ec.result.labels[x] for x in s) for s in K.bases[r]] if r < len(K.bases) else []


def test_criterion_1_zigzag_example(report):
    t0 = time.perf_counter()
    X = zigzag()
    ec = contract_edge(X, (X.index("a"), X.index("b")))
    Y = ec.result
    t, m, s = Y.index("t"), Y.index("a+b"), Y.index("s")
    order_ok = len(Y) == 3 and Y.lt(t, m) and Y.lt(m, s)
    K = cokernel_complex(ec)
    bases_ok = (
        named_basis(ec, K, 0) == []
        and named_basis(ec, K, 1) == [("t", "s")]
        and named_basis(ec, K, 2) == [("t", "a+b", "s")]
    )
    X2 = zigzag([("t", "s")])
    ec2 = contract_edge(X2, (X2.index("a"), X2.index("b")))
    K2 = cokernel_complex(ec2)
    removed = ("t", "s") not in named_basis(ec2, K2, 1)
    elapsed = time.perf_counter() - t0
    ok = order_ok and bases_ok and removed and elapsed < FAST_SECONDS
    report(1, ok, f"order={order_ok} bases={bases_ok} t<s-removes={removed} {elapsed:.3f}s")


def test_criterion_2_circle_model(report):
    t0 = time.perf_counter()
    X = build_poset("abcd", [("c", "a"), ("d", "a"), ("c", "b"), ("d", "b")])
    hX = space_homology(X)
    # derived oracle: 4 vertices, 4 edges, incidence matrix rank
    inc = [[0] * 4 for _ in range(4)]
    for j, (lo, hi) in enumerate(sorted(X.strict_pairs())):
        inc[lo][j] -= 1
        inc[hi][j] += 1
    r = rank(IntegerMatrix.from_dense(inc))
    oracle = (4 - r, 4 - r)
    ec = contract_edge(X, (X.index("a"), X.index("c")))
    hY = space_homology(ec.result)
    hK = homology(cokernel_complex(ec))
    formula = hX.b(1) == hY.b(1) + hK.b(2)
    elapsed = time.perf_counter() - t0
    ok = (
        hX.betti == (1, 1) == oracle
        and hY.betti == (1,)
        and hK.betti == (0, 0, 1)
        and formula
        and elapsed < FAST_SECONDS
    )
    report(2, ok, f"b(X)={hX.betti} b(X_e)={hY.betti} b(K_e)={hK.betti} formula={formula} {elapsed:.3f}s")


@pytest.mark.slow
def test_criterion_3_exhaustive_sweep(report):
    t0 = time.perf_counter()
    oracle = {str(n): count_posets_bruteforce(n) for n in range(1, SWEEP_MAX_N + 1)}
    out = sweep(SWEEP_MAX_N)
    elapsed = time.perf_counter() - t0
    expected = {"1": 1, "2": 3, "3": 19, "4": 219, "5": 4231}
    ok = (
        out["posets_by_n"] == oracle == expected
        and out["failures"] == 0
        and elapsed <= SWEEP_SECONDS
    )
    report(
        3,
        ok,
        f"counts={out['posets_by_n']} edges={out['edges']} failures={out['failures']} "
        f"{out['failures_by_check']} {elapsed:.1f}s",
    )


@pytest.mark.slow
def test_criterion_4_random_traces(report):
    t0 = time.perf_counter()
    out = random_trace_suite(RANDOM_TRACES, RANDOM_MAX_SIZE, seed=RANDOM_SEED)
    elapsed = time.perf_counter() - t0
    failing = sorted({name for c in out["counterexamples"] for name in c["failed"]})
    ok = out["traces"] >= 1000 and out["failures"] == 0 and elapsed <= RANDOM_SECONDS
    report(4, ok, f"traces={out['traces']} failures={out['failures']} failing={failing} {elapsed:.1f}s")


@pytest.mark.slow
def test_criterion_5_monotone_oracle(report):
    t0 = time.perf_counter()
    posets = [X for n in range(1, MONOTONE_MAX_N + 1) for X in enumerate_posets(n)]
    maps = disagreements = 0
    for X in posets:
        for Y in posets:
            if len(Y) > len(X):
                continue
            for img in product(range(len(Y)), repeat=len(X)):
                if len(set(img)) != len(Y):
                    continue
                f = PointMap(X, Y, img)
                if not is_continuous(f):
                    continue
                maps += 1
                if is_monotone(f) != is_monotone_exhaustive(f):
                    disagreements += 1
    elapsed = time.perf_counter() - t0
    report(5, disagreements == 0 and maps > 0, f"maps={maps} disagreements={disagreements} {elapsed:.1f}s")


def test_criterion_6_torsion(report):
    C = ChainComplex(((0,), (0,)), (IntegerMatrix.zeros(0, 1), IntegerMatrix.from_dense([[2]])))
    h = homology(C)
    snf = smith_normal_form(IntegerMatrix.from_dense([[2, 0], [0, 3]])).factors
    # gcd/det oracle: d1 = gcd(2, 3) = 1, d1 * d2 = det = 6
    ok = h.torsion[0] == (2,) and snf == (1, 6)
    report(6, ok, f"H_0 torsion={h.torsion[0]} snf(diag(2,3))={snf}")


def test_criterion_7_factorization(report, tmp_path, capsys):
    t0 = time.perf_counter()
    X = build_poset("abcd", [("c", "a"), ("d", "a"), ("c", "b"), ("d", "b")])
    Y = build_poset(["lo", "hi"], [("lo", "hi")])
    f = PointMap.from_labels(X, Y, dict(a="hi", b="hi", c="lo", d="lo"))
    g_trace, Z, h = factorize(f)
    g_identity = len(g_trace) == 0 and Z == X
    h_is_f = h.img == f.img
    antichains = all(
        not any(Z.lt(x, z) for x in fib for z in fib) for fib in map(list, h.fibers().values())
    )
    (tmp_path / "x.txt").write_text("element a\nelement b\nelement c\nelement d\n"
                                    "rel c < a\nrel d < a\nrel c < b\nrel d < b\n")
    (tmp_path / "y.txt").write_text("element lo\nelement hi\nrel lo < hi\n")
    (tmp_path / "f.txt").write_text("map a -> hi\nmap b -> hi\nmap c -> lo\nmap d -> lo\n")
    import json

    code = main(["monotone", "--domain", str(tmp_path / "x.txt"), "--codomain",
                 str(tmp_path / "y.txt"), "--map", str(tmp_path / "f.txt"), "--json"])
    data = json.loads(capsys.readouterr().out)
    cli_ok = (
        code == 1
        and data["monotone"] is False
        and sorted(data["witness"]["fiber"]) == ["a", "b"]
    )
    elapsed = time.perf_counter() - t0
    ok = g_identity and h_is_f and antichains and cli_ok and elapsed < FAST_SECONDS
    report(7, ok, f"g=id {g_identity} h=f {h_is_f} antichain fibers {antichains} "
                  f"cli witness {data['witness'].get('fiber')} {elapsed:.3f}s")
