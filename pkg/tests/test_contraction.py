import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from finspace.contraction import (
    WheVerdict,
    beat_edge_whe,
    contract_edge,
    decompose,
    edge_subspace,
    factorize,
    is_g_minimal,
    random_trace,
    star,
    trace_from_edges,
    whe_criterion,
)
from finspace.errors import NotAHasseEdge, NotContinuous, NotMonotone, NotSurjective
from finspace.poset import (
    PointMap,
    bits,
    build_poset,
    chain_poset,
    is_continuous,
    is_homeomorphism,
    is_monotone_exhaustive,
    is_order_isomorphic,
)
from finspace.verify import enumerate_posets, random_poset


def edge(X, a, b):
    return (X.index(a), X.index(b))


def labels_of(X, mask):
    return {X.labels[x] for x in bits(mask)}


def test_zigzag_contraction(zigzag):
    ec = contract_edge(zigzag, edge(zigzag, "a", "b"))
    Y = ec.result
    assert sorted(Y.labels) == ["a+b", "s", "t"]
    assert Y.labels[ec.merged] == "a+b"
    t, m, s = Y.index("t"), Y.index("a+b"), Y.index("s")
    assert Y.lt(t, m) and Y.lt(m, s) and Y.lt(t, s)
    assert ec.kappa.as_labels() == {"a": "a+b", "b": "a+b", "t": "t", "s": "s"}
    assert ec.edge_labels == ("a", "b")


def test_circle_contraction(circle):
    ec = contract_edge(circle, edge(circle, "a", "c"))
    Y = ec.result
    d, m, b = Y.index("d"), Y.index("a+c"), Y.index("b")
    assert Y.covers == {(m, d), (b, m)}
    assert len(Y) == 3


def test_quotient_order_rule():
    # [x] <= [y] iff x <= y, or x <= a and b <= y
    X = build_poset("abxy", [("b", "a"), ("x", "a"), ("b", "y")])
    ec = contract_edge(X, edge(X, "a", "b"))
    for x, y in product(X.elements, repeat=2):
        expected = X.leq(x, y) or (X.leq(x, 0) and X.leq(1, y))
        assert ec.result.leq(ec.kappa.img[x], ec.kappa.img[y]) == expected


def test_not_a_hasse_edge():
    X = chain_poset(3)
    with pytest.raises(NotAHasseEdge):
        contract_edge(X, (2, 0))
    with pytest.raises(NotAHasseEdge):
        contract_edge(X, (0, 1))


def test_edge_subspace_examples(zigzag, circle):
    assert {x for x in edge_subspace(zigzag, edge(zigzag, "a", "b")).labels} == {"a", "b"}
    assert set(edge_subspace(circle, edge(circle, "a", "c")).labels) == {"a", "c"}
    X = chain_poset(4)
    assert len(edge_subspace(X, (2, 1))) == 4


def test_star(circle):
    assert labels_of(circle, sum(1 << x for x in star(circle, circle.index("c")))) == {"a", "b", "c"}


def test_decompose_circle_to_point(circle, point):
    f = PointMap(circle, point, (0,) * 4)
    trace = decompose(f)
    assert len(trace) == 3
    assert len(trace.end) == 1
    assert trace.composite().img == f.img
    assert not trace.problems()


def test_decompose_identity(circle):
    trace = decompose(PointMap.identity(circle))
    assert len(trace) == 0
    assert is_homeomorphism(trace.final)


def test_decompose_rejects_bad_input(circle, two_chain):
    with pytest.raises(NotSurjective):
        decompose(PointMap.from_labels(circle, two_chain, dict(a="hi", b="hi", c="hi", d="hi")))
    with pytest.raises(NotContinuous):
        decompose(PointMap.from_labels(circle, two_chain, dict(a="lo", b="hi", c="hi", d="lo")))


def test_decompose_fiber_witness(circle, two_chain):
    f = PointMap.from_labels(circle, two_chain, dict(a="hi", b="hi", c="lo", d="lo"))
    with pytest.raises(NotMonotone) as info:
        decompose(f)
    w = info.value.witness
    assert w["kind"] == "fiber"
    assert w["fiber"] == ["a", "b"]
    assert w["components"] == [["a"], ["b"]]


def test_decompose_relation_witness():
    A = build_poset("xy", [])
    C = chain_poset(2)
    with pytest.raises(NotMonotone) as info:
        decompose(PointMap(A, C, (0, 1)))
    assert info.value.witness == {"kind": "relation", "pair": ["0", "1"]}


def test_trace_from_edges(circle):
    tr = trace_from_edges(circle, [("a", "c"), ("a+c", "d"), ("b", "a+c+d")])
    assert len(tr.end) == 1
    assert tr.edge_labels() == [("a", "c"), ("a+c", "d"), ("b", "a+c+d")]
    assert len(tr.prefix(1)) == 1
    assert tr.contraction_map(1).cod == tr.space(1)


def _quotient_is_codomain(f):
    """Independent check: fibers connected and f induces an order isomorphism."""
    X, Y = f.dom, f.cod
    fibers = [[x for x in X.elements if f.img[x] == y] for y in Y.elements]
    for fib in fibers:
        seen, todo = {fib[0]}, [fib[0]]
        while todo:
            x = todo.pop()
            for z in fib:
                if z not in seen and (X.leq(x, z) or X.leq(z, x)):
                    seen.add(z)
                    todo.append(z)
        if len(seen) != len(fib):
            return False
    rel = {(f.img[x], f.img[y]) for x, y in product(X.elements, repeat=2) if X.leq(x, y)}
    changed = True
    while changed:
        new = {(p, r) for p, q in rel for q2, r in rel if q == q2} - rel
        changed = bool(new)
        rel |= new
    return all(((y1, y2) in rel) == Y.leq(y1, y2) for y1, y2 in product(Y.elements, repeat=2))


def _surjective_continuous_maps(max_n):
    posets = [X for n in range(1, max_n + 1) for X in enumerate_posets(n)]
    for X in posets:
        for Y in posets:
            if len(Y) > len(X):
                continue
            for img in product(range(len(Y)), repeat=len(X)):
                if len(set(img)) == len(Y):
                    f = PointMap(X, Y, img)
                    if is_continuous(f):
                        yield f


def test_decompose_success_condition():
    count = 0
    for f in _surjective_continuous_maps(3):
        count += 1
        try:
            trace = decompose(f)
            ok = True
        except NotMonotone:
            ok = False
        assert ok == _quotient_is_codomain(f)
        if ok:
            assert trace.composite().img == f.img
    assert count > 100


def test_monotone_maps_decompose():
    for f in _surjective_continuous_maps(3):
        if is_monotone_exhaustive(f):
            decompose(f)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7), st.integers(0, 10**6))
def test_preimage_formulas(n, seed):
    X = random_poset(n, random.Random(seed))
    for a, b in sorted(X.covers):
        ec = contract_edge(X, (a, b))
        k, Y, m = ec.kappa, ec.result, ec.merged
        for x in X.elements:
            down = {z for z in X.elements if Y.leq(k.img[z], k.img[x])}
            expect = set(bits(X.down[x]))
            if Y.leq(m, k.img[x]):
                expect |= set(bits(X.down[a]))
            assert down == expect
            up = {z for z in X.elements if Y.leq(k.img[x], k.img[z])}
            expect = set(bits(X.up[x]))
            if Y.leq(k.img[x], m):
                expect |= set(bits(X.up[b]))
            assert up == expect


def test_whe_criterion(zigzag, circle):
    assert whe_criterion(zigzag, edge(zigzag, "a", "b")) is WheVerdict.GUARANTEED_BY_OPEN_SETS
    assert whe_criterion(circle, edge(circle, "a", "c")) is WheVerdict.NOT_GUARANTEED
    assert not WheVerdict.NOT_GUARANTEED.guaranteed


def test_beat_edge_whe(circle):
    X = chain_poset(3)
    assert beat_edge_whe(X, (1, 0))
    assert not beat_edge_whe(circle, edge(circle, "a", "c"))


def test_factorize_non_monotone(circle, two_chain):
    f = PointMap.from_labels(circle, two_chain, dict(a="hi", b="hi", c="lo", d="lo"))
    g_trace, Z, h = factorize(f)
    assert len(g_trace) == 0
    assert Z == circle
    assert h.img == f.img


def test_factorize_disconnected_to_point(point):
    A = build_poset(["x", "y", "z"], [("x", "y")])
    f = PointMap(A, point, (0, 0, 0))
    g_trace, Z, h = factorize(f)
    assert len(g_trace) == 1
    assert len(Z) == 2 and not Z.covers
    assert h.img == (0, 0)


def test_factorize_monotone_is_all_g(circle, point):
    f = PointMap(circle, point, (0,) * 4)
    g_trace, Z, h = factorize(f)
    assert len(g_trace) == 3 and len(Z) == 1


def test_g_minimal(circle, zigzag):
    assert is_g_minimal(circle)
    assert not is_g_minimal(chain_poset(2))
    assert not is_g_minimal(zigzag)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 8), st.integers(0, 10**6))
def test_random_trace_reaches_component_count(n, seed):
    rng = random.Random(seed)
    X = random_poset(n, rng)
    tr = random_trace(X, rng)
    assert not tr.end.covers
    assert not tr.problems()


def test_contraction_result_isomorphism_invariant(circle):
    other = build_poset("wxyz", [("w", "y"), ("w", "z"), ("x", "y"), ("x", "z")])
    r1 = contract_edge(circle, edge(circle, "a", "c")).result
    r2 = contract_edge(other, edge(other, "y", "w")).result
    assert is_order_isomorphic(r1, r2)
