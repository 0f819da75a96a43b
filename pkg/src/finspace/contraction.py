"""Hasse-edge contractions and the decomposition of monotone maps.

An edge ``(a, b)`` always means *a covers b*. Contracting it identifies the
two endpoints; the quotient order is

    [x] <= [y]  iff  x <= y  or  (x <= a and b <= y),

which is already transitive and, because a covers b, antisymmetric.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import (
    DiscreteFiberViolation,
    NotAHasseEdge,
    NotContinuous,
    NotMonotone,
    NotSurjective,
)
from .poset import (
    FinitePoset,
    PointMap,
    bits,
    component_masks,
    compose,
    is_continuous,
    is_contractible,
    is_down_beat,
    is_homeomorphism,
    is_minimal,
    is_up_beat,
)

MERGE_MARK = "+"


@dataclass(frozen=True)
class EdgeContraction:
    source: FinitePoset
    edge: tuple
    result: FinitePoset
    kappa: PointMap
    merged: int

    @property
    def edge_labels(self) -> tuple:
        a, b = self.edge
        return (self.source.labels[a], self.source.labels[b])


def _merged_label(X: FinitePoset, a: int, b: int) -> str:
    label = X.labels[a] + MERGE_MARK + X.labels[b]
    taken = set(X.labels)
    while label in taken:
        label += "'"
    return label


def _check_edge(X: FinitePoset, edge) -> tuple:
    a, b = edge
    if (a, b) not in X.covers:
        la = X.labels[a] if 0 <= a < len(X) else a
        lb = X.labels[b] if 0 <= b < len(X) else b
        raise NotAHasseEdge(f"({la}, {lb}) is not a cover pair (a covering b)")
    return a, b


def contract_edge(X: FinitePoset, edge) -> EdgeContraction:
    a, b = _check_edge(X, edge)
    n = len(X)
    new_index = []
    j = 0
    for x in range(n):
        if x == b:
            new_index.append(None)
        else:
            new_index.append(j)
            j += 1
    new_index[b] = new_index[a]

    def image(mask):
        out = 0
        for z in bits(mask):
            out |= 1 << new_index[z]
        return out

    down_a = image(X.down[a])
    down = []
    labels = []
    for x in range(n):
        if x == b:
            continue
        d = image(X.down[x])
        if (X.down[x] >> b) & 1:
            d |= down_a
        down.append(d)
        labels.append(_merged_label(X, a, b) if x == a else X.labels[x])
    for x, d in enumerate(down):
        for y in bits(d & ~(1 << x)):
            assert not (down[y] >> x) & 1, "edge contraction broke antisymmetry"
    result = FinitePoset(labels, down)
    kappa = PointMap(X, result, tuple(new_index))
    return EdgeContraction(X, (a, b), result, kappa, new_index[a])


def edge_subspace(X: FinitePoset, edge) -> FinitePoset:
    """X(e) = {x : x <= b or a <= x}."""
    a, b = _check_edge(X, edge)
    return X.subposet(X.down[b] | X.up[a])


def star(X: FinitePoset, x: int) -> frozenset:
    return frozenset(bits(X.down[x] | X.up[x]))


@dataclass(frozen=True)
class ContractionTrace:
    """X = X_0 -> X_1 -> ... -> X_n by edge contractions, then a bijection onto the target."""

    start: FinitePoset
    steps: tuple
    final: PointMap
    target: FinitePoset
    _maps: list = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))

    def __len__(self):
        return len(self.steps)

    @property
    def end(self) -> FinitePoset:
        return self.steps[-1].result if self.steps else self.start

    def space(self, i: int) -> FinitePoset:
        """X_i; X_0 is the start."""
        return self.start if i == 0 else self.steps[i - 1].result

    def spaces(self) -> list:
        return [self.space(i) for i in range(len(self.steps) + 1)]

    def contraction_map(self, i: int | None = None) -> PointMap:
        """kappa_i o ... o kappa_1 : X -> X_i (no final bijection)."""
        if i is None:
            i = len(self.steps)
        if not self._maps:
            self._maps.append(PointMap.identity(self.start))
        while len(self._maps) <= i:
            k = len(self._maps)
            self._maps.append(compose(self.steps[k - 1].kappa, self._maps[-1]))
        return self._maps[i]

    def composite(self) -> PointMap:
        return compose(self.final, self.contraction_map())

    def prefix(self, i: int) -> "ContractionTrace":
        Xi = self.space(i)
        return ContractionTrace(self.start, self.steps[:i], PointMap.identity(Xi), Xi)

    def edge_labels(self) -> list:
        return [s.edge_labels for s in self.steps]

    def problems(self) -> list:
        """Violated trace invariants, as messages (empty when well formed)."""
        out = []
        prev = self.start
        for i, s in enumerate(self.steps, 1):
            if s.source != prev:
                out.append(f"step {i} does not start at the previous result")
            prev = s.result
        if self.final.dom != prev or self.final.cod != self.target:
            out.append("final map does not connect the end space to the target")
        elif not is_homeomorphism(self.final):
            out.append("final map is not an order isomorphism")
        return out


def _induced_images(step: EdgeContraction, values: Sequence) -> list:
    new = [None] * len(step.result)
    for x, v in enumerate(values):
        new[step.kappa.img[x]] = v
    return new


def _fiber_witness(f: PointMap, y: int) -> dict:
    X = f.dom
    mask = f.fiber_masks()[y]
    return {
        "kind": "fiber",
        "element": f.cod.labels[y],
        "fiber": sorted(X.labels[x] for x in bits(mask)),
        "components": [
            sorted(X.labels[x] for x in bits(c)) for c in component_masks(X, mask)
        ],
    }


EdgeChooser = Callable[[list], tuple]


def decompose(f: PointMap, choose: EdgeChooser | None = None) -> ContractionTrace:
    """Write a surjective monotone map as edge contractions and a homeomorphism.

    Greedy: while some Hasse edge of the current space lies inside one fiber,
    contract it (lexicographically smallest, or whatever ``choose`` picks
    from the sorted candidates). Raises NotMonotone with a witness when a
    fiber stays disconnected or the end bijection is not an order isomorphism.
    """
    if not f.is_surjective():
        raise NotSurjective("map is not surjective")
    if not is_continuous(f):
        raise NotContinuous("map is not order preserving")
    current = f.dom
    values = list(f.img)
    steps = []
    while True:
        candidates = sorted(e for e in current.covers if values[e[0]] == values[e[1]])
        if not candidates:
            break
        e = candidates[0] if choose is None else choose(candidates)
        step = contract_edge(current, e)
        values = _induced_images(step, values)
        steps.append(step)
        current = step.result
    if len(set(values)) < len(values):
        # report the disconnected fiber met first in domain order
        counts = {}
        for v in values:
            counts[v] = counts.get(v, 0) + 1
        y = next(v for v in f.img if counts[v] > 1)
        raise NotMonotone(
            f"fiber over {f.cod.labels[y]} is disconnected", _fiber_witness(f, y)
        )
    g = PointMap(current, f.cod, tuple(values))
    if not is_homeomorphism(g):
        Y = f.cod
        ginv = g.inverse()
        for y1, y2 in sorted(Y.strict_pairs()):
            if not current.leq(ginv.img[y1], ginv.img[y2]):
                raise NotMonotone(
                    f"{Y.labels[y1]} < {Y.labels[y2]} is not realized by the quotient",
                    {"kind": "relation", "pair": [Y.labels[y1], Y.labels[y2]]},
                )
        raise AssertionError("non-homeomorphic bijection without a witness")
    return ContractionTrace(f.dom, steps, g, f.cod)


def random_trace(
    X: FinitePoset, rng: random.Random, max_steps: int | None = None
) -> ContractionTrace:
    """Contract uniformly random Hasse edges until none remain (or max_steps)."""
    current = X
    steps = []
    while current.covers and (max_steps is None or len(steps) < max_steps):
        e = rng.choice(sorted(current.covers))
        step = contract_edge(current, e)
        steps.append(step)
        current = step.result
    return ContractionTrace(X, steps, PointMap.identity(current), current)


def trace_from_edges(X: FinitePoset, edges) -> ContractionTrace:
    """Trace contracting the given edges, each named by labels of the current space."""
    current = X
    steps = []
    for la, lb in edges:
        step = contract_edge(current, (current.index(la), current.index(lb)))
        steps.append(step)
        current = step.result
    return ContractionTrace(X, steps, PointMap.identity(current), current)


class WheVerdict(enum.Enum):
    GUARANTEED_BY_OPEN_SETS = "GuaranteedByOpenSets"
    GUARANTEED_BY_CLOSURES = "GuaranteedByClosures"
    NOT_GUARANTEED = "NotGuaranteed"

    @property
    def guaranteed(self) -> bool:
        return self is not WheVerdict.NOT_GUARANTEED


def whe_criterion(X: FinitePoset, edge) -> WheVerdict:
    """Sufficient condition for kappa_e to be a weak homotopy equivalence.

    NOT_GUARANTEED only means the criterion is silent.
    """
    a, b = _check_edge(X, edge)
    above_b = X.up[b] & ~(1 << b)
    if all(is_contractible(X.subposet(X.down[x] & X.down[a])) for x in bits(above_b)):
        return WheVerdict.GUARANTEED_BY_OPEN_SETS
    below_a = X.down[a] & ~(1 << a)
    if all(is_contractible(X.subposet(X.up[y] & X.up[b])) for y in bits(below_a)):
        return WheVerdict.GUARANTEED_BY_CLOSURES
    return WheVerdict.NOT_GUARANTEED


def beat_edge_whe(X: FinitePoset, edge) -> bool:
    """a is a down beat point or b is an up beat point."""
    a, b = _check_edge(X, edge)
    return is_down_beat(X, a) or is_up_beat(X, b)


def factorize(f: PointMap):
    """Split a continuous surjection as f = h o g.

    g contracts the connected components of the fibers of f (monotone,
    returned as a trace ending in the identity of Z); h: Z -> Y has discrete
    fibers. Returns ``(g_trace, Z, h)``.
    """
    if not f.is_surjective():
        raise NotSurjective("map is not surjective")
    if not is_continuous(f):
        raise NotContinuous("map is not order preserving")
    X = f.dom
    comp = [None] * len(X)
    cid = 0
    for fm in f.fiber_masks():
        for c in component_masks(X, fm):
            for x in bits(c):
                comp[x] = cid
            cid += 1
    current = X
    steps = []
    while True:
        candidates = sorted(e for e in current.covers if comp[e[0]] == comp[e[1]])
        if not candidates:
            break
        step = contract_edge(current, candidates[0])
        comp = _induced_images(step, comp)
        steps.append(step)
        current = step.result
    assert len(set(comp)) == len(comp), "a fiber component was not collapsed"
    Z = current
    g_trace = ContractionTrace(X, steps, PointMap.identity(Z), Z)
    g = g_trace.contraction_map()
    h_img = [None] * len(Z)
    for x, z in enumerate(g.img):
        h_img[z] = f.img[x]
    h = PointMap(Z, f.cod, tuple(h_img))
    for fm in h.fiber_masks():
        for z in bits(fm):
            if (Z.down[z] & fm) != 1 << z:
                raise DiscreteFiberViolation(
                    f"fiber of h over {f.cod.labels[h.img[z]]} is not an antichain"
                )
    return g_trace, Z, h


def is_g_minimal(X: FinitePoset) -> bool:
    """No single Hasse-edge contraction of X is a quasi-isomorphism.

    A single edge suffices: if a composite of contractions is a
    quasi-isomorphism its cumulative cokernel is acyclic, and the cokernel of
    the first contraction injects into it on homology.
    """
    from .homology import is_quasi_iso_contraction

    for e in sorted(X.covers):
        if is_quasi_iso_contraction(contract_edge(X, e)):
            return False
    return True


__all__ = [
    "EdgeContraction",
    "ContractionTrace",
    "WheVerdict",
    "contract_edge",
    "edge_subspace",
    "star",
    "decompose",
    "random_trace",
    "trace_from_edges",
    "whe_criterion",
    "beat_edge_whe",
    "factorize",
    "is_g_minimal",
    "is_minimal",
]
