"""Order complexes, simplicial chain complexes and contraction chain maps.

A simplex is a chain ``x_0 < ... < x_n`` stored as the tuple of element
indices in increasing poset order; each degree's basis is sorted
lexicographically. Contractions preserve the order, so a nondegenerate
image of an increasing tuple is increasing again and carries sign +1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .contraction import ContractionTrace, EdgeContraction
from .errors import EmptySpace, SimplexBudgetExceeded
from .matrix import IntegerMatrix, rank
from .poset import FinitePoset, PointMap, bits

SIMPLEX_BUDGET = 2_000_000


@dataclass(frozen=True)
class OrderComplex:
    space: FinitePoset
    simplices: tuple  # simplices[r] = sorted tuple of r-simplices

    @property
    def dimension(self) -> int:
        return len(self.simplices) - 1

    def count(self) -> int:
        return sum(len(s) for s in self.simplices)

    def f_vector(self) -> list:
        return [len(s) for s in self.simplices]


@dataclass(frozen=True)
class ChainComplex:
    """Free chain complex; ``boundaries[r]`` maps degree r to degree r-1.

    ``boundaries[0]`` is the zero map into the (empty) degree -1.
    """

    bases: tuple
    boundaries: tuple

    @property
    def top(self) -> int:
        return len(self.bases) - 1

    def dim(self, r: int) -> int:
        return len(self.bases[r]) if 0 <= r < len(self.bases) else 0

    def dims(self) -> list:
        return [len(b) for b in self.bases]

    def boundary(self, r: int) -> IntegerMatrix:
        if 1 <= r < len(self.boundaries):
            return self.boundaries[r]
        return IntegerMatrix.zeros(self.dim(r - 1), self.dim(r))

    def is_zero(self) -> bool:
        return all(len(b) == 0 for b in self.bases)

    def problems(self) -> list:
        out = []
        for r in range(1, len(self.bases)):
            d = self.boundary(r)
            if d.shape != (self.dim(r - 1), self.dim(r)):
                out.append(f"boundary {r} has shape {d.shape}")
        for r in range(2, len(self.bases)):
            if not (self.boundary(r - 1) @ self.boundary(r)).is_zero():
                out.append(f"boundary {r - 1} o boundary {r} is not zero")
        return out


def _trimmed(bases: list, boundaries: list) -> ChainComplex:
    while bases and not bases[-1]:
        bases.pop()
    boundaries = boundaries[: len(bases)]
    if boundaries:
        boundaries[0] = IntegerMatrix.zeros(0, len(bases[0]))
    return ChainComplex(tuple(tuple(b) for b in bases), tuple(boundaries))


def order_complex(X: FinitePoset, budget: int = SIMPLEX_BUDGET) -> OrderComplex:
    """All chains of X grouped by dimension."""
    if len(X) == 0:
        raise EmptySpace("the order complex of the empty space is empty")
    strict_up = [X.up[x] & ~(1 << x) for x in X.elements]
    by_dim: list = []
    count = 0
    stack = [((x,), strict_up[x]) for x in reversed(range(len(X)))]
    while stack:
        chain, ups = stack.pop()
        r = len(chain) - 1
        if r == len(by_dim):
            by_dim.append([])
        by_dim[r].append(chain)
        count += 1
        if count > budget:
            raise SimplexBudgetExceeded(
                f"order complex exceeds the budget of {budget} simplices"
            )
        for y in bits(ups):
            stack.append((chain + (y,), ups & strict_up[y]))
    return OrderComplex(X, tuple(tuple(sorted(s)) for s in by_dim))


def chain_complex(K: OrderComplex) -> ChainComplex:
    """Simplicial chain complex with the alternating-sum boundary."""
    index = [{s: i for i, s in enumerate(level)} for level in K.simplices]
    boundaries = [IntegerMatrix.zeros(0, len(K.simplices[0]))]
    for r in range(1, len(K.simplices)):
        faces = index[r - 1]
        cols = []
        for s in K.simplices[r]:
            col = {}
            for i in range(len(s)):
                col[faces[s[:i] + s[i + 1:]]] = -1 if i % 2 else 1
            cols.append(col)
        boundaries.append(IntegerMatrix(len(K.simplices[r - 1]), len(K.simplices[r]), cols))
    return ChainComplex(K.simplices, tuple(boundaries))


@lru_cache(maxsize=512)
def space_complex(X: FinitePoset) -> ChainComplex:
    """Chain complex of the order complex of X (cached)."""
    return chain_complex(order_complex(X))


def simplex_image(img, s: tuple):
    """Image of an increasing tuple under a point map, or None if degenerate."""
    out = tuple(img[x] for x in s)
    for k in range(1, len(out)):
        if out[k] == out[k - 1]:
            return None
    return out


@dataclass(frozen=True)
class InducedChainMap:
    source: ChainComplex
    target: ChainComplex
    matrices: tuple  # matrices[r]: source degree r -> target degree r

    def matrix(self, r: int) -> IntegerMatrix:
        if 0 <= r < len(self.matrices):
            return self.matrices[r]
        return IntegerMatrix.zeros(self.target.dim(r), self.source.dim(r))

    def commutes(self) -> bool:
        top = max(self.source.top, self.target.top)
        for r in range(1, top + 1):
            left = self.target.boundary(r) @ self.matrix(r)
            right = self.matrix(r - 1) @ self.source.boundary(r)
            if left != right:
                return False
        return True


def _as_trace(t) -> ContractionTrace:
    if isinstance(t, EdgeContraction):
        return ContractionTrace(t.source, (t,), PointMap.identity(t.result), t.result)
    return t


def induced_chain_map(f: PointMap) -> InducedChainMap:
    """Chain map of the simplicial map induced by an order-preserving map."""
    src, tgt = space_complex(f.dom), space_complex(f.cod)
    mats = []
    for r, level in enumerate(src.bases):
        tindex = {s: i for i, s in enumerate(tgt.bases[r])} if r < len(tgt.bases) else {}
        cols = []
        for s in level:
            t = simplex_image(f.img, s)
            cols.append({} if t is None else {tindex[t]: 1})
        mats.append(IntegerMatrix(tgt.dim(r), len(level), cols))
    return InducedChainMap(src, tgt, tuple(mats))


def induced_map(trace, i: int | None = None) -> InducedChainMap:
    """Chain map K(X) -> K(X_i) of the first i contractions of a trace."""
    trace = _as_trace(trace)
    return induced_chain_map(trace.contraction_map(i))


def _fiber_lists(kappa: PointMap) -> list:
    return [sorted(bits(m)) for m in kappa.fiber_masks()]


def _lifts(X: FinitePoset, fibers: list, s: tuple) -> bool:
    def extend(k, prev):
        if k == len(s):
            return True
        for x in fibers[s[k]]:
            if prev is None or (x != prev and X.leq(prev, x)):
                if extend(k + 1, x):
                    return True
        return False

    return extend(0, None)


def image_membership(s: tuple, trace, i: int | None = None) -> bool:
    """Whether simplex s of X_i is the image of a chain of X.

    Backtracks over the fibers of each vertex for an increasing lift.
    """
    trace = _as_trace(trace)
    kappa = trace.contraction_map(i)
    return _lifts(trace.start, _fiber_lists(kappa), tuple(s))


def cokernel_complex(trace, i: int | None = None) -> ChainComplex:
    """K(X_i) modulo the image of K(X), on the basis of non-lifting simplices."""
    trace = _as_trace(trace)
    kappa = trace.contraction_map(i)
    X = trace.start
    fibers = _fiber_lists(kappa)
    amb = space_complex(kappa.cod)
    keep = [
        [k for k, s in enumerate(level) if not _lifts(X, fibers, s)] for level in amb.bases
    ]
    bases = [[amb.bases[r][k] for k in keep[r]] for r in range(len(keep))]
    boundaries = [None]
    for r in range(1, len(keep)):
        boundaries.append(amb.boundary(r).select_cols(keep[r]).select_rows(keep[r - 1]))
    return _trimmed(bases, boundaries)


def kernel_complex(trace, i: int | None = None) -> ChainComplex:
    """Kernel of K(X) -> K(X_i) as a chain complex with an integer basis.

    Basis in degree r: every degenerate simplex, and ``s - rep`` for each
    simplex s sharing its image with a lexicographically smaller
    representative ``rep``. A kernel vector's coordinates in this basis are
    its entries on the non-representative simplices, so the boundary can be
    read off by restriction. Basis labels are tuples of ``(simplex, coeff)``.
    """
    trace = _as_trace(trace)
    kappa = trace.contraction_map(i)
    amb = space_complex(trace.start)
    keys = []
    vectors = []
    for r, level in enumerate(amb.bases):
        reps = {}
        kr, vr = [], []
        for k, s in enumerate(level):
            t = simplex_image(kappa.img, s)
            if t is None:
                kr.append(k)
                vr.append({k: 1})
            elif t in reps:
                kr.append(k)
                vr.append({k: 1, reps[t]: -1})
            else:
                reps[t] = k
        keys.append(kr)
        vectors.append(vr)
    bases = [
        [tuple((amb.bases[r][k], v[k]) for k in sorted(v)) for v in vectors[r]]
        for r in range(len(vectors))
    ]
    boundaries = [None]
    for r in range(1, len(vectors)):
        pos = {k: j for j, k in enumerate(keys[r - 1])}
        d = amb.boundary(r)
        cols = []
        for v in vectors[r]:
            image = d.apply(v)
            cols.append({pos[k]: c for k, c in image.items() if k in pos})
        boundaries.append(IntegerMatrix(len(keys[r - 1]), len(vectors[r]), cols))
    return _trimmed(bases, boundaries)


def image_ranks(trace, i: int | None = None) -> list:
    """Per-degree rank of the image of K(X) in K(X_i), from the chain map matrices."""
    cm = induced_map(trace, i)
    return [rank(cm.matrix(r)) for r in range(len(cm.source.bases))]
