"""Finite T0-spaces as partial orders.

A finite T0-space is the same thing as a finite poset: ``x <= y`` iff the
minimal open set of ``x`` is contained in that of ``y``. Elements are
identified by their position ``0..n-1``; labels are only for presentation.
Order relations are stored as bitmasks, ``down[x]`` holding bit ``z`` iff
``z <= x``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    CodomainTooLarge,
    CycleDetected,
    DomainMismatch,
    DuplicateLabel,
    EmptySpace,
    UnknownLabel,
)

EXHAUSTIVE_BOUND = 20


def bits(mask: int):
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(elements: Iterable[int]) -> int:
    mask = 0
    for x in elements:
        mask |= 1 << x
    return mask


def _covers_from_down(down: Sequence[int], up: Sequence[int]) -> frozenset:
    covers = set()
    for a, da in enumerate(down):
        strict_below = da & ~(1 << a)
        for b in bits(strict_below):
            # nothing strictly between b and a
            if (strict_below & up[b]) & ~(1 << b) == 0:
                covers.add((a, b))
    return frozenset(covers)


class FinitePoset:
    """Immutable finite partial order with its Hasse diagram.

    ``covers`` holds pairs ``(a, b)`` meaning *a covers b*.
    """

    __slots__ = ("labels", "down", "up", "covers", "_index", "_hash")

    def __init__(self, labels, down, up=None, covers=None):
        labels = tuple(labels)
        down = tuple(down)
        n = len(labels)
        if up is None:
            up_list = [0] * n
            for x, d in enumerate(down):
                for z in bits(d):
                    up_list[z] |= 1 << x
            up = up_list
        up = tuple(up)
        if covers is None:
            covers = _covers_from_down(down, up)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "down", down)
        object.__setattr__(self, "up", up)
        object.__setattr__(self, "covers", frozenset(covers))
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(labels)})
        object.__setattr__(self, "_hash", hash((labels, down)))

    def __setattr__(self, name, value):
        raise AttributeError("FinitePoset is immutable")

    def __reduce__(self):
        return (FinitePoset, (self.labels, self.down, self.up, self.covers))

    def __eq__(self, other):
        if not isinstance(other, FinitePoset):
            return NotImplemented
        return self.labels == other.labels and self.down == other.down

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.labels)

    def __repr__(self):
        rels = ", ".join(
            f"{self.labels[b]}<{self.labels[a]}" for a, b in sorted(self.covers)
        )
        return f"FinitePoset([{', '.join(self.labels)}]; {rels})"

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def elements(self) -> range:
        return range(len(self.labels))

    @property
    def full_mask(self) -> int:
        return (1 << len(self.labels)) - 1

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabel(f"unknown element {label!r}") from None

    def label_set(self, elements: Iterable[int]) -> set:
        return {self.labels[x] for x in elements}

    def leq(self, x: int, y: int) -> bool:
        return (self.down[y] >> x) & 1 == 1

    def lt(self, x: int, y: int) -> bool:
        return x != y and self.leq(x, y)

    def leq_table(self) -> list:
        return [[self.leq(x, y) for y in self.elements] for x in self.elements]

    def relation_count(self) -> int:
        """Number of strict pairs ``x < y``."""
        return sum(bin(d).count("1") - 1 for d in self.down)

    def strict_pairs(self):
        for y, d in enumerate(self.down):
            for x in bits(d & ~(1 << y)):
                yield (x, y)

    def sorted_covers(self) -> list:
        return sorted(self.covers)

    def subposet(self, elements: Iterable[int] | int) -> "FinitePoset":
        """Induced subposet; elements keep their relative order."""
        mask = elements if isinstance(elements, int) else to_mask(elements)
        keep = list(bits(mask))
        pos = {x: i for i, x in enumerate(keep)}
        down = [to_mask(pos[z] for z in bits(self.down[x] & mask)) for x in keep]
        return FinitePoset([self.labels[x] for x in keep], down)


def build_poset(labels: Sequence[str], relations: Iterable[tuple]) -> FinitePoset:
    """Build a poset from labels and ``(lower, upper)`` label pairs.

    The order is the reflexive-transitive closure of ``relations``.
    """
    labels = list(labels)
    index = {}
    for i, lab in enumerate(labels):
        if lab in index:
            raise DuplicateLabel(f"duplicate element {lab!r}")
        index[lab] = i
    n = len(labels)
    down = [1 << x for x in range(n)]
    for lower, upper in relations:
        for lab in (lower, upper):
            if lab not in index:
                raise UnknownLabel(f"relation references unknown element {lab!r}")
        down[index[upper]] |= 1 << index[lower]
    for k in range(n):
        bk = 1 << k
        dk = down[k]
        for x in range(n):
            if down[x] & bk:
                down[x] |= dk
    for x in range(n):
        for y in bits(down[x] & ~(1 << x)):
            if (down[y] >> x) & 1:
                raise CycleDetected(
                    f"{labels[x]} <= {labels[y]} <= {labels[x]}: not a partial order"
                )
    return FinitePoset(labels, down)


def chain_poset(n: int, labels=None) -> FinitePoset:
    labels = list(labels) if labels is not None else [str(i) for i in range(n)]
    return FinitePoset(labels, [(1 << (i + 1)) - 1 for i in range(n)])


def antichain_poset(n: int, labels=None) -> FinitePoset:
    labels = list(labels) if labels is not None else [str(i) for i in range(n)]
    return FinitePoset(labels, [1 << i for i in range(n)])


# -- order-topological primitives -------------------------------------------


def min_open(X: FinitePoset, x: int) -> frozenset:
    """U_x = {z : z <= x}."""
    return frozenset(bits(X.down[x]))


def closure_of(X: FinitePoset, x: int) -> frozenset:
    """F_x = {z : x <= z}."""
    return frozenset(bits(X.up[x]))


def punctured_down(X: FinitePoset, x: int) -> frozenset:
    return frozenset(bits(X.down[x] & ~(1 << x)))


def punctured_up(X: FinitePoset, x: int) -> frozenset:
    return frozenset(bits(X.up[x] & ~(1 << x)))


def opposite(X: FinitePoset) -> FinitePoset:
    """The space whose open sets are the closed sets of X."""
    return FinitePoset(X.labels, X.up, X.down, {(b, a) for a, b in X.covers})


def is_connected_mask(X: FinitePoset, mask: int) -> bool:
    if mask == 0:
        return True
    start = mask & -mask
    seen = start
    frontier = start
    while frontier:
        nxt = 0
        for x in bits(frontier):
            nxt |= (X.down[x] | X.up[x]) & mask
        frontier = nxt & ~seen
        seen |= frontier
    return seen == mask


def component_masks(X: FinitePoset, mask: int) -> list:
    comps = []
    rest = mask
    while rest:
        start = rest & -rest
        seen = start
        frontier = start
        while frontier:
            nxt = 0
            for x in bits(frontier):
                nxt |= (X.down[x] | X.up[x]) & mask
            frontier = nxt & ~seen
            seen |= frontier
        comps.append(seen)
        rest &= ~seen
    return comps


def is_connected(X: FinitePoset, S: Iterable[int] | None = None) -> bool:
    """Connectivity of the subspace S (the whole space by default).

    A subspace of a finite space is connected iff its comparability graph
    is; the empty set counts as connected.
    """
    mask = X.full_mask if S is None else to_mask(S)
    return is_connected_mask(X, mask)


def connected_components(X: FinitePoset, S: Iterable[int] | None = None) -> list:
    mask = X.full_mask if S is None else to_mask(S)
    return [frozenset(bits(c)) for c in component_masks(X, mask)]


# -- point maps ---------------------------------------------------------------


@dataclass(frozen=True)
class PointMap:
    """A total map between the element sets of two posets."""

    dom: FinitePoset
    cod: FinitePoset
    img: tuple

    def __post_init__(self):
        img = tuple(self.img)
        object.__setattr__(self, "img", img)
        if len(img) != len(self.dom):
            raise DomainMismatch(
                f"map has {len(img)} images for a domain of size {len(self.dom)}"
            )
        m = len(self.cod)
        for y in img:
            if not (isinstance(y, int) and 0 <= y < m):
                raise DomainMismatch(f"image {y!r} is not an element of the codomain")

    @classmethod
    def from_labels(cls, dom: FinitePoset, cod: FinitePoset, mapping) -> "PointMap":
        mapping = dict(mapping)
        for lab in mapping:
            if lab not in dom._index:
                raise DomainMismatch(f"{lab!r} is not an element of the domain")
        img = []
        for lab in dom.labels:
            if lab not in mapping:
                raise DomainMismatch(f"map is not defined on {lab!r}")
            target = mapping[lab]
            if target not in cod._index:
                raise DomainMismatch(f"{target!r} is not an element of the codomain")
            img.append(cod.index(target))
        return cls(dom, cod, tuple(img))

    @classmethod
    def identity(cls, X: FinitePoset) -> "PointMap":
        return cls(X, X, tuple(range(len(X))))

    def __call__(self, x: int) -> int:
        return self.img[x]

    def as_labels(self) -> dict:
        return {self.dom.labels[x]: self.cod.labels[y] for x, y in enumerate(self.img)}

    def fiber_masks(self) -> list:
        masks = [0] * len(self.cod)
        for x, y in enumerate(self.img):
            masks[y] |= 1 << x
        return masks

    def fibers(self) -> dict:
        return {y: frozenset(bits(m)) for y, m in enumerate(self.fiber_masks())}

    def preimage_mask(self, mask: int) -> int:
        fm = self.fiber_masks()
        out = 0
        for y in bits(mask):
            out |= fm[y]
        return out

    def is_surjective(self) -> bool:
        return len(set(self.img)) == len(self.cod)

    def is_injective(self) -> bool:
        return len(set(self.img)) == len(self.img)

    def is_bijective(self) -> bool:
        return len(self.dom) == len(self.cod) and self.is_injective()

    def inverse(self) -> "PointMap":
        if not self.is_bijective():
            raise DomainMismatch("only bijections have inverses")
        inv = [0] * len(self.img)
        for x, y in enumerate(self.img):
            inv[y] = x
        return PointMap(self.cod, self.dom, tuple(inv))


def compose(g: PointMap, f: PointMap) -> PointMap:
    """g after f."""
    if f.cod != g.dom:
        raise DomainMismatch("codomain of f is not the domain of g")
    return PointMap(f.dom, g.cod, tuple(g.img[y] for y in f.img))


def is_continuous(f: PointMap) -> bool:
    """Continuity between finite spaces is order preservation."""
    X, Y = f.dom, f.cod
    for x in X.elements:
        fx_down = Y.down[f.img[x]]
        for z in bits(X.down[x]):
            if not (fx_down >> f.img[z]) & 1:
                return False
    return True


def order_violation(f: PointMap):
    """First pair ``(x, y)`` with x <= y but f(x) not <= f(y), or None."""
    X, Y = f.dom, f.cod
    for x, y in sorted(X.strict_pairs()):
        if not Y.leq(f.img[x], f.img[y]):
            return (x, y)
    return None


def is_monotone_exhaustive(f: PointMap, bound: int = EXHAUSTIVE_BOUND) -> bool:
    """Preimage of every connected subset of the codomain is connected.

    Scans all subsets of the codomain, so it refuses codomains larger than
    ``bound``.
    """
    return monotonicity_witness(f, bound) is None


def monotonicity_witness(f: PointMap, bound: int = EXHAUSTIVE_BOUND):
    """A connected codomain subset with disconnected preimage, or None."""
    Y = f.cod
    if len(Y) > bound:
        raise CodomainTooLarge(
            f"exhaustive check needs 2^{len(Y)} subsets (bound {bound})"
        )
    fm = f.fiber_masks()
    m = len(Y)
    for S in range(1, 1 << m):
        if not is_connected_mask(Y, S):
            continue
        pre = 0
        for y in bits(S):
            pre |= fm[y]
        if not is_connected_mask(f.dom, pre):
            return frozenset(bits(S))
    return None


def unrealized_pair(f: PointMap):
    """First strict pair y < y' of the codomain with no x < x' over it, or None.

    For such a pair the connected set {y, y'} has the disjoint union of two
    fibers, with no comparable pair across them, as preimage.
    """
    X, Y = f.dom, f.cod
    fm = f.fiber_masks()
    for y, y2 in sorted(Y.strict_pairs()):
        below = 0
        for x in bits(fm[y2]):
            below |= X.down[x]
        if not below & fm[y]:
            return (y, y2)
    return None


def is_monotone(f: PointMap, bound: int = EXHAUSTIVE_BOUND) -> bool:
    """Kuratowski monotonicity.

    Surjective continuous maps take the fast path: the map is monotone iff
    the greedy edge contraction decomposition succeeds (every fiber is
    connected) and every strict pair y < y' of the codomain is realized by
    some x < x' lying over it. Given connected fibers, a connected subset's
    preimage is the union of its fibers glued along those realized pairs.
    Contraction success alone is not enough: contracting a Hasse edge can
    create relations whose two-point preimages are disconnected. Other maps
    use the exhaustive subset scan.
    """
    if f.is_surjective() and is_continuous(f):
        from .contraction import decompose
        from .errors import NotMonotone

        try:
            decompose(f)
        except NotMonotone:
            return False
        return unrealized_pair(f) is None
    return is_monotone_exhaustive(f, bound)


def is_homeomorphism(f: PointMap) -> bool:
    if not f.is_bijective():
        return False
    return is_continuous(f) and is_continuous(f.inverse())


# -- beat points and cores ----------------------------------------------------


def up_beat_target(X: FinitePoset, x: int):
    """y with F^_x = F_y, or None."""
    rest = X.up[x] & ~(1 << x)
    for y in bits(rest):
        if X.up[y] == rest:
            return y
    return None


def down_beat_target(X: FinitePoset, x: int):
    """y with U^_x = U_y, or None."""
    rest = X.down[x] & ~(1 << x)
    for y in bits(rest):
        if X.down[y] == rest:
            return y
    return None


def is_up_beat(X: FinitePoset, x: int) -> bool:
    return up_beat_target(X, x) is not None


def is_down_beat(X: FinitePoset, x: int) -> bool:
    return down_beat_target(X, x) is not None


def beat_points(X: FinitePoset) -> frozenset:
    return frozenset(x for x in X.elements if is_up_beat(X, x) or is_down_beat(X, x))


def core(X: FinitePoset):
    """Delete beat points (lowest index first) until none remain.

    Returns the core and the labels removed, in removal order.
    """
    if len(X) == 0:
        raise EmptySpace("the empty space has no core")
    removed = []
    current = X
    while True:
        beats = beat_points(current)
        if not beats:
            return current, removed
        x = min(beats)
        removed.append(current.labels[x])
        current = current.subposet(current.full_mask & ~(1 << x))


def is_contractible(X: FinitePoset) -> bool:
    return len(core(X)[0]) == 1


def is_minimal(X: FinitePoset) -> bool:
    return not beat_points(X)


def is_order_isomorphic(X: FinitePoset, Y: FinitePoset) -> bool:
    """Order isomorphism, ignoring labels (Hasse diagram isomorphism)."""
    if len(X) != len(Y) or len(X.covers) != len(Y.covers):
        return False
    import networkx as nx

    gx, gy = nx.DiGraph(), nx.DiGraph()
    gx.add_nodes_from(X.elements)
    gy.add_nodes_from(Y.elements)
    gx.add_edges_from(X.covers)
    gy.add_edges_from(Y.covers)
    return nx.is_isomorphic(gx, gy)
