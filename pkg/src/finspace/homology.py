"""Integral homology of chain complexes and finite spaces.

Homology is unreduced and computed from Smith normal forms of the boundary
matrices: ``b_r = dim C_r - rank d_r - rank d_{r+1}`` and the torsion of
``H_r`` is the invariant factors of ``d_{r+1}`` that exceed 1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chains import ChainComplex, cokernel_complex, space_complex
from .contraction import EdgeContraction
from .errors import EmptySpace
from .matrix import IntegerMatrix, SmithResult, rank, smith_normal_form
from .poset import FinitePoset


@dataclass(frozen=True)
class HomologyResult:
    betti: tuple
    torsion: tuple  # torsion[r]: invariant factors > 1 of H_r

    def b(self, r: int) -> int:
        return self.betti[r] if 0 <= r < len(self.betti) else 0

    def t(self, r: int) -> tuple:
        return self.torsion[r] if 0 <= r < len(self.torsion) else ()

    @property
    def length(self) -> int:
        return len(self.betti)

    def is_zero(self) -> bool:
        return not any(self.betti) and not any(self.torsion)

    def is_point(self) -> bool:
        return self.betti == (1,) and self.torsion == ((),)

    def to_dict(self) -> dict:
        return {"betti": list(self.betti), "torsion": [list(t) for t in self.torsion]}


def homology(C: ChainComplex, checked: bool = False) -> HomologyResult:
    top = C.top
    snf = [SmithResult((), 0)] + [
        smith_normal_form(C.boundary(r), checked) for r in range(1, top + 1)
    ]
    snf.append(SmithResult((), 0))
    betti, torsion = [], []
    for r in range(top + 1):
        betti.append(C.dim(r) - snf[r].rank - snf[r + 1].rank)
        torsion.append(tuple(d for d in snf[r + 1].factors if d > 1))
    while betti and not betti[-1] and not torsion[-1]:
        betti.pop()
        torsion.pop()
    return HomologyResult(tuple(betti), tuple(torsion))


_space_cache: dict = {}


def space_homology(X: FinitePoset) -> HomologyResult:
    """Homology of X, computed on its order complex."""
    if len(X) == 0:
        raise EmptySpace("homology of the empty space is not computed")
    res = _space_cache.get(X)
    if res is None:
        if len(_space_cache) > 4096:
            _space_cache.clear()
        res = _space_cache[X] = homology(space_complex(X))
    return res


def is_acyclic(C: ChainComplex) -> bool:
    """All homology groups vanish, degree 0 included."""
    return homology(C).is_zero()


def homological_dimension_of(h: HomologyResult) -> int:
    return max(h.length - 1, 0)


def homological_dimension(X: FinitePoset) -> int:
    """Largest degree with nonzero homology."""
    return homological_dimension_of(space_homology(X))


def contraction_cokernel_homology(ec: EdgeContraction) -> HomologyResult:
    return homology(cokernel_complex(ec))


def is_quasi_iso_contraction(ec: EdgeContraction) -> bool:
    """kappa_e induces isomorphisms on homology iff its cokernel is acyclic."""
    return contraction_cokernel_homology(ec).is_zero()


__all__ = [
    "HomologyResult",
    "IntegerMatrix",
    "smith_normal_form",
    "rank",
    "homology",
    "space_homology",
    "is_acyclic",
    "homological_dimension",
    "is_quasi_iso_contraction",
]
