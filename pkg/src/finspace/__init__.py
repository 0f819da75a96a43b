"""Homology of finite T0-spaces via order complexes, and monotone maps
decomposed into Hasse-edge contractions."""

from .chains import (
    ChainComplex,
    InducedChainMap,
    OrderComplex,
    chain_complex,
    cokernel_complex,
    image_membership,
    induced_map,
    kernel_complex,
    order_complex,
)
from .contraction import (
    ContractionTrace,
    EdgeContraction,
    WheVerdict,
    beat_edge_whe,
    contract_edge,
    decompose,
    edge_subspace,
    factorize,
    is_g_minimal,
    star,
    whe_criterion,
)
from .homology import (
    HomologyResult,
    homological_dimension,
    homology,
    is_acyclic,
    is_quasi_iso_contraction,
    space_homology,
)
from .matrix import IntegerMatrix, smith_normal_form
from .poset import (
    FinitePoset,
    PointMap,
    beat_points,
    build_poset,
    closure_of,
    compose,
    connected_components,
    core,
    is_connected,
    is_continuous,
    is_contractible,
    is_down_beat,
    is_homeomorphism,
    is_minimal,
    is_monotone,
    is_monotone_exhaustive,
    is_up_beat,
    min_open,
    opposite,
    punctured_down,
    punctured_up,
)
from .verify import (
    BettiReport,
    CheckLedger,
    betti_decomposition,
    factorization_report,
    sweep,
    verify_trace,
)

__version__ = "0.1.0"

__all__ = [
    "BettiReport",
    "ChainComplex",
    "CheckLedger",
    "ContractionTrace",
    "EdgeContraction",
    "FinitePoset",
    "HomologyResult",
    "InducedChainMap",
    "IntegerMatrix",
    "OrderComplex",
    "PointMap",
    "WheVerdict",
    "beat_edge_whe",
    "beat_points",
    "betti_decomposition",
    "build_poset",
    "chain_complex",
    "closure_of",
    "cokernel_complex",
    "compose",
    "connected_components",
    "contract_edge",
    "core",
    "decompose",
    "edge_subspace",
    "factorization_report",
    "factorize",
    "homological_dimension",
    "homology",
    "image_membership",
    "induced_map",
    "is_acyclic",
    "is_connected",
    "is_continuous",
    "is_contractible",
    "is_down_beat",
    "is_g_minimal",
    "is_homeomorphism",
    "is_minimal",
    "is_monotone",
    "is_monotone_exhaustive",
    "is_quasi_iso_contraction",
    "is_up_beat",
    "kernel_complex",
    "min_open",
    "opposite",
    "order_complex",
    "punctured_down",
    "punctured_up",
    "smith_normal_form",
    "space_homology",
    "star",
    "sweep",
    "verify_trace",
    "whe_criterion",
]
