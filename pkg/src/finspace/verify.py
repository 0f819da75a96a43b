"""Mechanical checks of the exact-sequence bookkeeping on concrete inputs.

Every exact-sequence statement is checked through the rank identities it
implies together with vanishing-homology tests; no connecting maps are
built. Results go into a :class:`CheckLedger`.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field

from .chains import (
    cokernel_complex,
    image_ranks,
    kernel_complex,
    space_complex,
)
from .contraction import (
    ContractionTrace,
    beat_edge_whe,
    contract_edge,
    decompose,
    edge_subspace,
    factorize,
    random_trace,
    whe_criterion,
)
from .errors import SweepTooLarge
from .homology import (
    HomologyResult,
    homological_dimension_of,
    homology,
    space_homology,
)
from .poset import (
    FinitePoset,
    PointMap,
    antichain_poset,
    bits,
    component_masks,
    compose,
    core,
    is_connected,
    is_connected_mask,
    is_contractible,
    is_minimal,
    is_monotone,
    is_monotone_exhaustive,
    is_order_isomorphic,
)

MAX_SWEEP_N = 6


@dataclass
class Check:
    passed: bool
    counterexample: object = None
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"passed": self.passed}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.detail:
            out.update(self.detail)
        return out


class CheckLedger:
    """Named pass/fail results; each name may be recorded once."""

    def __init__(self):
        self.checks: dict = {}
        self.observations: dict = {}

    def add(self, name: str, passed: bool, counterexample=None, **detail) -> Check:
        if name in self.checks:
            raise ValueError(f"check {name!r} recorded twice")
        c = self.checks[name] = Check(bool(passed), counterexample, detail)
        return c

    def observe(self, name: str, value) -> None:
        self.observations[name] = value

    def __getitem__(self, name: str) -> Check:
        return self.checks[name]

    def __contains__(self, name: str) -> bool:
        return name in self.checks

    def __iter__(self):
        return iter(self.checks.items())

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def failures(self) -> list:
        return [name for name, c in self.checks.items() if not c.passed]

    def to_dict(self) -> dict:
        out = {"passed": self.passed, "checks": {k: c.to_dict() for k, c in self}}
        if self.observations:
            out["observations"] = self.observations
        return out


def _degrees(*results: HomologyResult) -> range:
    return range(max((h.length for h in results), default=0) + 1)


@dataclass
class BettiReport:
    edges: list
    source: HomologyResult
    target: HomologyResult
    steps: list  # homology of each single-step cokernel K_{e_i}
    cumulative: list  # homology of K_{e_1...e_i}
    residuals: list

    @property
    def passed(self) -> bool:
        return not any(self.residuals)

    def to_dict(self) -> dict:
        return {
            "source": self.source.to_dict(),
            "target": self.target.to_dict(),
            "steps": [
                {"edge": list(e), **h.to_dict()} for e, h in zip(self.edges, self.steps)
            ],
            "cumulative": [h.to_dict() for h in self.cumulative],
            "residuals": self.residuals,
            "passed": self.passed,
        }


def betti_report_for_trace(trace: ContractionTrace) -> BettiReport:
    source = space_homology(trace.start)
    target = space_homology(trace.target)
    steps = [homology(cokernel_complex(s)) for s in trace.steps]
    cumulative = [homology(cokernel_complex(trace, i)) for i in range(1, len(trace) + 1)]
    residuals = []
    for r in _degrees(source, target, *steps):
        residuals.append(source.b(r) - target.b(r) - sum(h.b(r + 1) for h in steps))
    while residuals and residuals[-1] == 0:
        residuals.pop()
    degree_count = max(source.length, target.length, 1)
    residuals += [0] * (degree_count - len(residuals))
    return BettiReport(trace.edge_labels(), source, target, steps, cumulative, residuals)


def betti_decomposition(f: PointMap) -> BettiReport:
    """b_r(X) = b_r(Y) + sum_i b_{r+1}(K_{e_i}) along the decomposition of f."""
    return betti_report_for_trace(decompose(f))


def verify_trace(trace: ContractionTrace) -> CheckLedger:
    ledger = CheckLedger()
    n = len(trace)
    spaces = trace.spaces()
    H = [space_homology(S) for S in spaces]
    HY = space_homology(trace.target)
    single = [cokernel_complex(s) for s in trace.steps]
    Ke = [homology(c) for c in single]
    cum = [cokernel_complex(trace, i) for i in range(1, n + 1)]
    Kc = [homology(c) for c in cum]
    kernels = [kernel_complex(trace, i) for i in range(1, n + 1)]

    problems = trace.problems()
    ledger.add("trace_wellformed", not problems, problems or None)

    bad = None
    for i, C in enumerate(kernels, 1):
        h = homology(C)
        if not h.is_zero():
            bad = {"prefix": i, **h.to_dict()}
            break
    ledger.add("kernel_acyclic", bad is None, bad)

    bad = None
    for i in range(1, n + 1):
        for r in _degrees(H[i - 1], H[i], Ke[i - 1]):
            if H[i - 1].b(r) != H[i].b(r) + Ke[i - 1].b(r + 1):
                bad = {"step": i, "degree": r}
                break
        if bad:
            break
    ledger.add("step_rank_identity", bad is None, bad)

    bad = [i for i, c in enumerate(single, 1) if c.dim(0) != 0]
    ledger.add("cokernel_degree0_vanishes", not bad, bad or None)

    bad = None
    for i in range(1, n):
        for r in _degrees(Kc[i - 1], Kc[i], Ke[i]):
            if Kc[i].b(r + 1) != Kc[i - 1].b(r + 1) + Ke[i].b(r + 1):
                bad = {"prefix": i + 1, "degree": r + 1}
                break
        if bad:
            break
    ledger.add("cumulative_cokernel_additivity", bad is None, bad)

    Kn = Kc[-1] if Kc else HomologyResult((), ())
    bad = [r for r in _degrees(H[0], HY, Kn) if H[0].b(r) != HY.b(r) + Kn.b(r + 1)]
    ledger.add("end_to_end_identity", not bad, bad or None)

    bad = [
        r
        for r in _degrees(H[0], HY, *Ke)
        if H[0].b(r) != HY.b(r) + sum(h.b(r + 1) for h in Ke)
    ]
    ledger.add("betti_formula", not bad, bad or None)

    hd = [homological_dimension_of(h) for h in H]
    bad = [i for i in range(1, n + 1) if hd[i] > hd[i - 1]]
    ledger.add("homological_dimension_nonincrease", not bad, bad or None, dimensions=hd)

    amb = space_complex(trace.start)
    bad = None
    for i in range(1, n + 1):
        ranks = image_ranks(trace, i)
        target = space_complex(spaces[i])
        for r in range(max(amb.top, target.top) + 1):
            img = ranks[r] if r < len(ranks) else 0
            if amb.dim(r) != kernels[i - 1].dim(r) + img:
                bad = {"prefix": i, "degree": r, "sequence": "kernel"}
            elif target.dim(r) != img + cum[i - 1].dim(r):
                bad = {"prefix": i, "degree": r, "sequence": "cokernel"}
            if bad:
                break
        if bad:
            break
    ledger.add("degreewise_exactness", bad is None, bad)

    if HY.is_point():
        bad = []
        for r in _degrees(H[0], *Ke):
            expected = (1 if r == 0 else 0) + sum(h.b(r + 1) for h in Ke)
            if H[0].b(r) != expected:
                bad.append(r)
        ledger.add("acyclic_end_formula", not bad, bad or None, applicable=True)
    else:
        ledger.add("acyclic_end_formula", True, applicable=False)

    torsion = []
    for i in range(1, n + 1):
        rows = {}
        for r in _degrees(H[i - 1], H[i], Ke[i - 1]):
            t = (H[i - 1].t(r), H[i].t(r), Ke[i - 1].t(r + 1))
            if any(t):
                rows[r] = [list(x) for x in t]
        if rows:
            torsion.append({"step": i, "torsion": rows})
    ledger.observe("torsion", torsion)
    return ledger


def factorization_report(f: PointMap) -> CheckLedger:
    """Check f = h o g with g monotone and h discrete-fibred, plus the rank witness for g_*."""
    ledger = CheckLedger()
    g_trace, Z, h = factorize(f)
    g = g_trace.contraction_map()
    ledger.add("composite_matches", compose(h, g).img == f.img)
    bad = []
    for y, fm in enumerate(h.fiber_masks()):
        if any((Z.down[z] & fm) != 1 << z for z in bits(fm)):
            bad.append(f.cod.labels[y])
    ledger.add("h_fibers_discrete", not bad, bad or None)
    ledger.add("g_monotone", is_monotone(g))
    bad = [
        f.dom.labels[next(bits(fm))]
        for fm in g.fiber_masks()
        if not is_connected_mask(f.dom, fm)
    ]
    ledger.add("g_fibers_connected", not bad, bad or None)
    problems = g_trace.problems()
    ledger.add("g_trace_wellformed", not problems, problems or None)
    report = betti_report_for_trace(g_trace)
    ledger.add(
        "g_homology_surjective",
        report.passed,
        None if report.passed else report.residuals,
        residuals=report.residuals,
    )
    ledger.observe(
        "factorization",
        {
            "Z": poset_to_dict(Z),
            "g_steps": [list(e) for e in g_trace.edge_labels()],
            "h": h.as_labels(),
        },
    )
    return ledger


def poset_to_dict(X: FinitePoset) -> dict:
    return {
        "elements": list(X.labels),
        "covers": [[X.labels[b], X.labels[a]] for a, b in sorted(X.covers)],
    }


# -- enumeration and random generation ----------------------------------------


def enumerate_posets(n: int):
    """All labeled posets on elements '0'..'n-1'.

    Element k is added to a poset on 0..k-1 by choosing its strict down-set D
    (an ideal) and strict up-set U (a filter) with every d in D below every
    u in U; each labeled poset arises exactly once.
    """
    labels = [str(i) for i in range(n)]

    def extend(down, up, k):
        if k == n:
            yield FinitePoset(labels, down, up)
            return
        full = (1 << k) - 1
        ideals = [m for m in range(full + 1) if all(down[x] & ~m == 0 for x in bits(m))]
        filters = [m for m in range(full + 1) if all(up[x] & ~m == 0 for x in bits(m))]
        bit = 1 << k
        for D in ideals:
            allowed = full
            for d in bits(D):
                allowed &= up[d] & ~(1 << d)
            for U in filters:
                if U & ~allowed:
                    continue
                nd = list(down) + [D | bit]
                nu = list(up) + [U | bit]
                for u in bits(U):
                    nd[u] |= D | bit
                for d in bits(D):
                    nu[d] |= U | bit
                yield from extend(nd, nu, k + 1)

    yield from extend([], [], 0)


def random_poset(n: int, rng: random.Random, p: float = 0.3) -> FinitePoset:
    """Random DAG by lower-triangular coin flips, then transitive closure."""
    down = []
    for i in range(n):
        d = 1 << i
        for j in range(i):
            if rng.random() < p:
                d |= down[j]
        down.append(d)
    return FinitePoset([str(i) for i in range(n)], down)


def random_connected_poset(n: int, rng: random.Random, p: float = 0.3) -> FinitePoset:
    while True:
        X = random_poset(n, rng, p)
        if is_connected(X):
            return X


# -- exhaustive sweep ---------------------------------------------------------

EDGE_CHECKS = (
    "kernel_acyclic",
    "cokernel_degree0",
    "rank_identity",
    "hdim_nonincrease",
    "beat_edge",
    "whe_criterion",
    "kappa_monotone",
    "preimage_formulas",
    "star_surjective",
    "edge_subspace_contractible",
)
POSET_CHECKS = ("core_homology", "g_minimal", "greedy_order")
ALL_CHECKS = EDGE_CHECKS + POSET_CHECKS
DEFAULT_CHECKS = (
    "kernel_acyclic",
    "cokernel_degree0",
    "rank_identity",
    "hdim_nonincrease",
    "beat_edge",
)


def resolve_checks(checks) -> tuple:
    if checks is None:
        return DEFAULT_CHECKS
    if isinstance(checks, str):
        checks = [c.strip() for c in checks.split(",") if c.strip()]
    out = []
    for c in checks:
        if c == "all":
            out.extend(ALL_CHECKS)
        elif c == "default":
            out.extend(DEFAULT_CHECKS)
        elif c in ALL_CHECKS:
            out.append(c)
        else:
            raise ValueError(f"unknown check {c!r}; choose from {', '.join(ALL_CHECKS)}")
    return tuple(dict.fromkeys(out))


def _preimage_formulas_hold(X: FinitePoset, ec) -> bool:
    a, b = ec.edge
    kappa, Xe, e_bar = ec.kappa, ec.result, ec.merged
    for x in X.elements:
        kx = kappa.img[x]
        pre = kappa.preimage_mask(Xe.down[kx])
        expect = X.down[x] | X.down[a] if Xe.leq(e_bar, kx) else X.down[x]
        if pre != expect:
            return False
        pre = kappa.preimage_mask(Xe.up[kx])
        expect = X.up[x] | X.up[b] if Xe.leq(kx, e_bar) else X.up[x]
        if pre != expect:
            return False
    return True


def _star_surjective(X: FinitePoset, edge) -> bool:
    a, b = edge
    Xe = edge_subspace(X, edge)
    sub = contract_edge(Xe, (Xe.index(X.labels[a]), Xe.index(X.labels[b])))
    return cokernel_complex(sub).is_zero()


def _edge_subspace_contractible(X: FinitePoset, edge) -> bool:
    a, b = edge
    Xe = edge_subspace(X, edge)
    sub = contract_edge(Xe, (Xe.index(X.labels[a]), Xe.index(X.labels[b])))
    return is_contractible(Xe) and is_contractible(sub.result)


def components_map(X: FinitePoset) -> PointMap:
    """The monotone surjection of X onto its discrete space of components."""
    comps = component_masks(X, X.full_mask)
    img = [0] * len(X)
    for k, c in enumerate(comps):
        for x in bits(c):
            img[x] = k
    return PointMap(X, antichain_poset(len(comps)), tuple(img))


def greedy_order_comparison(f: PointMap):
    """Compare the smallest-first and largest-first greedy decompositions of f.

    Returns None when end spaces are order isomorphic and the per-step
    cokernel Betti vectors agree as multisets, else a description.
    """
    t1 = decompose(f)
    t2 = decompose(f, choose=lambda cands: cands[-1])
    if not is_order_isomorphic(t1.end, t2.end):
        return {"reason": "end spaces differ"}
    b1 = Counter(homology(cokernel_complex(s)).betti for s in t1.steps)
    b2 = Counter(homology(cokernel_complex(s)).betti for s in t2.steps)
    if b1 != b2:
        return {
            "reason": "step Betti multisets differ",
            "smallest_first": sorted(map(list, b1.elements())),
            "largest_first": sorted(map(list, b2.elements())),
        }
    return None


def check_poset(X: FinitePoset, checks) -> dict:
    """Run the selected sweep checks on one poset and all of its Hasse edges."""
    checks = resolve_checks(checks)
    failures = []
    observations = []
    HX = space_homology(X)
    quasi_iso_edge = False
    edges = sorted(X.covers)

    def fail(name, edge=None, **info):
        rec = {"check": name, "poset": poset_to_dict(X)}
        if edge is not None:
            rec["edge"] = [X.labels[edge[0]], X.labels[edge[1]]]
        rec.update(info)
        failures.append(rec)

    for e in edges:
        ec = contract_edge(X, e)
        HXe = space_homology(ec.result)
        K = cokernel_complex(ec)
        HK = homology(K)
        quasi_iso_edge |= HK.is_zero()
        if "kernel_acyclic" in checks:
            hc = homology(kernel_complex(ec))
            if not hc.is_zero():
                fail("kernel_acyclic", e, homology=hc.to_dict())
        if "cokernel_degree0" in checks and K.dim(0) != 0:
            fail("cokernel_degree0", e)
        if "rank_identity" in checks:
            for r in _degrees(HX, HXe, HK):
                if HX.b(r) != HXe.b(r) + HK.b(r + 1):
                    fail("rank_identity", e, degree=r)
                    break
        if "hdim_nonincrease" in checks:
            if homological_dimension_of(HXe) > homological_dimension_of(HX):
                fail("hdim_nonincrease", e)
        if "beat_edge" in checks and beat_edge_whe(X, e) and not HK.is_zero():
            fail("beat_edge", e, cokernel=HK.to_dict())
        if "whe_criterion" in checks and whe_criterion(X, e).guaranteed and not HK.is_zero():
            fail("whe_criterion", e, cokernel=HK.to_dict())
        if "kappa_monotone" in checks and not is_monotone_exhaustive(ec.kappa):
            fail("kappa_monotone", e)
        if "preimage_formulas" in checks and not _preimage_formulas_hold(X, ec):
            fail("preimage_formulas", e)
        if "star_surjective" in checks and not _star_surjective(X, e):
            fail("star_surjective", e)
        if "edge_subspace_contractible" in checks and not _edge_subspace_contractible(X, e):
            fail("edge_subspace_contractible", e)

    if "core_homology" in checks:
        Xc, _ = core(X)
        if space_homology(Xc) != HX:
            fail("core_homology")
    if "g_minimal" in checks:
        # g-minimal means no single edge contraction is a quasi-isomorphism
        if not quasi_iso_edge and not is_minimal(X):
            fail("g_minimal")
    if "greedy_order" in checks:
        diff = greedy_order_comparison(components_map(X))
        if diff is not None:
            observations.append({"poset": poset_to_dict(X), **diff})
    return {"edges": len(edges), "failures": failures, "observations": observations}


def _check_batch(args):
    posets, checks = args
    return [check_poset(X, checks) for X in posets]


def sweep(
    max_n: int,
    checks=None,
    jobs: int = 1,
    min_n: int = 1,
    keep_counterexamples: int = 20,
) -> dict:
    """Run checks on every labeled poset with min_n..max_n elements."""
    if max_n > MAX_SWEEP_N:
        raise SweepTooLarge(f"max_n={max_n} exceeds the guard of {MAX_SWEEP_N}")
    checks = resolve_checks(checks)
    posets_by_n = {}
    edges = 0
    failures = 0
    counterexamples = []
    failures_by_check = Counter()
    observations = []
    pool = None
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        pool = ProcessPoolExecutor(max_workers=jobs)
    try:
        for n in range(min_n, max_n + 1):
            posets = list(enumerate_posets(n))
            posets_by_n[n] = len(posets)
            if pool is None:
                results = (check_poset(X, checks) for X in posets)
            else:
                size = max(1, len(posets) // (jobs * 8))
                batches = [(posets[k : k + size], checks) for k in range(0, len(posets), size)]
                results = (r for batch in pool.map(_check_batch, batches) for r in batch)
            for res in results:
                edges += res["edges"]
                failures += len(res["failures"])
                for rec in res["failures"]:
                    failures_by_check[rec["check"]] += 1
                    if len(counterexamples) < keep_counterexamples:
                        counterexamples.append(rec)
                observations.extend(res["observations"])
    finally:
        if pool is not None:
            pool.shutdown()
    summary = {
        "max_n": max_n,
        "checks": list(checks),
        "posets_by_n": {str(k): v for k, v in posets_by_n.items()},
        "posets": sum(posets_by_n.values()),
        "edges": edges,
        "failures": failures,
        "failures_by_check": dict(failures_by_check),
        "counterexamples": counterexamples,
    }
    if "greedy_order" in checks:
        summary["greedy_order_differences"] = len(observations)
        summary["observations"] = observations[:keep_counterexamples]
    return summary


def random_trace_suite(
    count: int = 1000, max_size: int = 10, seed: int = 0, min_size: int = 2
) -> dict:
    """verify_trace on random connected posets contracted all the way to a point."""
    rng = random.Random(seed)
    failures = []
    steps = 0
    for k in range(count):
        n = rng.randint(min_size, max_size)
        X = random_connected_poset(n, rng)
        trace = random_trace(X, rng)
        steps += len(trace)
        ledger = verify_trace(trace)
        if not ledger.passed or len(trace.end) != 1:
            failures.append(
                {"index": k, "poset": poset_to_dict(X), "failed": ledger.failures()}
            )
    return {
        "traces": count,
        "seed": seed,
        "steps": steps,
        "failures": len(failures),
        "counterexamples": failures[:20],
    }
