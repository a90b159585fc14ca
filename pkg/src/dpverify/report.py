"""Check harness: every verification as a (check id, expected, computed) record."""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from . import cache as gbcache
from .catalog import catalog_hash, entry_ids, get_entry
from .embed import cubic_system, embed, singular_locus_complete
from .family import (compare_with_reference, discriminant, fiber_analysis, parametrization_vanishes,
                     singular_fiber_locus, total_space_smoothness)
from .singular import kernel_analysis, singularities
from .tangent import EXPECTED_INCREMENT, ledger

SCHEMA = 1
FIBERS = (1, 2, -1, 0, -4)
CATALOG_HASH = "3f35da30415697f28d7e3f3da5b45b7c253154ac90a6034d72bff6306813f05c"
GOLDEN_S4PP = ("ce-df", "d^2-ae", "cd-af", "bd-e^2+f^2", "ab-de+cf")

# check id prefix -> what it verifies (mirrored in the README table)
CHECKS = {
    "catalog:count": "number of configurations",
    "catalog:hash": "stable hash of the catalog export",
    "cubic-system": "dimension of cubics through the base points is d+1",
    "embedding": "image is a surface of degree d cut out by quadrics",
    "singular-locus": "no singular points beyond the predicted ones",
    "singularities": "multiset of A-types at the singular points",
    "tjurina-sum": "sum of Tjurina numbers equals the sum of the A-indices",
    "jacobian-kernel": "hyperplanes in every Tjurina ideal have dimension d+1 minus the sum of A-indices",
    "golden-ideal": "reduced basis of the S4'' image ideal",
    "tangent-steps": "h^1 increment at each blow-up is 0, 1, 2 by point type",
    "tangent-h1": "final h^1 of the tangent sheaf equals the number of (-2)-curves",
    "family:ideal": "eliminated family ideal equals the 14 reference generators",
    "family:parametrization": "reference generators vanish on the eight cubics",
    "family:fiber": "degree, smoothness and A-types of a fiber",
    "family:locus": "parameter values with a singular fiber",
    "family:total-space": "total space of the family is nonsingular",
}


@dataclass
class CheckResult:
    id: str
    entry: str
    expected: object
    computed: object
    elapsed_ms: int = 0

    @property
    def passed(self) -> bool:
        return self.expected == self.computed

    def to_json(self) -> dict:
        return {"id": self.id, "entry": self.entry, "expected": self.expected, "computed": self.computed,
                "pass": self.passed, "elapsed_ms": self.elapsed_ms}


@dataclass
class RunReport:
    checks: list = field(default_factory=list)
    elapsed_ms: int = 0
    version: str = __version__
    catalog_hash: str = field(default_factory=catalog_hash)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"schema": SCHEMA, "version": self.version, "catalog_hash": self.catalog_hash,
                "checks": [c.to_json() for c in self.checks], "pass": self.passed,
                "elapsed_ms": self.elapsed_ms}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def check_prefix(check_id: str) -> str:
    for key in sorted(CHECKS, key=len, reverse=True):
        if check_id == key or check_id.startswith(key + ":"):
            return key
    raise KeyError(check_id)


class _Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = int((time.perf_counter() - self.start) * 1000)


def _types(lams) -> list[str]:
    return sorted(f"A{lam}" for lam in lams)


def entry_checks(entry_id: str) -> list[CheckResult]:
    """The per-configuration pipeline, run sequentially."""
    entry = get_entry(entry_id)
    d, total = entry.degree, entry.sum_lambda
    out = []

    def add(name, expected, computed, t):
        out.append(CheckResult(f"{name}:{entry_id}", entry_id, expected, computed, t.ms))

    with _Timer() as t:
        dim = cubic_system(entry).dimension
    add("cubic-system", d + 1, dim, t)
    with _Timer() as t:
        res = embed(entry)
        inv = res.invariants
    add("embedding", {"dim": 2, "degree": d, "quadric_generated": True}, inv.to_json(), t)
    if entry_id == "S4''":
        from .algebra import HomogIdeal
        with _Timer() as t:
            golden = [g.to_str() for g in HomogIdeal.parse(GOLDEN_S4PP, res.ideal.arena).groebner()]
            computed = [g.to_str() for g in res.ideal.groebner()]
        add("golden-ideal", golden, computed, t)
    with _Timer() as t:
        points = [p for p, _ in res.singular_points]
        loc = singular_locus_complete(res.ideal, points, len(res.ideal.arena) - 3)
    add("singular-locus", True, loc.complete, t)
    with _Timer() as t:
        reports = [r for r, _ in singularities(res)]
    add("singularities", _types(entry.expected_singularities), sorted(r.type for r in reports), t)
    add("tjurina-sum", total, sum(r.tjurina for r in reports), t)
    with _Timer() as t:
        kernel = kernel_analysis(res)
    add("jacobian-kernel", d + 1 - total, kernel.dim_kernel, t)
    with _Timer() as t:
        led = ledger(entry)
        h1 = led.h1
        incs = [h1[k + 1] - h1[k] for k in range(len(led.steps))]
        want = [EXPECTED_INCREMENT[s.type] for s in led.steps]
    add("tangent-steps", want, incs, t)
    add("tangent-h1", total, led.final_h1, t)
    return out


def _fiber_check(t0) -> list[CheckResult]:
    t0 = Fraction(t0)
    singular = discriminant().evaluate([t0]) == 0
    expected = {"status": "singular" if singular else "smooth", "degree": 7,
                "types": ["A1"] if singular else [], "specialization": True, "complete": True}
    with _Timer() as t:
        rep = fiber_analysis(t0)
    computed = {"status": rep.status, "degree": rep.degree, "types": sorted(r.type for r in rep.singularities),
                "specialization": rep.specialization_ok, "complete": rep.locus_complete}
    return [CheckResult(f"family:fiber:{t0}", "family", expected, computed, t.ms)]


def _family_ideal_check() -> list[CheckResult]:
    with _Timer() as t:
        fwd, back = compare_with_reference()
    out = [CheckResult("family:ideal", "family", [True, True], [fwd, back], t.ms)]
    with _Timer() as t:
        ok = parametrization_vanishes()
    out.append(CheckResult("family:parametrization", "family", True, ok, t.ms))
    return out


def _locus_check() -> list[CheckResult]:
    with _Timer() as t:
        loc = singular_fiber_locus()
    computed = {"values": [str(v) for v in loc.values], "irrational": [str(f) for f in loc.irrational],
                "conclusive": loc.conclusive}
    return [CheckResult("family:locus", "family", {"values": ["-4", "0"], "irrational": [], "conclusive": True},
                        computed, t.ms)]


def _total_space_check(budget: float) -> list[CheckResult]:
    with _Timer() as t:
        res = total_space_smoothness(True, budget)
    # a run out of budget is reported as skipped, which is not a failure
    expected = "skipped" if res.status == "skipped" else "pass"
    return [CheckResult("family:total-space", "family", expected, res.status, t.ms)]


def _catalog_checks() -> list[CheckResult]:
    return [CheckResult("catalog:count", "catalog", 22, len(entry_ids())),
            CheckResult("catalog:hash", "catalog", CATALOG_HASH, catalog_hash())]


def tasks(entries=None, family: bool = True, heavy: bool = False, budget: float = 600.0) -> list[tuple]:
    out: list[tuple] = [("catalog",)] if entries is None else []
    out += [("entry", e) for e in (entries if entries is not None else entry_ids())]
    if family:
        out += [("family-ideal",), ("family-locus",)] + [("fiber", str(t)) for t in FIBERS]
        if heavy:
            out.append(("total-space", budget))
    return out


def run_task(task: tuple) -> list[CheckResult]:
    kind = task[0]
    if kind == "catalog":
        return _catalog_checks()
    if kind == "entry":
        return entry_checks(task[1])
    if kind == "family-ideal":
        return _family_ideal_check()
    if kind == "family-locus":
        return _locus_check()
    if kind == "fiber":
        return _fiber_check(task[1])
    if kind == "total-space":
        return _total_space_check(task[1])
    raise ValueError(f"unknown task {task!r}")


def _init_worker(cache_dir):
    gbcache.activate(cache_dir)


def verify_all(jobs: int = 1, heavy: bool = False, cache_dir: str | None = None, entries=None,
               family: bool = True, budget: float = 600.0) -> RunReport:
    """Run every check; the report order does not depend on scheduling."""
    if jobs < 1:
        raise ValueError("jobs must be at least 1")
    start = time.perf_counter()
    todo = tasks(entries, family, heavy, budget)
    if jobs == 1:
        gbcache.activate(cache_dir)
        results = [run_task(t) for t in todo]
    else:
        with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(cache_dir,)) as pool:
            results = list(pool.map(run_task, todo))
    checks = [c for group in results for c in group]
    return RunReport(checks, int((time.perf_counter() - start) * 1000))
