"""Named verification suites behind ``qlag verify``."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from . import config
from .involution import compositions, verify_all
from .laguerre import (
    laguerre_combinatorial,
    laguerre_recurrence,
    linearize_functional,
    moment_matching,
    moment_motzkin,
    moment_permutation,
)
from .marked import Composition, derangement_gf, signed_sum
from .matchings import cr, crossings, enumerate_perfect_matchings, ov, wt


@dataclass
class VerifyReport:
    suite: str
    max_n: int
    passed: bool = True
    counterexample: dict | None = None
    wall_time: float = 0.0
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.passed and self.counterexample is None:
            raise ValueError("a failed report must carry a counterexample")

    def to_json_obj(self) -> dict:
        return {
            "suite": self.suite,
            "range": {"max_n": self.max_n},
            "passed": self.passed,
            "counterexample": self.counterexample,
            "wall_time": round(self.wall_time, 3),
            "details": self.details,
        }

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.suite} (N <= {self.max_n}) in {self.wall_time:.2f}s"


def _lemma_ov(max_n: int) -> tuple[dict | None, dict]:
    checked = 0
    for n in range(max_n + 1):
        for p in enumerate_perfect_matchings(n, limit=max_n):
            checked += 1
            o, w, c, r = ov(p), wt(p), crossings(p), cr(p)
            if o != w - c or o != r:
                return {"perm": list(p.perm), "ov": o, "wt": w, "cross": c, "CR": r}, {}
    return None, {"permutations_checked": checked}


def _laguerre_eq(max_n: int) -> tuple[dict | None, dict]:
    for n in range(max_n + 1):
        a, b = laguerre_recurrence(n), laguerre_combinatorial(n)
        if a != b:
            return {"n": n, "recurrence": a.to_text(), "combinatorial": b.to_text()}, {}
    return None, {"degrees_checked": max_n + 1}


def _moments_eq(max_n: int) -> tuple[dict | None, dict]:
    for n in range(max_n + 1):
        vals = {
            "permutation": moment_permutation(n),
            "matching": moment_matching(n),
            "motzkin": moment_motzkin(n),
        }
        if len(set(vals.values())) != 1:
            return {"n": n, **{k: v.to_text() for k, v in vals.items()}}, {}
    return None, {"degrees_checked": max_n + 1}


def _involution(max_n: int, backend: str | None = None) -> tuple[dict | None, dict]:
    reports = verify_all(max_n, backend)
    details = {
        "compositions": len(reports),
        "structures_checked": sum(r.structures_checked for r in reports),
        "orbits": sum(r.orbits for r in reports),
        "fixed_points": sum(r.fixed_points for r in reports),
    }
    for r in reports:
        if not r.passed:
            return r.to_json_obj(), details
    return None, details


def _linearization(max_n: int) -> tuple[dict | None, dict]:
    count = 0
    for n in range(1, max_n + 1):
        for parts in compositions(n):
            c = Composition(parts)
            count += 1
            vals = {
                "functional": linearize_functional(parts),
                "signed-sum": signed_sum(c),
                "derangement": derangement_gf(c),
            }
            if len(set(vals.values())) != 1:
                return {"composition": list(parts), **{k: v.to_text() for k, v in vals.items()}}, {}
    return None, {"compositions_checked": count}


@dataclass(frozen=True)
class Suite:
    run: Callable[[int], tuple[dict | None, dict]]
    default_max_n: int
    limit: int


SUITES: dict[str, Suite] = {
    "lemma-ov": Suite(_lemma_ov, 7, config.MATCHING_LIMIT),
    "laguerre-eq": Suite(_laguerre_eq, 6, config.LAGUERRE_COMBINATORIAL_LIMIT),
    "moments-eq": Suite(_moments_eq, 7, config.MOMENT_LIMIT),
    "involution": Suite(_involution, 6, config.MARKED_LIMIT),
    "linearization": Suite(_linearization, 7, config.MARKED_LIMIT),
}


def run_suite(name: str, max_n: int | None = None) -> VerifyReport:
    suite = SUITES[name]
    n = suite.default_max_n if max_n is None else max_n
    config.check_limit(n, suite.limit, what="--max-n")
    start = time.perf_counter()
    counterexample, details = suite.run(n)
    return VerifyReport(
        suite=name,
        max_n=n,
        passed=counterexample is None,
        counterexample=counterexample,
        wall_time=time.perf_counter() - start,
        details=details,
    )
