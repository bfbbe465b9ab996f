"""q-Laguerre polynomials, their moments and the orthogonality functional."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from . import _kernels, config
from .errors import TableTooShortError
from .matchings import matchings_array, permutations_array
from .polyring import ONE, X, Y, ZERO, Poly3, q_integer


@dataclass(frozen=True)
class MotzkinWeights:
    """Level-step weight ``b(h)`` at height h and down-step weight ``lam(h)`` from height h."""

    def b(self, h: int) -> Poly3:
        return Y * q_integer(h + 1) + q_integer(h)

    def lam(self, h: int) -> Poly3:
        qh = q_integer(h)
        return Y * qh * qh


WEIGHTS = MotzkinWeights()


def laguerre_recurrence(n: int) -> Poly3:
    config.check_limit(n, config.MOMENT_LIMIT)
    return _recurrence(n)


@lru_cache(maxsize=None)
def _recurrence(n: int) -> Poly3:
    if n == 0:
        return ONE
    prev, cur = ONE, X - Y
    for k in range(1, n):
        # L_{k+1} = (x - b(k)) L_k - lam(k) L_{k-1}
        prev, cur = cur, (X - WEIGHTS.b(k)) * cur - WEIGHTS.lam(k) * prev
    return cur


def laguerre_combinatorial(n: int) -> Poly3:
    """Signed sum over all matchings of degree n."""
    config.check_limit(n, config.LAGUERRE_COMBINATORIAL_LIMIT)
    targets = matchings_array(n, limit=n)
    e, bwex, bwt, cross = _kernels.matching_stats(targets)
    sign = 1 - 2 * (e % 2)
    return Poly3.from_exponents(sign, n - e, bwex, bwt + cross)


def moment_permutation(n: int) -> Poly3:
    """``sum over S_n of y^wex q^CR``."""
    config.check_limit(n, config.MOMENT_LIMIT)
    wex, cr, _, _ = _kernels.perm_stats(permutations_array(n, limit=n))
    return Poly3.from_exponents(1, 0, wex, cr)


def moment_matching(n: int) -> Poly3:
    """``sum over PM_n of y^wex q^(wt - cross)``."""
    config.check_limit(n, config.MOMENT_LIMIT)
    wex, _, wt, cross = _kernels.perm_stats(permutations_array(n, limit=n))
    return Poly3.from_exponents(1, 0, wex, wt - cross)


def moment_motzkin(n: int) -> Poly3:
    """Weighted Motzkin paths of length n, by a transfer over heights.

    Up steps weigh 1, a level step at height h weighs ``b(h)`` and a down step
    leaving height h weighs ``lam(h)``.
    """
    config.check_limit(n, config.MOMENT_LIMIT)
    # layer[h] = total weight of prefixes ending at height h
    layer = [ONE]
    for step in range(n):
        top = min(step + 1, n - step - 1)
        nxt = [ZERO] * (top + 1)
        for h, w in enumerate(layer):
            if w.is_zero():
                continue
            if h <= top:
                nxt[h] = nxt[h] + w * WEIGHTS.b(h)
            if h + 1 <= top:
                nxt[h + 1] = nxt[h + 1] + w
            if h >= 1 and h - 1 <= top:
                nxt[h - 1] = nxt[h - 1] + w * WEIGHTS.lam(h)
        layer = nxt
    return layer[0]


MOMENT_ROUTES = {
    "permutation": moment_permutation,
    "matching": moment_matching,
    "motzkin": moment_motzkin,
}

LAGUERRE_ROUTES = {
    "recurrence": laguerre_recurrence,
    "combinatorial": laguerre_combinatorial,
}


@dataclass(frozen=True)
class MomentTable:
    mu: tuple[Poly3, ...]

    def __post_init__(self):
        if not self.mu or self.mu[0] != ONE:
            raise ValueError("moment table must start with mu_0 = 1")
        if any(m.degree("x") > 0 for m in self.mu):
            raise ValueError("moments cannot involve x")

    @classmethod
    def build(cls, n_max: int, route: str = "motzkin") -> "MomentTable":
        f = MOMENT_ROUTES[route]
        return cls(tuple(f(k) for k in range(n_max + 1)))

    @property
    def n_max(self) -> int:
        return len(self.mu) - 1


@lru_cache(maxsize=None)
def _motzkin_table(n_max: int) -> MomentTable:
    return MomentTable.build(n_max, "motzkin")


def moment_table(n_max: int) -> MomentTable:
    return _motzkin_table(n_max)


def apply_functional(p: Poly3, table: MomentTable | None = None) -> Poly3:
    """Replace each ``x^k`` by the k-th moment."""
    dx = p.degree("x")
    if table is None:
        table = moment_table(max(dx, 0))
    if dx > table.n_max:
        raise TableTooShortError(f"need moments up to {dx}, table stops at {table.n_max}")
    acc = ZERO
    for mono, c in p.items():
        rest = Poly3.monomial(y=mono.y_deg, q=mono.q_deg, coeff=c)
        acc = acc + rest * table.mu[mono.x_deg]
    return acc


def linearize_functional(parts: Sequence[int]) -> Poly3:
    """Functional of the product of ``L_{n_i}``; the empty product gives 1."""
    parts = tuple(parts)
    if any(p < 0 for p in parts):
        raise ValueError(f"parts must be nonnegative: {parts}")
    config.check_limit(sum(parts), config.MOMENT_LIMIT, what="N")
    prod = ONE
    for k in parts:
        prod = prod * _recurrence(k)
    return apply_functional(prod, moment_table(sum(parts)))
