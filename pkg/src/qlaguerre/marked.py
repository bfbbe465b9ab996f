"""Marked perfect matchings, their statistics, and block derangements.

A marked perfect matching is a permutation of ``[N]`` together with a set of
marked edges that contains every edge leaving its composition block. Its
signed weighted sum equals the linearization coefficient of the q-Laguerre
product indexed by the composition; the derangements of the composition give
the same polynomial with positive terms only.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from . import _kernels, config
from .errors import (
    InhomogeneousEdgeError,
    NegativeExponentError,
    OutOfRangeError,
)
from .matchings import (
    BlockStructure,
    Matching,
    PermutationPM,
    block_indices,
    bwex as _bwex,
    bwt as _bwt,
    crossings,
    permutations_array,
    weight_of,
    wex,
    wt,
)
from .polyring import Poly3


@dataclass(frozen=True)
class Composition:
    parts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(int(p) for p in self.parts))
        if not self.parts:
            raise ValueError("a composition needs at least one part")
        if any(p < 1 for p in self.parts):
            raise ValueError(f"parts must be positive: {self.parts}")

    @classmethod
    def parse(cls, text: str) -> "Composition":
        try:
            parts = tuple(int(tok) for tok in text.split(","))
        except ValueError:
            raise ValueError(f"not a comma-separated list of integers: {text!r}") from None
        return cls(parts)

    def __str__(self) -> str:
        return ",".join(map(str, self.parts))

    @property
    def N(self) -> int:
        return sum(self.parts)

    @cached_property
    def intervals(self) -> tuple[tuple[int, int], ...]:
        out, lo = [], 1
        for p in self.parts:
            out.append((lo, lo + p - 1))
            lo += p
        return tuple(out)

    @cached_property
    def block_of(self) -> np.ndarray:
        """0-based vertex -> 0-based block number."""
        return np.repeat(np.arange(len(self.parts)), self.parts)

    def block(self, v: int) -> int:
        """1-based block number of the 1-based vertex ``v``."""
        if not 1 <= v <= self.N:
            raise OutOfRangeError(f"vertex {v} outside 1..{self.N}")
        return int(self.block_of[v - 1]) + 1


def is_homogeneous(c: Composition, i: int, j: int) -> bool:
    return c.block(i) == c.block(j)


@dataclass(frozen=True)
class MarkedPM:
    pm: PermutationPM
    marked: frozenset[int]
    comp: Composition

    def __post_init__(self):
        object.__setattr__(self, "marked", frozenset(self.marked))
        n = self.pm.degree
        if self.comp.N != n:
            raise ValueError(f"composition {self.comp} has N={self.comp.N}, matching has degree {n}")
        if not all(1 <= i <= n for i in self.marked):
            raise ValueError(f"marked upper endpoints must lie in 1..{n}")
        forced = self.inhomogeneous_edges - self.marked
        if forced:
            raise ValueError(f"inhomogeneous edges at {sorted(forced)} must be marked")

    @classmethod
    def build(cls, parts: Sequence[int], perm: Sequence[int], marked) -> "MarkedPM":
        return cls(PermutationPM(len(perm), tuple(perm)), frozenset(marked), Composition(tuple(parts)))

    def __call__(self, i: int) -> int:
        return self.pm(i)

    @property
    def N(self) -> int:
        return self.pm.degree

    @property
    def homogeneous_edges(self) -> frozenset[int]:
        return frozenset(i for i, j in self.pm.edges if is_homogeneous(self.comp, i, j))

    @property
    def inhomogeneous_edges(self) -> frozenset[int]:
        return frozenset(range(1, self.N + 1)) - self.homogeneous_edges

    def is_marked(self, i: int) -> bool:
        return i in self.marked

    def toggle(self, i: int) -> "MarkedPM":
        if i not in self.homogeneous_edges:
            raise InhomogeneousEdgeError(f"edge e_{i} is inhomogeneous and must stay marked")
        return MarkedPM(self.pm, self.marked ^ {i}, self.comp)

    def to_json_obj(self) -> dict:
        return {
            "composition": list(self.comp.parts),
            "edges": [list(e) for e in self.pm.edges],
            "marked": sorted(self.marked),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> "MarkedPM":
        comp = Composition(tuple(obj["composition"]))
        m = Matching.from_edges(comp.N, [tuple(e) for e in obj["edges"]])
        if not m.is_perfect():
            raise ValueError("a marked perfect matching needs an edge at every upper vertex")
        return cls(PermutationPM(comp.N, m.target), frozenset(obj["marked"]), comp)

    @classmethod
    def from_json(cls, text: str) -> "MarkedPM":
        return cls.from_json_obj(json.loads(text))


# -- enumeration --------------------------------------------------------------


def _check(c: Composition) -> None:
    config.check_limit(c.N, config.MARKED_LIMIT, what="N")


def homogeneous_mask(c: Composition, perms: np.ndarray) -> np.ndarray:
    return c.block_of[perms] == c.block_of[None, :]


def marked_arrays(c: Composition) -> tuple[np.ndarray, np.ndarray]:
    """Every marked perfect matching of ``c`` as ``(perms, marks)`` rows.

    Rows follow :func:`enumerate_marked`: permutations lexicographically, then
    for each one the subsets of homogeneous edges by binary counter, bit k
    marking the k-th homogeneous edge from the left.
    """
    _check(c)
    perms = permutations_array(c.N, limit=c.N)
    homog = homogeneous_mask(c, perms)
    counts = 1 << homog.sum(axis=1)
    total = int(counts.sum())
    starts = np.repeat(np.cumsum(counts) - counts, counts)
    r = np.arange(total) - starts
    rows = np.repeat(np.arange(len(perms)), counts)
    h = homog[rows]
    rank = np.maximum(np.cumsum(h, axis=1) - 1, 0)
    bit = (r[:, None] >> rank) & 1
    marks = ~h | (h & (bit == 1))
    return perms[rows], marks


def enumerate_marked(c: Composition) -> Iterator[MarkedPM]:
    _check(c)
    for perm in permutations_array(c.N, limit=c.N):
        pm = PermutationPM(c.N, tuple(int(v) + 1 for v in perm))
        homog = [i for i in range(1, c.N + 1) if is_homogeneous(c, i, pm(i))]
        forced = frozenset(range(1, c.N + 1)) - set(homog)
        for r in range(1 << len(homog)):
            chosen = {i for k, i in enumerate(homog) if r >> k & 1}
            yield MarkedPM(pm, forced | chosen, c)


def count_marked(c: Composition) -> int:
    """``sum over PM_N of 2^(number of homogeneous edges)``."""
    _check(c)
    perms = permutations_array(c.N, limit=c.N)
    return int((1 << homogeneous_mask(c, perms).sum(axis=1)).sum())


def to_arrays(ms: Sequence[MarkedPM]) -> tuple[np.ndarray, np.ndarray]:
    """Pack marked perfect matchings of one degree into kernel arrays."""
    n = ms[0].N if ms else 0
    perms = np.array([[v - 1 for v in m.pm.perm] for m in ms], dtype=np.int64).reshape(len(ms), n)
    marks = np.array(
        [[i in m.marked for i in range(1, n + 1)] for m in ms], dtype=bool
    ).reshape(len(ms), n)
    return perms, marks


# -- portions and statistics --------------------------------------------------


@dataclass(frozen=True)
class Portions:
    unmarked_portion: Matching
    marked_portion: PermutationPM


def portions(m: MarkedPM) -> Portions:
    """Unmarked portion keeps all vertices; the marked portion keeps only marked
    edges, ranking survivors within each row."""
    unmarked = Matching(
        m.N, tuple(None if i in m.marked else m(i) for i in range(1, m.N + 1))
    )
    uppers = sorted(m.marked)
    lowers = sorted(m(i) for i in uppers)
    rank = {v: k for k, v in enumerate(lowers, 1)}
    marked = PermutationPM(len(uppers), tuple(rank[m(i)] for i in uppers))
    return Portions(unmarked, marked)


def marked_block_structure(m: MarkedPM) -> BlockStructure:
    """Blocks cut after every vertex incident to a marked edge."""
    lower_cuts = {m(i) for i in m.marked}
    return BlockStructure(block_indices(m.N, set(m.marked)), block_indices(m.N, lower_cuts))


def marked_bdiffs(m: MarkedPM) -> tuple[int, ...]:
    """Block difference of ``e_i`` for ``i = 1..N``."""
    blocks = marked_block_structure(m)
    return tuple(
        blocks.lower_index[m(i) - 1] - blocks.upper_index[i - 1] for i in range(1, m.N + 1)
    )


@dataclass(frozen=True)
class MarkedStats:
    e: int
    bwex: int
    cross: int
    wt: int
    bdiffs: tuple[int, ...]

    @property
    def q_exponent(self) -> int:
        return self.wt + self.cross


def stats(m: MarkedPM) -> MarkedStats:
    """Statistics assembled from the two portions; ``cross`` may be negative."""
    parts = portions(m)
    u, s = parts.unmarked_portion, parts.marked_portion
    return MarkedStats(
        e=u.e,
        bwex=_bwex(u) + wex(s),
        cross=crossings(u) - crossings(s),
        wt=_bwt(u) + wt(s),
        bdiffs=marked_bdiffs(m),
    )


def block_stats(m: MarkedPM) -> tuple[int, int]:
    """``(bwex, wt)`` read directly off the marked block differences."""
    d = marked_bdiffs(m)
    return sum(x >= 0 for x in d), weight_of(d)


def signed_term(m: MarkedPM) -> Poly3:
    st = stats(m)
    if st.q_exponent < 0:
        raise NegativeExponentError(f"wt + cross = {st.q_exponent} < 0 for {m.to_json()}")
    return Poly3.monomial(y=st.bwex, q=st.q_exponent, coeff=-1 if st.e % 2 else 1)


def signed_sum(c: Composition) -> Poly3:
    perms, marks = marked_arrays(c)
    e, bwex, wt_, cross = _kernels.marked_stats(perms, marks)
    qexp = wt_ + cross
    if qexp.size and qexp.min() < 0:
        bad = int(np.argmin(qexp))
        raise NegativeExponentError(
            f"wt + cross = {int(qexp[bad])} < 0 at row {bad} of composition {c}"
        )
    return Poly3.from_exponents(1 - 2 * (e % 2), 0, bwex, qexp)


# -- derangements -------------------------------------------------------------


def _derangement_rows(c: Composition) -> np.ndarray:
    _check(c)
    perms = permutations_array(c.N, limit=c.N)
    return perms[~homogeneous_mask(c, perms).any(axis=1)]


def enumerate_derangements(c: Composition) -> Iterator[PermutationPM]:
    for row in _derangement_rows(c):
        yield PermutationPM(c.N, tuple(int(v) + 1 for v in row))


def derangement_gf(c: Composition) -> Poly3:
    rows = _derangement_rows(c)
    wex_, cr_, _, _ = _kernels.perm_stats(rows)
    return Poly3.from_exponents(np.ones(len(rows), dtype=np.int64), 0, wex_, cr_)


def as_marked(c: Composition, p: PermutationPM) -> MarkedPM:
    """A derangement viewed as the marked perfect matching with every edge marked."""
    return MarkedPM(p, frozenset(range(1, p.degree + 1)), c)
