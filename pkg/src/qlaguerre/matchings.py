"""Matchings of degree n drawn on two rows, and their statistics.

Vertices are 1-based everywhere in this module. The per-object functions
(:func:`crossings`, :func:`bwex`, :func:`cr`, ...) follow the definitions
literally and double as the oracle for the batch kernels.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import config
from .errors import UnmatchedVertexError


@dataclass(frozen=True)
class Matching:
    """Partial injection from upper vertices to lower vertices.

    ``target[i - 1]`` is the lower endpoint of upper vertex ``i``, or ``None``.
    """

    degree: int
    target: tuple[int | None, ...]

    def __post_init__(self):
        if self.degree < 0 or len(self.target) != self.degree:
            raise ValueError(f"target must have length {self.degree}")
        seen = set()
        for t in self.target:
            if t is None:
                continue
            if not 1 <= t <= self.degree:
                raise ValueError(f"lower endpoint {t} out of range 1..{self.degree}")
            if t in seen:
                raise ValueError(f"lower vertex {t} matched twice")
            seen.add(t)

    @classmethod
    def from_edges(cls, degree: int, edges) -> "Matching":
        target: list[int | None] = [None] * degree
        for i, j in edges:
            if not 1 <= i <= degree:
                raise ValueError(f"upper endpoint {i} out of range 1..{degree}")
            if target[i - 1] is not None:
                raise ValueError(f"upper vertex {i} matched twice")
            target[i - 1] = j
        return cls(degree, tuple(target))

    def __call__(self, i: int) -> int | None:
        return self.target[i - 1]

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(i, t) for i, t in enumerate(self.target, 1) if t is not None]

    @property
    def e(self) -> int:
        return sum(t is not None for t in self.target)

    @property
    def unmatched_upper(self) -> list[int]:
        return [i for i, t in enumerate(self.target, 1) if t is None]

    @property
    def unmatched_lower(self) -> list[int]:
        used = {t for t in self.target if t is not None}
        return [j for j in range(1, self.degree + 1) if j not in used]

    def is_perfect(self) -> bool:
        return self.e == self.degree

    def to_json_obj(self) -> dict:
        return {"degree": self.degree, "edges": [list(e) for e in self.edges]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Matching":
        return cls.from_edges(int(obj["degree"]), [tuple(e) for e in obj["edges"]])


@dataclass(frozen=True)
class PermutationPM:
    """A perfect matching identified with the permutation ``i -> perm[i - 1]``."""

    degree: int
    perm: tuple[int, ...]

    def __post_init__(self):
        if len(self.perm) != self.degree or sorted(self.perm) != list(range(1, self.degree + 1)):
            raise ValueError(f"{self.perm} is not a permutation of 1..{self.degree}")

    @classmethod
    def of(cls, *perm: int) -> "PermutationPM":
        return cls(len(perm), tuple(perm))

    def __call__(self, i: int) -> int:
        return self.perm[i - 1]

    @property
    def edges(self) -> list[tuple[int, int]]:
        return list(enumerate(self.perm, 1))

    def as_matching(self) -> Matching:
        return Matching(self.degree, tuple(self.perm))

    def one_line(self) -> str:
        return " ".join(map(str, self.perm))


@dataclass(frozen=True)
class BlockStructure:
    upper_index: tuple[int, ...]
    lower_index: tuple[int, ...]


def _as_matching(m: Matching | PermutationPM) -> Matching:
    return m.as_matching() if isinstance(m, PermutationPM) else m


# -- enumeration --------------------------------------------------------------


def count_matchings(n: int) -> int:
    from math import comb, factorial

    return sum(comb(n, k) ** 2 * factorial(k) for k in range(n + 1))


def _matching_targets(n: int) -> Iterator[tuple[int | None, ...]]:
    verts = range(1, n + 1)
    for k in range(n + 1):
        for uppers in itertools.combinations(verts, k):
            for lowers in itertools.combinations(verts, k):
                for image in itertools.permutations(lowers):
                    target: list[int | None] = [None] * n
                    for i, j in zip(uppers, image):
                        target[i - 1] = j
                    yield tuple(target)


def enumerate_matchings(n: int, limit: int | None = None) -> Iterator[Matching]:
    """Every matching of degree ``n`` once, ordered by edge count, then matched
    upper set, matched lower set and injection, each lexicographically."""
    config.check_limit(n, limit if limit is not None else config.MATCHING_LIMIT)
    for target in _matching_targets(n):
        yield Matching(n, target)


def matchings_array(n: int, limit: int | None = None) -> np.ndarray:
    """All matchings of degree ``n`` as 0-based targets, -1 for unmatched."""
    config.check_limit(n, limit if limit is not None else config.MATCHING_LIMIT)
    rows = [[-1 if t is None else t - 1 for t in target] for target in _matching_targets(n)]
    return np.array(rows, dtype=np.int64).reshape(len(rows), n)


def enumerate_perfect_matchings(n: int, limit: int | None = None) -> Iterator[PermutationPM]:
    config.check_limit(n, limit if limit is not None else config.MATCHING_LIMIT)
    for p in itertools.permutations(range(1, n + 1)):
        yield PermutationPM(n, p)


def permutations_array(n: int, limit: int | None = None) -> np.ndarray:
    """All permutations of ``0..n-1`` in lexicographic order, one per row."""
    config.check_limit(n, limit if limit is not None else config.MATCHING_LIMIT)
    rows = list(itertools.permutations(range(n)))
    return np.array(rows, dtype=np.int64).reshape(len(rows), n)


# -- matching statistics ------------------------------------------------------


def crossings(m: Matching | PermutationPM) -> int:
    """Pairs of edges ``(i, j)`` with ``i < j`` and ``pi(i) > pi(j)``."""
    edges = _as_matching(m).edges
    return sum(
        1 for (i, a), (j, b) in itertools.combinations(edges, 2) if i < j and a > b
    )


def block_structure(m: Matching | PermutationPM) -> BlockStructure:
    m = _as_matching(m)
    return BlockStructure(
        block_indices(m.degree, set(m.unmatched_upper)), block_indices(m.degree, set(m.unmatched_lower))
    )


def block_indices(n: int, cuts: set[int]) -> tuple[int, ...]:
    # one more than the number of cut vertices strictly before each vertex
    out, seen = [], 0
    for v in range(1, n + 1):
        out.append(1 + seen)
        if v in cuts:
            seen += 1
    return tuple(out)


def bdiff(m: Matching | PermutationPM, i: int) -> int:
    m = _as_matching(m)
    t = m(i)
    if t is None:
        raise UnmatchedVertexError(f"upper vertex {i} is unmatched")
    blocks = block_structure(m)
    return blocks.lower_index[t - 1] - blocks.upper_index[i - 1]


def bdiffs(m: Matching | PermutationPM) -> dict[int, int]:
    m = _as_matching(m)
    blocks = block_structure(m)
    return {i: blocks.lower_index[t - 1] - blocks.upper_index[i - 1] for i, t in m.edges}


def weight_of(diffs) -> int:
    """Nonnegative differences count as themselves, negative ones as ``-d - 1``."""
    return sum(d if d >= 0 else -d - 1 for d in diffs)


def bwex(m: Matching | PermutationPM) -> int:
    return sum(d >= 0 for d in bdiffs(m).values())


def bwt(m: Matching | PermutationPM) -> int:
    return weight_of(bdiffs(m).values())


# -- permutation statistics ---------------------------------------------------


def wex(p: PermutationPM) -> int:
    return sum(p(i) >= i for i in range(1, p.degree + 1))


def cr(p: PermutationPM) -> int:
    """Permutation crossings: ``i < j <= s(i) < s(j)`` or ``s(i) < s(j) < i < j``."""
    n, s = p.degree, p
    return sum(
        1
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
        if (j <= s(i) < s(j)) or (s(i) < s(j) < i)
    )


def wt(p: PermutationPM) -> int:
    return weight_of(p(i) - i for i in range(1, p.degree + 1))


def ov(p: PermutationPM) -> int:
    """Overlapping pairs, counted over ordered pairs of upper vertices."""
    n, s = p.degree, p
    return sum(
        1
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        if (i < j <= s(i) < s(j)) or (s(j) < s(i) < j < i)
    )
