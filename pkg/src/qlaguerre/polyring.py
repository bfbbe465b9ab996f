"""Sparse polynomials in x, y, q with signed 64-bit integer coefficients.

A :class:`Poly3` is immutable. Every constructor normalizes its terms (zero
coefficients dropped) and rejects coefficients outside the int64 range, so a
value that exists is always canonical.
"""
from __future__ import annotations

import json
import re
from typing import Iterable, Iterator, Mapping, NamedTuple

import numpy as np

from .errors import ArithmeticOverflowError

INT64_MAX = 2**63 - 1
INT64_MIN = -(2**63)

VARIABLES = ("x", "y", "q")


class Monomial(NamedTuple):
    x_deg: int = 0
    y_deg: int = 0
    q_deg: int = 0

    def __mul__(self, other: "Monomial") -> "Monomial":  # type: ignore[override]
        return Monomial(
            self.x_deg + other.x_deg, self.y_deg + other.y_deg, self.q_deg + other.q_deg
        )


def _order_key(m: Monomial) -> tuple[int, int, int]:
    # descending x, descending y, ascending q
    return (-m.x_deg, -m.y_deg, m.q_deg)


def _checked(c: int) -> int:
    if c > INT64_MAX or c < INT64_MIN:
        raise ArithmeticOverflowError(f"coefficient {c} does not fit in a signed 64-bit integer")
    return c


class Poly3:
    """Immutable polynomial over the integers in the variables x, y, q."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | Iterable[tuple[Monomial, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, int] = {}
        for mono, coeff in items:
            mono = Monomial(*mono)
            if min(mono) < 0:
                raise ValueError(f"negative exponent in {mono}")
            acc[mono] = acc.get(mono, 0) + int(coeff)
        self._terms = {
            m: _checked(c) for m, c in sorted(acc.items(), key=lambda t: _order_key(t[0])) if c
        }
        self._hash = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, c: int) -> "Poly3":
        return cls({Monomial(): c})

    @classmethod
    def monomial(cls, x: int = 0, y: int = 0, q: int = 0, coeff: int = 1) -> "Poly3":
        return cls({Monomial(x, y, q): coeff})

    @classmethod
    def from_exponents(
        cls,
        sign: np.ndarray,
        x_deg: np.ndarray | int,
        y_deg: np.ndarray,
        q_deg: np.ndarray,
    ) -> "Poly3":
        """Sum ``sign * x^x_deg * y^y_deg * q^q_deg`` over parallel arrays.

        The arrays come from the enumeration kernels. Every entry contributes
        +-1, so the int64 accumulator cannot overflow for any array that fits
        in memory.
        """
        sign = np.asarray(sign, dtype=np.int64)
        if sign.size == 0:
            return ZERO
        y_deg = np.asarray(y_deg, dtype=np.int64)
        q_deg = np.asarray(q_deg, dtype=np.int64)
        x_deg = np.broadcast_to(np.asarray(x_deg, dtype=np.int64), sign.shape)
        if min(x_deg.min(), y_deg.min(), q_deg.min()) < 0:
            raise ValueError("negative exponent passed to Poly3.from_exponents")
        shape = (int(x_deg.max()) + 1, int(y_deg.max()) + 1, int(q_deg.max()) + 1)
        dense = np.zeros(shape, dtype=np.int64)
        np.add.at(dense, (x_deg, y_deg, q_deg), sign)
        return cls.from_dense(dense)

    @classmethod
    def from_dense(cls, dense: np.ndarray) -> "Poly3":
        """Build from a dense coefficient cube indexed ``[x_deg, y_deg, q_deg]``."""
        idx = np.argwhere(dense != 0)
        return cls((Monomial(int(a), int(b), int(c)), int(dense[a, b, c])) for a, b, c in idx)

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict[Monomial, int]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Monomial, int]]:
        return iter(self._terms.items())

    def coeff(self, x: int = 0, y: int = 0, q: int = 0) -> int:
        return self._terms.get(Monomial(x, y, q), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self, var: str = "x") -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        pos = VARIABLES.index(var)
        return max((m[pos] for m in self._terms), default=-1)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = Poly3.constant(other)
        if not isinstance(other, Poly3):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Poly3({self.to_text()!r})"

    def __str__(self) -> str:
        return self.to_text()

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "Poly3 | int") -> "Poly3":
        other = _coerce(other)
        return Poly3(list(self._terms.items()) + list(other._terms.items()))

    __radd__ = __add__

    def __neg__(self) -> "Poly3":
        return Poly3({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "Poly3 | int") -> "Poly3":
        return self + (-_coerce(other))

    def __rsub__(self, other: int) -> "Poly3":
        return _coerce(other) - self

    def __mul__(self, other: "Poly3 | int") -> "Poly3":
        other = _coerce(other)
        acc: dict[Monomial, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = m1 * m2
                acc[m] = acc.get(m, 0) + c1 * c2
        return Poly3(acc)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly3":
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = ONE
        for _ in range(k):
            out = out * self
        return out

    def specialize(self, x: int | None = None, y: int | None = None, q: int | None = None) -> "Poly3":
        return specialize(self, x_val=x, y_val=y, q_val=q)

    # -- serialization ----------------------------------------------------

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for k, (mono, coeff) in enumerate(self._terms.items()):
            factors = []
            for var, d in zip(VARIABLES, mono):
                if d == 1:
                    factors.append(var)
                elif d > 1:
                    factors.append(f"{var}^{d}")
            mag = abs(coeff)
            if mag != 1 or not factors:
                factors.insert(0, str(mag))
            body = "*".join(factors)
            if k == 0:
                out.append(f"-{body}" if coeff < 0 else body)
            else:
                out.append(f" - {body}" if coeff < 0 else f" + {body}")
        return "".join(out)

    def to_json_obj(self) -> list[dict[str, int]]:
        return [
            {"x": m.x_deg, "y": m.y_deg, "q": m.q_deg, "coeff": c} for m, c in self._terms.items()
        ]

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


def _coerce(v: "Poly3 | int") -> Poly3:
    if isinstance(v, Poly3):
        return v
    if isinstance(v, (int, np.integer)):
        return Poly3.constant(int(v))
    raise TypeError(f"cannot combine Poly3 with {type(v).__name__}")


ZERO = Poly3()
ONE = Poly3.constant(1)
X = Poly3.monomial(x=1)
Y = Poly3.monomial(y=1)
Q = Poly3.monomial(q=1)


def add(a: Poly3, b: Poly3) -> Poly3:
    return a + b


def mul(a: Poly3, b: Poly3) -> Poly3:
    return a * b


def q_integer(n: int) -> Poly3:
    """``[n]_q = 1 + q + ... + q^(n-1)``; zero for ``n == 0``."""
    if n < 0:
        raise ValueError(f"q_integer needs n >= 0, got {n}")
    return Poly3({Monomial(0, 0, i): 1 for i in range(n)})


def specialize(
    p: Poly3, x_val: int | None = None, y_val: int | None = None, q_val: int | None = None
) -> Poly3:
    """Substitute integers for any subset of the variables."""
    vals = (x_val, y_val, q_val)
    acc: dict[Monomial, int] = {}
    for mono, coeff in p.items():
        c = coeff
        kept = []
        for v, d in zip(vals, mono):
            if v is None:
                kept.append(d)
            else:
                c *= v**d
                kept.append(0)
        m = Monomial(*kept)
        acc[m] = acc.get(m, 0) + c
    return Poly3(acc)


_TERM_SPLIT = re.compile(r"([+-])")
_FACTOR = re.compile(r"^(?:(\d+)|([xyq])(?:\^(\d+))?)$")


def parse(text: str) -> Poly3:
    """Parse the text form. Terms and factors may appear in any order."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial text")
    if s[0] not in "+-":
        s = "+" + s
    parts = _TERM_SPLIT.split(s)[1:]
    if len(parts) % 2:
        raise ValueError(f"malformed polynomial text: {text!r}")
    acc: dict[Monomial, int] = {}
    for sign, body in zip(parts[::2], parts[1::2]):
        if not body:
            raise ValueError(f"malformed polynomial text: {text!r}")
        coeff = -1 if sign == "-" else 1
        degs = [0, 0, 0]
        for factor in body.split("*"):
            m = _FACTOR.match(factor)
            if m is None:
                raise ValueError(f"bad factor {factor!r} in {text!r}")
            if m.group(1) is not None:
                coeff *= int(m.group(1))
            else:
                degs[VARIABLES.index(m.group(2))] += int(m.group(3) or 1)
        mono = Monomial(*degs)
        acc[mono] = acc.get(mono, 0) + coeff
    return Poly3(acc)


def from_json_obj(obj: list[dict[str, int]]) -> Poly3:
    return Poly3(
        (Monomial(int(t.get("x", 0)), int(t.get("y", 0)), int(t.get("q", 0))), int(t["coeff"]))
        for t in obj
    )


def from_json(text: str) -> Poly3:
    return from_json_obj(json.loads(text))
