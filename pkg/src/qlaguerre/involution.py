"""The sign-reversing involution on marked perfect matchings.

:func:`phi` is the reference implementation: it works on one
:class:`~qlaguerre.marked.MarkedPM` at a time and recomputes block
differences from scratch. :func:`verify_lemmas` sweeps a whole composition
through the batch kernels and checks every structural property the
construction relies on; :func:`verify_lemmas_reference` does the same sweep
object by object.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels
from .errors import InhomogeneousEdgeError, InternalInconsistencyError
from .marked import (
    Composition,
    MarkedPM,
    enumerate_marked,
    homogeneous_mask,
    marked_arrays,
    marked_bdiffs,
    stats,
)
from .polyring import Poly3


class Case(str, enum.Enum):
    CASE0 = "Case0"
    CASE1 = "Case1"
    CASE2A = "Case2a"
    CASE2B = "Case2b"


CASE_BY_CODE = {
    _kernels.CASE_FIXED: Case.CASE0,
    _kernels.CASE_ONE: Case.CASE1,
    _kernels.CASE_TWO_A: Case.CASE2A,
    _kernels.CASE_TWO_B: Case.CASE2B,
}


@dataclass(frozen=True)
class PhiTrace:
    case_tag: Case
    toggled_edge: int | None = None
    chosen_i: int | None = None
    chosen_i_prime: int | None = None

    def __post_init__(self):
        if (self.case_tag is Case.CASE0) != (self.toggled_edge is None):
            raise ValueError("exactly the Case0 trace has no toggled edge")
        if self.case_tag is Case.CASE2B and not (
            self.chosen_i_prime is not None
            and self.chosen_i is not None
            and self.chosen_i_prime < self.chosen_i
        ):
            raise ValueError("Case2b needs chosen_i_prime < chosen_i")

    def to_json_obj(self) -> dict:
        return {
            "case": self.case_tag.value,
            "toggled_edge": self.toggled_edge,
            "chosen_i": self.chosen_i,
            "chosen_i_prime": self.chosen_i_prime,
        }


def crosses_from_left(m: MarkedPM, j: int, i: int) -> bool:
    """``e_j`` crosses ``e_i`` from the left: ``j < i`` and ``pi(j) > pi(i)``."""
    return j < i and m(j) > m(i)


def crosses(m: MarkedPM, i: int, j: int) -> bool:
    return crosses_from_left(m, i, j) or crosses_from_left(m, j, i)


def is_convertible(m: MarkedPM, i: int, bd: tuple[int, ...] | None = None) -> bool:
    """Would toggling the homogeneous edge ``e_i`` keep every other edge's
    block weak excedance status?"""
    if i not in m.homogeneous_edges:
        raise InhomogeneousEdgeError(f"edge e_{i} of {m.to_json()} is inhomogeneous")
    if bd is None:
        bd = marked_bdiffs(m)
    slack = 1 if m.is_marked(i) else 0
    for j in range(1, m.N + 1):
        d = bd[j - 1]
        if crosses_from_left(m, j, i):
            if d < slack:
                return False
        elif crosses_from_left(m, i, j):
            if d > -1 - slack:
                return False
    return True


def phi(m: MarkedPM) -> tuple[MarkedPM, PhiTrace]:
    homog = sorted(m.homogeneous_edges)
    if not homog:
        return m, PhiTrace(Case.CASE0)
    bd = marked_bdiffs(m)
    negative = [j for j in homog if bd[j - 1] < 0]
    if not negative:
        i = min(homog, key=m)
        return m.toggle(i), PhiTrace(Case.CASE1, i, i)
    i = negative[0]
    if is_convertible(m, i, bd):
        return m.toggle(i), PhiTrace(Case.CASE2A, i, i)
    candidates = [j for j in homog if j < i and bd[j - 1] == 0 and crosses(m, j, i)]
    if not candidates:
        raise InternalInconsistencyError(
            f"no fallback edge for non-convertible e_{i} in {m.to_json()}"
        )
    ip = max(candidates)
    return m.toggle(ip), PhiTrace(Case.CASE2B, ip, i, ip)


def toggled_bdiffs(m: MarkedPM, bd: tuple[int, ...], i: int) -> tuple[int, ...]:
    """Block differences after toggling ``e_i``, by the incremental update rule."""
    step = 1 if not m.is_marked(i) else -1
    out = list(bd)
    for j in range(1, m.N + 1):
        if crosses_from_left(m, j, i):
            out[j - 1] += step
        elif crosses_from_left(m, i, j):
            out[j - 1] -= step
    return tuple(out)


def bdiff_update_check(m: MarkedPM, i: int) -> bool:
    after = m.toggle(i)
    return toggled_bdiffs(m, marked_bdiffs(m), i) == marked_bdiffs(after)


# -- verification -------------------------------------------------------------

CHECKS = (
    "prop41",
    "lemma42_marked",
    "lemma43_nonempty",
    "lemma44_convertible",
    "lemma45_involution",
    "lemma46_bwex",
    "lemma47_wt_cross",
    "sign_reversal",
    "fixed_points",
    "convertible_symmetry",
    "bdiff_update",
    "nonnegative_exponent",
    "cancellation",
)


@dataclass
class InvolutionReport:
    composition: tuple[int, ...]
    structures_checked: int = 0
    orbits: int = 0
    fixed_points: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json_obj(self) -> dict:
        return {
            "composition": list(self.composition),
            "structures_checked": self.structures_checked,
            "orbits": self.orbits,
            "fixed_points": self.fixed_points,
            "failures": self.failures,
        }


def _row_structure(c: Composition, perm, mark) -> MarkedPM:
    return MarkedPM.build(
        c.parts, [int(v) + 1 for v in perm], [i + 1 for i in np.flatnonzero(mark)]
    )


def _dump(m: MarkedPM) -> dict:
    out = m.to_json_obj()
    out["bdiffs"] = list(marked_bdiffs(m))
    try:
        image, trace = phi(m)
        out["phi"] = {"image_marked": sorted(image.marked), **trace.to_json_obj()}
    except InternalInconsistencyError as exc:
        out["phi"] = {"error": str(exc)}
    return out


def verify_lemmas(c: Composition, backend: str | None = None) -> InvolutionReport:
    """Exhaustively check the involution on every marked perfect matching of ``c``."""
    ks = _kernels.get_kernels(backend)
    perms, marks = marked_arrays(c)
    M, n = perms.shape
    rows = np.arange(M)
    homog = homogeneous_mask(c, perms)
    bd = ks.marked_bdiff(perms, marks)
    case, tog, chosen, _ = ks.phi_batch(perms, marks, homog, bd)
    conv = ks.convertible_all(perms, marks, bd)

    moved = case != _kernels.CASE_FIXED
    safe_tog = np.where(tog >= 0, tog, 0)
    valid = moved & (tog >= 0)
    marks2 = marks.copy()
    marks2[rows[valid], tog[valid]] ^= True
    bd2 = ks.marked_bdiff(perms, marks2)
    case2, tog2, _, _ = ks.phi_batch(perms, marks2, homog, bd2)
    e, bw, wt, cr = ks.marked_stats(perms, marks)
    e2, bw2, wt2, cr2 = ks.marked_stats(perms, marks2)

    ok: dict[str, np.ndarray] = {}
    ok["prop41"] = ks.prop41_ok(perms, marks, bd)
    two_b = case == _kernels.CASE_TWO_B
    safe_i = np.where(chosen >= 0, chosen, 0)
    ok["lemma42_marked"] = ~two_b | marks[rows, safe_i]
    ok["lemma43_nonempty"] = ~two_b | (tog >= 0)
    ok["lemma44_convertible"] = ~moved | (
        (tog >= 0) & homog[rows, safe_tog] & conv[rows, safe_tog]
    )
    ok["lemma45_involution"] = (tog2 == tog) & ((case2 == 0) == (case == 0))
    ok["lemma46_bwex"] = bw2 == bw
    ok["lemma47_wt_cross"] = wt2 + cr2 == wt + cr
    ok["sign_reversal"] = ~moved | (np.abs(e2 - e) == 1)
    ok["fixed_points"] = moved == homog.any(axis=1)
    ok["nonnegative_exponent"] = wt + cr >= 0

    # every homogeneous edge: convertibility is symmetric under its own toggle,
    # and the incremental block-difference update matches a full recompute
    sym = np.ones(M, dtype=bool)
    upd = np.ones(M, dtype=bool)
    idx = np.arange(n)
    for k in range(n):
        sel = homog[:, k]
        if not sel.any():
            continue
        p_k, m_k, bd_k = perms[sel], marks[sel], bd[sel]
        flipped = m_k.copy()
        flipped[:, k] ^= True
        bd_new = ks.marked_bdiff(p_k, flipped)
        conv_new = ks.convertible_all(p_k, flipped, bd_new)
        sym[sel] = conv_new[:, k] == conv[sel, k]
        step = np.where(m_k[:, k], -1, 1)[:, None]
        pk = p_k[:, k][:, None]
        left = (idx[None, :] < k) & (p_k > pk)
        right = (idx[None, :] > k) & (p_k < pk)
        expected = bd_k + step * left - step * right
        upd[sel] = (expected == bd_new).all(axis=1)
    ok["convertible_symmetry"] = sym
    ok["bdiff_update"] = upd

    qexp = np.maximum(wt + cr, 0)
    sign = 1 - 2 * (e % 2)
    total = Poly3.from_exponents(sign, 0, bw, qexp)
    fixed = Poly3.from_exponents(sign[~moved], 0, bw[~moved], qexp[~moved])
    ok["cancellation"] = np.full(M, total == fixed)

    report = InvolutionReport(
        composition=c.parts,
        structures_checked=M,
        orbits=int(moved.sum()) // 2,
        fixed_points=int((~moved).sum()),
    )
    for name in CHECKS:
        bad = np.flatnonzero(~ok[name])
        if bad.size:
            r = int(bad[0])
            report.failures.append(
                {
                    "check": name,
                    "count": int(bad.size),
                    "structure": _dump(_row_structure(c, perms[r], marks[r])),
                }
            )
    return report


def verify_lemmas_reference(c: Composition) -> InvolutionReport:
    """Object-by-object version of :func:`verify_lemmas`, for small compositions."""
    report = InvolutionReport(composition=c.parts)
    first: dict[str, tuple[int, MarkedPM]] = {}
    total = fixed_sum = Poly3()

    def fail(name: str, m: MarkedPM) -> None:
        count, witness = first.get(name, (0, m))
        first[name] = (count + 1, witness)

    for m in enumerate_marked(c):
        report.structures_checked += 1
        bd = marked_bdiffs(m)
        st = stats(m)
        term = Poly3.monomial(y=st.bwex, q=max(st.q_exponent, 0), coeff=-1 if st.e % 2 else 1)
        total = total + term
        if st.q_exponent < 0:
            fail("nonnegative_exponent", m)

        for i in range(1, m.N + 1):
            for j in range(i + 1, m.N + 1):
                if crosses_from_left(m, i, j):
                    strict = m.is_marked(i) or m.is_marked(j)
                    if bd[i - 1] < bd[j - 1] or (strict and bd[i - 1] == bd[j - 1]):
                        fail("prop41", m)

        for h in m.homogeneous_edges:
            if is_convertible(m, h, bd) != is_convertible(m.toggle(h), h):
                fail("convertible_symmetry", m)
            if not bdiff_update_check(m, h):
                fail("bdiff_update", m)

        try:
            image, trace = phi(m)
        except InternalInconsistencyError:
            fail("lemma43_nonempty", m)
            continue
        if trace.case_tag is Case.CASE2B and not m.is_marked(trace.chosen_i):
            fail("lemma42_marked", m)
        if (trace.case_tag is Case.CASE0) != (not m.homogeneous_edges):
            fail("fixed_points", m)
        if trace.case_tag is Case.CASE0:
            report.fixed_points += 1
            fixed_sum = fixed_sum + term
            continue
        report.orbits += 1
        if not is_convertible(m, trace.toggled_edge, bd):
            fail("lemma44_convertible", m)
        try:
            back, _ = phi(image)
        except InternalInconsistencyError:
            back = None
        if back != m:
            fail("lemma45_involution", m)
        st2 = stats(image)
        if st2.bwex != st.bwex:
            fail("lemma46_bwex", m)
        if st2.q_exponent != st.q_exponent:
            fail("lemma47_wt_cross", m)
        if abs(st2.e - st.e) != 1:
            fail("sign_reversal", m)

    report.orbits //= 2
    for name in CHECKS:
        if name == "cancellation" and total != fixed_sum:
            report.failures.append({"check": name, "count": 1, "structure": None})
        elif name in first:
            count, witness = first[name]
            report.failures.append({"check": name, "count": count, "structure": _dump(witness)})
    return report


def compositions(n: int):
    """All compositions of ``n`` with positive parts, in lexicographic order."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            yield (first,) + rest


def verify_all(
    max_n: int,
    backend: str | None = None,
    runner: Callable[[Composition], InvolutionReport] | None = None,
) -> list[InvolutionReport]:
    """Run the sweep over every composition of every ``N`` in ``1..max_n``."""
    run = runner or (lambda c: verify_lemmas(c, backend))
    return [run(Composition(p)) for n in range(1, max_n + 1) for p in compositions(n)]
