"""Batch statistics kernels.

Every kernel exists twice: a numba ``@njit`` loop and a broadcast numpy
version. The numba path is the default; ``QLAG_DISABLE_NUMBA=1`` (or numba
being absent) switches the module-level names to the numpy path. Both sets are
always reachable through :func:`get_kernels` so they can be cross-checked and
benchmarked in one process.

Array conventions, all 0-based:

* ``perms``   int64 ``(M, n)``, row ``r`` is a permutation of ``0..n-1``
* ``targets`` int64 ``(M, n)``, lower endpoint of upper vertex ``i`` or -1
* ``marks``   bool  ``(M, n)``, whether the edge at upper vertex ``i`` is marked
* ``homog``   bool  ``(M, n)``, whether the edge at upper vertex ``i`` is homogeneous

Phi case codes: 0 = no homogeneous edge, 1 = all homogeneous block differences
nonnegative, 2 = toggled the first negative edge, 3 = toggled the fallback edge.
A case-3 row with ``toggled == -1`` means the fallback candidate set was empty.
"""
from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

DISABLE_ENV = "QLAG_DISABLE_NUMBA"

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

BACKEND = (
    "numba" if HAVE_NUMBA and os.environ.get(DISABLE_ENV, "") in ("", "0") else "numpy"
)

CASE_FIXED, CASE_ONE, CASE_TWO_A, CASE_TWO_B = 0, 1, 2, 3


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------


def _pairs(n):
    idx = np.arange(n)
    return idx[:, None], idx[None, :]


def perm_stats_numpy(perms):
    """Return ``(wex, CR, wt, cross)`` for each row of ``perms``."""
    m, n = perms.shape
    idx = np.arange(n)
    d = perms - idx
    wex = (d >= 0).sum(axis=1)
    wt = np.where(d >= 0, d, -d - 1).sum(axis=1)
    I, J = _pairs(n)
    a = perms[:, :, None]
    b = perms[:, None, :]
    upper = I < J
    cross = (upper & (a > b)).sum(axis=(1, 2))
    cr = (upper & (((J <= a) & (a < b)) | ((a < b) & (b < I)))).sum(axis=(1, 2))
    return (
        wex.astype(np.int64),
        cr.astype(np.int64),
        wt.astype(np.int64),
        cross.astype(np.int64),
    )


def _block_index(separator):
    # 1 + number of separator vertices strictly before each position
    sep = separator.astype(np.int64)
    return 1 + np.cumsum(sep, axis=1) - sep


def _lower_flags(targets, flags):
    m, n = targets.shape
    out = np.zeros((m, n), dtype=bool)
    rows, cols = np.nonzero(flags & (targets >= 0))
    out[rows, targets[rows, cols]] = True
    return out


def _weights(bdiff, present):
    bwex = (present & (bdiff >= 0)).sum(axis=1)
    bwt = np.where(present, np.where(bdiff >= 0, bdiff, -bdiff - 1), 0).sum(axis=1)
    return bwex.astype(np.int64), bwt.astype(np.int64)


def matching_stats_numpy(targets):
    """Return ``(e, bwex, bwt, cross)`` for each row of ``targets``."""
    m, n = targets.shape
    matched = targets >= 0
    bind_u = _block_index(~matched)
    bind_l = _block_index(~_lower_flags(targets, matched))
    safe = np.where(matched, targets, 0)
    bdiff = np.take_along_axis(bind_l, safe, axis=1) - bind_u
    bwex, bwt = _weights(bdiff, matched)
    I, J = _pairs(n)
    a = targets[:, :, None]
    b = targets[:, None, :]
    both = matched[:, :, None] & matched[:, None, :]
    cross = (both & (I < J) & (a > b)).sum(axis=(1, 2))
    return matched.sum(axis=1).astype(np.int64), bwex, bwt, cross.astype(np.int64)


def marked_bdiff_numpy(perms, marks):
    """Block differences of every edge, blocks cut at marked-edge endpoints."""
    bind_u = _block_index(marks)
    bind_l = _block_index(_lower_flags(perms, marks))
    return np.take_along_axis(bind_l, perms, axis=1) - bind_u


def marked_stats_numpy(perms, marks):
    """Return ``(e, bwex, wt, cross)``; ``cross`` may be negative."""
    m, n = perms.shape
    bdiff = marked_bdiff_numpy(perms, marks)
    bwex, wt = _weights(bdiff, np.ones_like(marks))
    I, J = _pairs(n)
    crossing = (I < J) & (perms[:, :, None] > perms[:, None, :])
    mi = marks[:, :, None]
    mj = marks[:, None, :]
    cross = (crossing & ~mi & ~mj).sum(axis=(1, 2)) - (crossing & mi & mj).sum(axis=(1, 2))
    e = n - marks.sum(axis=1)
    return e.astype(np.int64), bwex, wt, cross.astype(np.int64)


def convertible_all_numpy(perms, marks, bdiff):
    """``out[r, i]``: is edge ``i`` convertible (homogeneity not checked)."""
    m, n = perms.shape
    I, J = _pairs(n)
    pi = perms[:, :, None]
    pj = perms[:, None, :]
    left = (J < I) & (pj > pi)
    right = (J > I) & (pj < pi)
    thr = marks[:, :, None].astype(np.int64)
    bj = bdiff[:, None, :]
    bad = (left & (bj < thr)) | (right & (bj > -1 - thr))
    return ~bad.any(axis=2)


def phi_batch_numpy(perms, marks, homog, bdiff):
    """Return ``(case, toggled, chosen_i, chosen_i_prime)`` per row."""
    m, n = perms.shape
    rows = np.arange(m)
    case = np.zeros(m, dtype=np.int64)
    toggled = np.full(m, -1, dtype=np.int64)
    chosen = np.full(m, -1, dtype=np.int64)
    chosen_p = np.full(m, -1, dtype=np.int64)
    if n == 0:
        return case, toggled, chosen, chosen_p
    any_h = homog.any(axis=1)
    neg = homog & (bdiff < 0)
    has_neg = neg.any(axis=1)

    one = any_h & ~has_neg
    lowest = np.where(homog, perms, n).argmin(axis=1)
    case[one] = CASE_ONE
    toggled[one] = lowest[one]
    chosen[one] = lowest[one]

    two = has_neg
    first = neg.argmax(axis=1)
    conv = convertible_all_numpy(perms, marks, bdiff)[rows, first]
    two_a = two & conv
    two_b = two & ~conv
    case[two_a] = CASE_TWO_A
    toggled[two_a] = first[two_a]
    chosen[two] = first[two]

    idx = np.arange(n)[None, :]
    p_first = perms[rows, first][:, None]
    cand = homog & (bdiff == 0) & (idx < first[:, None]) & (perms > p_first)
    found = cand.any(axis=1)
    last = n - 1 - cand[:, ::-1].argmax(axis=1)
    ip = np.where(found, last, -1)
    case[two_b] = CASE_TWO_B
    toggled[two_b] = ip[two_b]
    chosen_p[two_b] = ip[two_b]
    return case, toggled, chosen, chosen_p


def prop41_ok_numpy(perms, marks, bdiff):
    """Left-crossing edges have block difference at least as large, strictly if marked."""
    m, n = perms.shape
    I, J = _pairs(n)
    crossing = (I < J) & (perms[:, :, None] > perms[:, None, :])
    bi = bdiff[:, :, None]
    bj = bdiff[:, None, :]
    strict = marks[:, :, None] | marks[:, None, :]
    bad = crossing & ((bi < bj) | (strict & (bi == bj)))
    return ~bad.any(axis=(1, 2))


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def perm_stats_numba(perms):
        m, n = perms.shape
        wex = np.zeros(m, np.int64)
        cr = np.zeros(m, np.int64)
        wt = np.zeros(m, np.int64)
        cross = np.zeros(m, np.int64)
        for r in range(m):
            for i in range(n):
                a = perms[r, i]
                if a >= i:
                    wex[r] += 1
                    wt[r] += a - i
                else:
                    wt[r] += i - a - 1
                for j in range(i + 1, n):
                    b = perms[r, j]
                    if a > b:
                        cross[r] += 1
                    if j <= a and a < b:
                        cr[r] += 1
                    elif a < b and b < i:
                        cr[r] += 1
        return wex, cr, wt, cross

    @njit(cache=True)
    def matching_stats_numba(targets):
        m, n = targets.shape
        e = np.zeros(m, np.int64)
        bwex = np.zeros(m, np.int64)
        bwt = np.zeros(m, np.int64)
        cross = np.zeros(m, np.int64)
        lower = np.zeros(n, np.bool_)
        bu = np.zeros(n, np.int64)
        bl = np.zeros(n, np.int64)
        for r in range(m):
            lower[:] = False
            c = 0
            for i in range(n):
                t = targets[r, i]
                bu[i] = c + 1
                if t < 0:
                    c += 1
                else:
                    lower[t] = True
                    e[r] += 1
            c = 0
            for j in range(n):
                bl[j] = c + 1
                if not lower[j]:
                    c += 1
            for i in range(n):
                t = targets[r, i]
                if t < 0:
                    continue
                d = bl[t] - bu[i]
                if d >= 0:
                    bwex[r] += 1
                    bwt[r] += d
                else:
                    bwt[r] += -d - 1
                for j in range(i + 1, n):
                    s = targets[r, j]
                    if s >= 0 and t > s:
                        cross[r] += 1
        return e, bwex, bwt, cross

    @njit(cache=True)
    def marked_bdiff_numba(perms, marks):
        m, n = perms.shape
        out = np.zeros((m, n), np.int64)
        lower = np.zeros(n, np.bool_)
        bu = np.zeros(n, np.int64)
        bl = np.zeros(n, np.int64)
        for r in range(m):
            lower[:] = False
            c = 0
            for i in range(n):
                bu[i] = c + 1
                if marks[r, i]:
                    c += 1
                    lower[perms[r, i]] = True
            c = 0
            for j in range(n):
                bl[j] = c + 1
                if lower[j]:
                    c += 1
            for i in range(n):
                out[r, i] = bl[perms[r, i]] - bu[i]
        return out

    @njit(cache=True)
    def marked_stats_numba(perms, marks):
        m, n = perms.shape
        bdiff = marked_bdiff_numba(perms, marks)
        e = np.zeros(m, np.int64)
        bwex = np.zeros(m, np.int64)
        wt = np.zeros(m, np.int64)
        cross = np.zeros(m, np.int64)
        for r in range(m):
            for i in range(n):
                if not marks[r, i]:
                    e[r] += 1
                d = bdiff[r, i]
                if d >= 0:
                    bwex[r] += 1
                    wt[r] += d
                else:
                    wt[r] += -d - 1
                for j in range(i + 1, n):
                    if perms[r, i] > perms[r, j]:
                        if marks[r, i] and marks[r, j]:
                            cross[r] -= 1
                        elif not marks[r, i] and not marks[r, j]:
                            cross[r] += 1
        return e, bwex, wt, cross

    @njit(cache=True)
    def _convertible_one(p, mk, bd, i):
        n = p.shape[0]
        thr = 1 if mk[i] else 0
        for j in range(n):
            if j < i and p[j] > p[i]:
                if bd[j] < thr:
                    return False
            elif j > i and p[j] < p[i]:
                if bd[j] > -1 - thr:
                    return False
        return True

    @njit(cache=True)
    def convertible_all_numba(perms, marks, bdiff):
        m, n = perms.shape
        out = np.zeros((m, n), np.bool_)
        for r in range(m):
            for i in range(n):
                out[r, i] = _convertible_one(perms[r], marks[r], bdiff[r], i)
        return out

    @njit(cache=True)
    def phi_batch_numba(perms, marks, homog, bdiff):
        m, n = perms.shape
        case = np.zeros(m, np.int64)
        toggled = np.full(m, -1, np.int64)
        chosen = np.full(m, -1, np.int64)
        chosen_p = np.full(m, -1, np.int64)
        for r in range(m):
            first = -1
            lowest = -1
            for i in range(n):
                if not homog[r, i]:
                    continue
                if first < 0 and bdiff[r, i] < 0:
                    first = i
                if lowest < 0 or perms[r, i] < perms[r, lowest]:
                    lowest = i
            if lowest < 0:
                continue
            if first < 0:
                case[r] = 1
                toggled[r] = lowest
                chosen[r] = lowest
                continue
            chosen[r] = first
            if _convertible_one(perms[r], marks[r], bdiff[r], first):
                case[r] = 2
                toggled[r] = first
                continue
            case[r] = 3
            ip = -1
            for j in range(first):
                if homog[r, j] and bdiff[r, j] == 0 and perms[r, j] > perms[r, first]:
                    ip = j
            toggled[r] = ip
            chosen_p[r] = ip
        return case, toggled, chosen, chosen_p

    @njit(cache=True)
    def prop41_ok_numba(perms, marks, bdiff):
        m, n = perms.shape
        out = np.ones(m, np.bool_)
        for r in range(m):
            for i in range(n):
                for j in range(i + 1, n):
                    if perms[r, i] > perms[r, j]:
                        bi = bdiff[r, i]
                        bj = bdiff[r, j]
                        if bi < bj or ((marks[r, i] or marks[r, j]) and bi == bj):
                            out[r] = False
        return out


_NAMES = (
    "perm_stats",
    "matching_stats",
    "marked_bdiff",
    "marked_stats",
    "convertible_all",
    "phi_batch",
    "prop41_ok",
)


def available_backends() -> tuple[str, ...]:
    return ("numba", "numpy") if HAVE_NUMBA else ("numpy",)


def get_kernels(backend: str | None = None) -> SimpleNamespace:
    backend = backend or BACKEND
    if backend not in available_backends():
        raise ValueError(f"unknown or unavailable backend {backend!r}")
    g = globals()
    return SimpleNamespace(
        name=backend, **{name: g[f"{name}_{backend}"] for name in _NAMES}
    )


_default = get_kernels()
perm_stats = _default.perm_stats
matching_stats = _default.matching_stats
marked_bdiff = _default.marked_bdiff
marked_stats = _default.marked_stats
convertible_all = _default.convertible_all
phi_batch = _default.phi_batch
prop41_ok = _default.prop41_ok
