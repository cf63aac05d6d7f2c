"""Enumeration of nonnegative-integer matrices commuting with (S, Omega).

The search space is cut down in three stages: the exact spin classes
(T-support) restrict the allowed cells, the real S-commutant restricted
to those cells is computed once by SVD and put into reduced row echelon
form, and the integer points are then scanned through the pivot cells
with Perron-Frobenius bounds Z_{lm} <= d_l d_m and sum Z <= w.

The echelon basis is rationalized (small-denominator reconstruction) so
that the accepted matrices can be re-verified exactly; if that fails we
fall back to the float basis and say so in the returned warning.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .modular import ModularData, SpinAssignment

__all__ = [
    "t_support",
    "support_cells",
    "CommutantBasis",
    "commutant_basis",
    "enumerate_invariants",
    "brute_force_enumerate",
    "is_invariant",
]

RANK_TOL = 1e-9
EXACT_TOL = 1e-8
FINAL_TOL = 1e-7
INT_TOL = 1e-6
MAX_DEN = 10 ** 6


def t_support(spins: SpinAssignment) -> List[List[int]]:
    """Partition the labels into classes of equal exact weight mod 1."""
    groups: Dict[Fraction, List[int]] = {}
    for i, h in enumerate(spins.h):
        groups.setdefault(h, []).append(i)
    return sorted(groups.values())


def support_cells(spins: SpinAssignment) -> List[Tuple[int, int]]:
    """Cells (l, m) with h_l = h_m, sorted, vacuum cell first."""
    cells = [
        (i, j) for cls in t_support(spins) for i in cls for j in cls
    ]
    return sorted(cells)


@dataclass
class CommutantBasis:
    """Echelonized basis of the commutant restricted to the T-support.

    kind is "modular" (commutant of S) or "Y-commutant" (degenerate
    data, Y replaces S).  mats is the float basis stacked (r, m, m);
    exact_rows holds the rationalized echelon rows over `cells` when the
    reconstruction verified, else None and `warning` explains.
    """

    kind: str
    cells: List[Tuple[int, int]]
    pivot_cells: List[Tuple[int, int]]
    mats: np.ndarray
    exact_rows: Optional[List[List[Fraction]]]
    warning: Optional[str] = None

    @property
    def r(self) -> int:
        return int(self.mats.shape[0])

    @property
    def exact(self) -> bool:
        return self.exact_rows is not None


def _commutation_matrix(K: np.ndarray, cells: Sequence[Tuple[int, int]]) -> np.ndarray:
    """Columns flatten K E_c - E_c K for the unit matrix of each cell."""
    m = K.shape[0]
    A = np.zeros((m * m, len(cells)), dtype=complex)
    for c, (l, mu) in enumerate(cells):
        col = np.zeros((m, m), dtype=complex)
        col[:, mu] += K[:, l]
        col[l, :] -= K[mu, :]
        A[:, c] = col.ravel()
    return A


def _rref(rows: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    R = rows.copy()
    nr, nc = R.shape
    pivots: List[int] = []
    row = 0
    for col in range(nc):
        if row >= nr:
            break
        piv = row + int(np.argmax(np.abs(R[row:, col])))
        if abs(R[piv, col]) < 1e-8:
            continue
        R[[row, piv]] = R[[piv, row]]
        R[row] = R[row] / R[row, col]
        for rr in range(nr):
            if rr != row:
                R[rr] = R[rr] - R[rr, col] * R[row]
        pivots.append(col)
        row += 1
    R = R[:row]
    R[np.abs(R) < 1e-10] = 0.0
    return R, pivots


def commutant_basis(md: ModularData, rank_tol: float = RANK_TOL) -> CommutantBasis:
    """Deterministic echelon basis of {Z real : KZ = ZK, supp Z in cells}.

    K is S for nondegenerate data and Y otherwise.
    """
    if md.nondegenerate and md.S is not None:
        K, kind = md.S, "modular"
    else:
        K, kind = md.Y, "Y-commutant"
    m = K.shape[0]
    cells = support_cells(md.spins)
    A = _commutation_matrix(K, cells)
    Ar = np.vstack([A.real, A.imag])
    _, s, Vh = np.linalg.svd(Ar, full_matrices=False)
    cut = rank_tol * max(float(s[0]) if len(s) else 0.0, 1.0)
    null = Vh[s < cut]
    if null.shape[0] == 0:
        return CommutantBasis(kind, cells, [], np.zeros((0, m, m)), [], None)

    R, piv_idx = _rref(null)
    pivot_cells = [cells[c] for c in piv_idx]

    # A value is accepted as exact only when two reconstructions with very
    # different denominator caps agree; an irrational entry fails this.
    exact_rows: Optional[List[List[Fraction]]] = []
    for row in R:
        ex_row: List[Fraction] = []
        for x in row:
            f1 = Fraction(float(x)).limit_denominator(10 ** 4)
            f2 = Fraction(float(x)).limit_denominator(MAX_DEN)
            if f1 != f2 or abs(float(f1) - float(x)) > 1e-9:
                exact_rows = None
                break
            ex_row.append(f1)
        if exact_rows is None:
            break
        exact_rows.append(ex_row)
    warning = None
    if exact_rows is None:
        warning = "rationalization failed; using float basis"
        basis_rows = R
    else:
        basis_rows = np.array(
            [[float(f) for f in row] for row in exact_rows], dtype=float
        )

    mats = np.zeros((basis_rows.shape[0], m, m))
    for i, row in enumerate(basis_rows):
        for val, (l, mu) in zip(row, cells):
            mats[i, l, mu] = val

    scale = max(1.0, float(np.linalg.norm(K)))
    worst = max(
        float(np.linalg.norm(K @ B - B @ K)) for B in mats
    )
    if exact_rows is not None and worst > EXACT_TOL * scale:
        exact_rows = None
        warning = "rationalized basis failed commutation recheck; using float basis"
        mats = np.zeros((R.shape[0], m, m))
        for i, row in enumerate(R):
            for val, (l, mu) in zip(row, cells):
                mats[i, l, mu] = val

    return CommutantBasis(kind, cells, pivot_cells, mats, exact_rows, warning)


def _final_tol(md: ModularData, kind: str) -> float:
    if kind == "modular":
        return FINAL_TOL
    K = md.Y
    return FINAL_TOL * max(1.0, float(np.linalg.norm(K)))


def enumerate_invariants(
    md: ModularData, node_cap: int = 10 ** 8
) -> List[np.ndarray]:
    """All physical invariants: integer Z >= 0, Z_00 = 1, [S, Z] = 0,
    supp Z in the T-support, Z_lm <= d_l d_m, sum Z <= w.

    Output is sorted by the flattened rows, so runs are reproducible.
    """
    basis = commutant_basis(md)
    r = basis.r
    ring = md.ring
    m = ring.size
    if r == 0:
        return []
    if not basis.pivot_cells or basis.pivot_cells[0] != (0, 0):
        raise RuntimeError("echelon basis does not pivot on the vacuum cell")

    d = ring.d
    w = md.w
    dd = np.outer(d, d).ravel()
    K = md.S if basis.kind == "modular" else md.Y
    tol = _final_tol(md, basis.kind)

    ranges: List[range] = [range(1, 2)]
    total = 1
    for l, mu in basis.pivot_cells[1:]:
        b = int(math.floor(d[l] * d[mu] + 1e-9))
        ranges.append(range(0, b + 1))
        total *= b + 1
        if total > node_cap:
            raise RuntimeError(
                f"search space exceeds {node_cap:.0e} candidate assignments"
            )

    Bf = basis.mats.reshape(r, m * m)
    out: List[np.ndarray] = []
    combos = itertools.product(*ranges)
    while True:
        block = list(itertools.islice(combos, 4096))
        if not block:
            break
        A = np.asarray(block, dtype=float)
        Zs = A @ Bf
        Zr = np.round(Zs)
        ok = np.all(np.abs(Zs - Zr) < INT_TOL, axis=1)
        ok &= np.all(Zr >= 0.0, axis=1)
        ok &= np.all(Zr <= dd[None, :] + 1e-9, axis=1)
        ok &= Zr.sum(axis=1) <= w + 1e-6
        for idx in np.nonzero(ok)[0]:
            Z = Zr[idx].reshape(m, m).astype(int)
            if basis.exact_rows is not None and not _exact_integral(
                basis, [int(x) for x in block[idx]], Z
            ):
                continue
            if np.linalg.norm(K @ Z - Z @ K) >= tol:
                continue
            out.append(Z)
    out.sort(key=lambda Z: tuple(Z.ravel()))
    return out


def _exact_integral(
    basis: CommutantBasis, coeffs: List[int], Z: np.ndarray
) -> bool:
    """Recheck sum a_i B_i over the exact rows: integral and equal to Z."""
    assert basis.exact_rows is not None
    for c, (l, mu) in enumerate(basis.cells):
        v = sum(a * row[c] for a, row in zip(coeffs, basis.exact_rows))
        if v.denominator != 1 or int(v) != int(Z[l, mu]):
            return False
    return True


def brute_force_enumerate(
    md: ModularData, node_cap: int = 10 ** 7
) -> List[np.ndarray]:
    """Reference oracle: direct search over all T-support cell values.

    Independent of the commutant computation; intended for small models
    to cross-check enumerate_invariants.
    """
    ring = md.ring
    m = ring.size
    d = ring.d
    w = md.w
    cells = support_cells(md.spins)
    if md.nondegenerate and md.S is not None:
        K, kind = md.S, "modular"
    else:
        K, kind = md.Y, "Y-commutant"
    tol = _final_tol(md, kind)

    bounds = []
    total = 1
    for l, mu in cells:
        b = 1 if (l, mu) == (0, 0) else int(math.floor(d[l] * d[mu] + 1e-9))
        bounds.append(b)
        if (l, mu) != (0, 0):
            total *= b + 1
            if total > node_cap:
                raise RuntimeError(
                    f"brute-force space exceeds {node_cap:.0e} assignments"
                )

    out: List[np.ndarray] = []
    Z = np.zeros((m, m), dtype=int)

    def rec(pos: int, acc: float) -> None:
        if pos == len(cells):
            if np.linalg.norm(K @ Z - Z @ K) < tol:
                out.append(Z.copy())
            return
        l, mu = cells[pos]
        lo = 1 if (l, mu) == (0, 0) else 0
        for v in range(lo, bounds[pos] + 1):
            if acc + v > w + 1e-6:
                break
            Z[l, mu] = v
            rec(pos + 1, acc + v)
        Z[l, mu] = 0

    rec(0, 0.0)
    out.sort(key=lambda M: tuple(M.ravel()))
    return out


def is_invariant(
    md: ModularData, Z: np.ndarray, tol: float = FINAL_TOL
) -> Tuple[bool, Dict[str, object]]:
    """Check one matrix against the physical-invariant conditions.

    Returns (flag, report) where report carries the individual residuals
    and booleans.
    """
    ring = md.ring
    m = ring.size
    Z = np.asarray(Z)
    if Z.shape != (m, m):
        raise ValueError("matrix shape does not match the model")
    d = ring.d
    cells = set(support_cells(md.spins))
    if md.nondegenerate and md.S is not None:
        K, kind = md.S, "modular"
    else:
        K, kind = md.Y, "Y-commutant"

    rep: Dict[str, object] = {"kind": kind}
    rep["integer"] = bool(np.all(Z == np.round(Z)))
    rep["nonnegative"] = bool(np.all(Z >= 0))
    rep["vacuum"] = bool(abs(Z[0, 0] - 1) < 1e-12)
    supp = [tuple(int(x) for x in p) for p in np.argwhere(Z != 0)]
    rep["t_support"] = all(p in cells for p in supp)
    rep["pf_bounds"] = bool(np.all(Z <= np.outer(d, d) + 1e-9))
    rep["sum_bound"] = bool(Z.sum() <= md.w + 1e-6)
    rep["commutation"] = float(np.linalg.norm(K @ Z - Z @ K))
    ok = (
        rep["integer"]
        and rep["nonnegative"]
        and rep["vacuum"]
        and rep["t_support"]
        and rep["pf_bounds"]
        and rep["sum_bound"]
        and rep["commutation"] < (tol if kind == "modular" else _final_tol(md, kind))
    )
    return bool(ok), rep
