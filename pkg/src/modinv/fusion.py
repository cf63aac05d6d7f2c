"""Commutative fusion rings over the nonnegative integers.

A fusion ring is given by a finite label set with distinguished vacuum 0,
a tensor N[lam, mu, nu] = N_{lam mu}^nu of nonnegative integer structure
constants and a conjugation involution.  Everything downstream (modular
data, invariant enumeration) consumes the interface defined here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

__all__ = [
    "SectorLabel",
    "FusionRing",
    "SimpleCurrentGroup",
    "quantum_dimensions",
    "verify_axioms",
    "frobenius_violations",
    "simple_currents",
]

DIM_TOL = 1e-9
CURRENT_TOL = 1e-6


@dataclass(frozen=True)
class SectorLabel:
    """A sector: position in the canonical ordering plus a display name."""

    index: int
    name: str

    def __str__(self) -> str:
        return self.name


class FusionRing:
    """Fusion ring on labels 0..m-1 with vacuum at position 0.

    N has shape (m, m, m) with N[lam, mu, nu] = N_{lam mu}^nu.  conj is
    the conjugation permutation; if omitted it is read off from the
    vacuum slice N[., ., 0].
    """

    def __init__(
        self,
        names: Sequence[str],
        N: np.ndarray,
        conj: Optional[Sequence[int]] = None,
    ):
        self.labels: List[SectorLabel] = [
            SectorLabel(i, str(nm)) for i, nm in enumerate(names)
        ]
        self.N = np.asarray(N, dtype=int)
        m = len(self.labels)
        if self.N.shape != (m, m, m):
            raise ValueError(
                f"fusion tensor shape {self.N.shape} does not match {m} labels"
            )
        if conj is None:
            conj = _conjugation_from_tensor(self.N)
        self.conj = np.asarray(conj, dtype=int)
        if sorted(self.conj.tolist()) != list(range(m)):
            raise ValueError("conjugation is not a permutation")
        self._d: Optional[np.ndarray] = None

    @property
    def size(self) -> int:
        return len(self.labels)

    def fusion_matrix(self, lam: int) -> np.ndarray:
        """(N_lam)_{mu nu} = N_{lam mu}^nu as an integer matrix."""
        if not 0 <= lam < self.size:
            raise IndexError(f"label {lam} out of range")
        return self.N[lam]

    @property
    def d(self) -> np.ndarray:
        """Quantum dimensions (cached)."""
        if self._d is None:
            self._d = quantum_dimensions(self)
        return self._d

    @property
    def global_index(self) -> float:
        """w = sum of squared quantum dimensions."""
        return float(np.sum(self.d ** 2))

    def __repr__(self) -> str:
        return f"FusionRing(m={self.size})"


def _conjugation_from_tensor(N: np.ndarray) -> np.ndarray:
    """Read conj off the vacuum slice: N_{lam mu}^0 = delta_{mu, conj(lam)}."""
    m = N.shape[0]
    conj = np.full(m, -1, dtype=int)
    for lam in range(m):
        hits = np.nonzero(N[lam, :, 0])[0]
        if len(hits) != 1 or N[lam, hits[0], 0] != 1:
            raise ValueError(f"vacuum slice does not define a conjugation at {lam}")
        conj[lam] = hits[0]
    return conj


def quantum_dimensions(ring: FusionRing, tol: float = DIM_TOL) -> np.ndarray:
    """Common Perron-Frobenius eigenvector of all fusion matrices.

    Returns d with d[0] = 1 and N_lam d = d_lam d for every lam, up to a
    residual below tol.  Raises ValueError for an ill-conditioned ring.
    """
    N = ring.N
    M = N.sum(axis=0).astype(float)
    try:
        vals, vecs = np.linalg.eig(M)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"ill-conditioned fusion ring: {exc}") from None
    i = int(np.argmax(vals.real))
    v = vecs[:, i].real
    if abs(v[0]) < 1e-12:
        raise ValueError("ill-conditioned fusion ring: PF vector vanishes at vacuum")
    d = v / v[0]
    # Polish with one Rayleigh-style pass to reduce eig() roundoff.
    for _ in range(2):
        u = M @ d
        d = u / u[0]
    resid = float(np.max(np.abs(np.einsum("lmn,n->lm", N, d) - np.outer(d, d))))
    if resid > tol:
        raise ValueError(
            f"ill-conditioned fusion ring: PF residual {resid:.3e} exceeds {tol:.1e}"
        )
    return d


def _first_bad(mask: np.ndarray, limit: int = 3) -> List[Tuple[int, ...]]:
    idx = np.argwhere(mask)
    return [tuple(int(x) for x in row) for row in idx[:limit]]


def verify_axioms(ring: FusionRing) -> List[str]:
    """Check the fusion-ring axioms; return a list of violation messages.

    Empty list means the ring passed.  Checks: integrality/nonnegativity,
    vacuum acts as identity, commutativity, associativity, conjugation is
    an involution fixing the vacuum and matching the vacuum slice, and
    the quantum dimensions exist with d >= 1.
    """
    out: List[str] = []
    N = ring.N
    m = ring.size

    if np.any(N < 0):
        out.append(f"negative structure constants at {_first_bad(N < 0)}")

    eye = np.eye(m, dtype=int)
    if not np.array_equal(N[0], eye):
        out.append("vacuum is not a left identity")
    if not np.array_equal(N[:, 0, :], eye):
        out.append("vacuum is not a right identity")

    comm = N != N.transpose(1, 0, 2)
    if np.any(comm):
        out.append(f"commutativity fails at {_first_bad(comm)}")

    lhs = np.einsum("lms,snr->lmnr", N, N, optimize=True)
    rhs = np.einsum("mns,lsr->lmnr", N, N, optimize=True)
    if np.any(lhs != rhs):
        out.append(f"associativity fails at {_first_bad(lhs != rhs)}")

    c = ring.conj
    if c[0] != 0:
        out.append("conjugation does not fix the vacuum")
    if not np.array_equal(c[c], np.arange(m)):
        out.append("conjugation is not an involution")
    pair = np.zeros((m, m), dtype=int)
    pair[np.arange(m), c] = 1
    if not np.array_equal(N[:, :, 0], pair):
        out.append("vacuum slice N_{lam mu}^0 != delta_{mu, conj(lam)}")

    try:
        d = quantum_dimensions(ring)
        if np.any(d < 1.0 - DIM_TOL):
            out.append(f"quantum dimension below 1 at {_first_bad(d < 1.0 - DIM_TOL)}")
    except ValueError as exc:
        out.append(str(exc))

    return out


def frobenius_violations(ring: FusionRing) -> List[Tuple[int, int, int]]:
    """Triples where N_{lam mu}^nu != N_{conj(lam) nu}^mu.

    Reciprocity holds automatically for the catalog rings; a nonempty
    result is a warning sign for hand-entered data, not a hard error.
    """
    N = ring.N
    c = ring.conj
    recip = N[c][:, :, :].transpose(0, 2, 1)
    return _first_bad(N != recip, limit=10)


@dataclass
class SimpleCurrentGroup:
    """Abelian group of simple currents inside a fusion ring.

    elements are ring labels (vacuum first), table[i, j] is the position
    in `elements` of the product of elements[i] and elements[j], and
    cyclic_factors lists (generator label, order) for a decomposition
    into cyclic subgroups, largest order first.
    """

    elements: List[int]
    table: np.ndarray
    orders: List[int]
    cyclic_factors: List[Tuple[int, int]]

    @property
    def order(self) -> int:
        return len(self.elements)


def simple_currents(ring: FusionRing, tol: float = CURRENT_TOL) -> SimpleCurrentGroup:
    """Detect the simple currents (d_sigma = 1) and their group structure.

    Each current must act as a permutation (fusion with it is free); the
    currents must close under product and conjugation.  The cyclic
    decomposition is greedy on element order and is validated by
    comparing the product of the factor orders with the group order.
    """
    d = ring.d
    elems = [i for i in range(ring.size) if abs(d[i] - 1.0) < tol]
    pos = {g: k for k, g in enumerate(elems)}
    n = len(elems)

    for g in elems:
        A = ring.N[g]
        if not (np.all(A.sum(axis=1) == 1) and A.max() == 1):
            raise ValueError(f"simple current {g} does not act as a permutation")

    table = np.full((n, n), -1, dtype=int)
    for i, g in enumerate(elems):
        for j, h in enumerate(elems):
            prod = int(np.nonzero(ring.N[g, h])[0][0])
            if prod not in pos:
                raise ValueError("simple currents do not close under fusion")
            table[i, j] = pos[prod]
    for g in elems:
        if int(ring.conj[g]) not in pos:
            raise ValueError("simple currents do not close under conjugation")

    def elt_order(i: int) -> int:
        k, x = 1, i
        while x != 0:
            x = int(table[x, i])
            k += 1
        return k

    orders = [elt_order(pos[g]) for g in elems]

    factors: List[Tuple[int, int]] = []
    span = {0}
    while len(span) < n:
        best = None
        for i in range(n):
            if i in span:
                continue
            powers = []
            x = i
            while x != 0:
                powers.append(x)
                x = int(table[x, i])
            if any(p in span for p in powers):
                continue
            if best is None or len(powers) + 1 > best[1]:
                best = (i, len(powers) + 1, powers)
        if best is None:
            raise ValueError("no cyclic decomposition found for the current group")
        i, k, powers = best
        factors.append((elems[i], k))
        closure = set(span)
        for s in span:
            for p in powers:
                closure.add(int(table[s, p]))
        span = closure

    prod_orders = 1
    for _, k in factors:
        prod_orders *= k
    if prod_orders != n:
        raise ValueError("cyclic decomposition does not exhaust the group")

    return SimpleCurrentGroup(
        elements=elems, table=table, orders=orders, cyclic_factors=factors
    )
