"""Modular data attached to a fusion ring with exact conformal weights.

The construction is entirely internal: from the ring and spins h we form
the diagonal phase matrix Omega, the Y-tensor

    Y_{lam mu} = sum_rho (w_lam w_mu / w_rho) N_{lam mu}^rho d_rho,

the Gauss sum z = sum d^2 w, and (when z != 0) the central charge, S and
T.  Spins are stored as exact Fractions so that equality of phases is
decidable; all matrix data is floating point.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .fusion import FusionRing

__all__ = [
    "SpinAssignment",
    "ModelSpec",
    "ModularData",
    "statistics_phase",
    "build",
    "is_nondegenerate",
    "verlinde_check",
    "degenerate_sectors",
    "tensor_product",
    "relation_residuals",
]

GAUSS_TOL = 1e-6
UNITARITY_TOL = 1e-9
DEGENERATE_TOL = 1e-6


def _mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True)
class SpinAssignment:
    """Exact conformal weights, one Fraction per label, reduced mod 1."""

    h: Tuple[Fraction, ...]

    def __init__(self, h: Sequence[Fraction]):
        object.__setattr__(
            self, "h", tuple(_mod1(Fraction(x)) for x in h)
        )

    def __len__(self) -> int:
        return len(self.h)


def statistics_phase(spins: SpinAssignment, lam: int) -> complex:
    """w_lam = exp(2 pi i h_lam)."""
    h = spins.h[lam]
    return cmath.exp(2j * math.pi * float(h))


@dataclass
class ModelSpec:
    """A fusion ring plus a spin assignment; input to build()."""

    ring: FusionRing
    spins: SpinAssignment
    name: str = ""

    def __post_init__(self):
        if len(self.spins) != self.ring.size:
            raise ValueError("spin assignment length does not match ring size")
        if self.spins.h[0] != 0:
            raise ValueError("vacuum weight must vanish")
        for lam in range(self.ring.size):
            if self.spins.h[lam] != self.spins.h[int(self.ring.conj[lam])]:
                raise ValueError(f"weights not conjugation symmetric at {lam}")


@dataclass
class ModularData:
    """Output of build(): Omega, Y, z, and (if z != 0) c, S, T.

    For a degenerate model (vanishing Gauss sum, or failed unitarity /
    charge-conjugation extraction) S, T, c are None and `nondegenerate`
    is False; Y and Omega are always available.
    """

    spec: ModelSpec
    Omega: np.ndarray
    Y: np.ndarray
    z: complex
    c: Optional[float]
    S: Optional[np.ndarray]
    T: Optional[np.ndarray]
    C: np.ndarray
    nondegenerate: bool
    w: float
    degenerate_reason: Optional[str] = None

    @property
    def ring(self) -> FusionRing:
        return self.spec.ring

    @property
    def spins(self) -> SpinAssignment:
        return self.spec.spins

    @property
    def name(self) -> str:
        return self.spec.name

    @property
    def omega(self) -> np.ndarray:
        """Diagonal of Omega as a vector."""
        return np.diag(self.Omega)


def _charge_conjugation_from_s(S: np.ndarray, tol: float = UNITARITY_TOL) -> Optional[np.ndarray]:
    """Extract the permutation matrix C = S^2, or None if S^2 is not one."""
    m = S.shape[0]
    S2 = S @ S
    C = np.zeros((m, m), dtype=int)
    for i in range(m):
        row = S2[i]
        j = int(np.argmax(np.abs(row)))
        e = np.zeros(m)
        e[j] = 1.0
        if np.max(np.abs(row - e)) > tol:
            return None
        C[i, j] = 1
    if not np.array_equal(C.sum(axis=0), np.ones(m, dtype=int)):
        return None
    return C


def _conj_matrix(ring: FusionRing) -> np.ndarray:
    m = ring.size
    C = np.zeros((m, m), dtype=int)
    C[np.arange(m), ring.conj] = 1
    return C


def build(spec: ModelSpec, allow_degenerate: bool = True) -> ModularData:
    """Assemble the modular data of a spec.

    With allow_degenerate=True (default) a vanishing Gauss sum yields a
    ModularData with S = T = c = None; with False it raises ValueError.
    """
    ring = spec.ring
    m = ring.size
    d = ring.d
    w = ring.global_index
    om = np.array([statistics_phase(spec.spins, lam) for lam in range(m)])
    Omega = np.diag(om)
    Y = np.outer(om, om) * (ring.N @ (d / om))
    z = complex(np.sum(d * d * om))

    if abs(z) < 1e-12 * max(w, 1.0):
        if not allow_degenerate:
            raise ValueError("vanishing Gauss sum: c, S, T are undefined")
        return ModularData(
            spec=spec, Omega=Omega, Y=Y, z=z, c=None, S=None, T=None,
            C=_conj_matrix(ring), nondegenerate=False, w=w,
            degenerate_reason="vanishing Gauss sum",
        )

    c = (4.0 * cmath.phase(z) / math.pi) % 8.0
    S = Y / abs(z)
    T = cmath.exp(-1j * math.pi * c / 12.0) * Omega

    gauss_ok = abs(abs(z) ** 2 - w) < GAUSS_TOL * w
    unit_ok = (
        np.linalg.norm(S @ S.conj().T - np.eye(m)) < UNITARITY_TOL * m
    )
    reason = None
    nondeg = gauss_ok and unit_ok
    if nondeg:
        C = _charge_conjugation_from_s(S)
        if C is None:
            nondeg = False
            reason = "S^2 is not a permutation matrix"
            C = _conj_matrix(ring)
    else:
        reason = "Gauss sum modulus mismatch" if not gauss_ok else "S not unitary"
        C = _conj_matrix(ring)

    return ModularData(
        spec=spec, Omega=Omega, Y=Y, z=z, c=c, S=S, T=T, C=C,
        nondegenerate=nondeg, w=w, degenerate_reason=reason,
    )


def is_nondegenerate(md: ModularData) -> Tuple[bool, Dict[str, float]]:
    """Recompute the nondegeneracy residuals from scratch.

    Returns (flag, residuals) with gauss = | |z|^2 - w | and unitarity =
    ||S S^dag - 1||_F (inf when S is undefined).
    """
    resid = {"gauss": abs(abs(md.z) ** 2 - md.w)}
    if md.S is None:
        resid["unitarity"] = math.inf
        return False, resid
    m = md.ring.size
    resid["unitarity"] = float(
        np.linalg.norm(md.S @ md.S.conj().T - np.eye(m))
    )
    flag = resid["gauss"] < GAUSS_TOL * md.w and resid["unitarity"] < UNITARITY_TOL * m
    return flag, resid


def verlinde_check(md: ModularData) -> float:
    """Max deviation of sum_r S_{lr} S_{mr} conj(S_{nr}) / S_{0r} from N.

    Only defined for nondegenerate data.
    """
    if not md.nondegenerate or md.S is None:
        raise ValueError("Verlinde check requires nondegenerate modular data")
    S = md.S
    rec = np.einsum("lr,mr,nr->lmn", S, S, S.conj() / S[0], optimize=True)
    return float(np.max(np.abs(rec - md.ring.N)))


def degenerate_sectors(md: ModularData, tol: float = DEGENERATE_TOL) -> List[int]:
    """Labels lam with Y_{lam mu} = d_lam d_mu for all mu.

    For nondegenerate data this is just the vacuum; extra labels signal
    a transparent sector.
    """
    d = md.ring.d
    dd = np.outer(d, d)
    dev = np.max(np.abs(md.Y - dd), axis=1)
    return [int(i) for i in np.nonzero(dev < tol)[0]]


def tensor_product(a: ModelSpec, b: ModelSpec) -> ModelSpec:
    """Product spec: labels are pairs, N and h add up in the obvious way."""
    ra, rb = a.ring, b.ring
    ma, mb = ra.size, rb.size
    m = ma * mb
    N = np.einsum("ikp,jlq->ijklpq", ra.N, rb.N).reshape(m, m, m)
    names = [
        f"({ra.labels[i].name},{rb.labels[j].name})"
        for i in range(ma)
        for j in range(mb)
    ]
    conj = [int(ra.conj[i]) * mb + int(rb.conj[j]) for i in range(ma) for j in range(mb)]
    ring = FusionRing(names, N, conj)
    h = [
        a.spins.h[i] + b.spins.h[j]
        for i in range(ma)
        for j in range(mb)
    ]
    name = f"{a.name}*{b.name}" if a.name and b.name else ""
    return ModelSpec(ring, SpinAssignment(h), name=name)


def relation_residuals(md: ModularData) -> Dict[str, float]:
    """Frobenius-norm residuals of the defining matrix relations.

    Always reports the Omega-Y relation; the S/T relations, charge
    conjugation and Verlinde deviation are included when the data is
    nondegenerate.
    """
    out: Dict[str, float] = {}
    Om, Y, z = md.Omega, md.Y, md.z
    out["omega_y"] = float(np.linalg.norm(Om @ Y @ Om @ Y @ Om - z * Y))
    if not md.nondegenerate or md.S is None or md.T is None:
        return out
    S, T, C = md.S, md.T, md.C.astype(float)
    ST = S @ T
    S2 = S @ S
    out["st_cube"] = float(np.linalg.norm(ST @ ST @ ST - S2))
    out["s2_conj"] = float(np.linalg.norm(S2 - C))
    out["ct_commute"] = float(np.linalg.norm(C @ T - T @ C))
    out["tstst"] = float(np.linalg.norm(T @ S @ T @ S @ T - S))
    out["verlinde"] = verlinde_check(md)
    out["s_row_positive"] = float(-min(np.min(S[0].real), 0.0) + np.max(np.abs(S[0].imag)))
    return out
