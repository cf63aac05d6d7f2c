"""Fusion graphs: A-D-E and tadpole catalog, su(2) nimreps, spectra,
orbifold quotients, and the frozen 32-vertex graph pair of the su(4)_6
conformal-inclusion system.

A nimrep assigns to every label a nonnegative integer matrix so that
the assignment reproduces the fusion rules; for su(2) the whole tower
is generated from the graph adjacency by the Chebyshev recursion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import _pzdata
from .catalog import su2_model
from .modular import ModularData

__all__ = [
    "Graph",
    "graph_catalog",
    "su2_nimrep_from_graph",
    "spectrum_match",
    "ade_assignment",
    "TadpoleRecord",
    "tadpole_exclusion",
    "orbifold_quotient",
    "pz_graph",
    "pz_second_generator",
    "pz_translation",
    "pz_quotient_reference",
]

PF_TOL = 1e-6


@dataclass
class Graph:
    """A finite multigraph given by its integer adjacency matrix."""

    adjacency: np.ndarray
    names: List[str]
    grading: Optional[List[int]] = None
    name: str = ""

    def __post_init__(self):
        self.adjacency = np.asarray(self.adjacency, dtype=int)
        n = self.adjacency.shape[0]
        if self.adjacency.shape != (n, n) or len(self.names) != n:
            raise ValueError("adjacency/names size mismatch")

    @property
    def size(self) -> int:
        return self.adjacency.shape[0]

    def pf_eigenvalue(self) -> float:
        return float(np.max(np.abs(np.linalg.eigvals(self.adjacency.astype(float)))))

    def pf_vector(self) -> np.ndarray:
        """Positive eigenvector of A + A^T for the largest eigenvalue."""
        Asym = (self.adjacency + self.adjacency.T).astype(float) / 2.0
        vals, vecs = np.linalg.eigh(Asym)
        v = vecs[:, -1]
        if v.sum() < 0:
            v = -v
        return v


def graph_catalog(family: str, n: int) -> Graph:
    """Dynkin-type graphs: A_n, D_n (n >= 4), E_6/E_7/E_8, tadpole T_n.

    T_n is the path on n vertices with a loop attached at the last one;
    the D series starts at D_4 (D_3 coincides with A_3 and is not
    listed separately).
    """
    family = family.upper()
    if family == "A":
        if n < 1:
            raise ValueError("A_n needs n >= 1")
        A = np.zeros((n, n), dtype=int)
        for i in range(n - 1):
            A[i, i + 1] = A[i + 1, i] = 1
    elif family == "D":
        if n < 4:
            raise ValueError("D_n needs n >= 4")
        A = np.zeros((n, n), dtype=int)
        for i in range(n - 3):
            A[i, i + 1] = A[i + 1, i] = 1
        A[n - 3, n - 2] = A[n - 2, n - 3] = 1
        A[n - 3, n - 1] = A[n - 1, n - 3] = 1
    elif family == "E":
        if n not in (6, 7, 8):
            raise ValueError("E_n needs n in {6, 7, 8}")
        A = np.zeros((n, n), dtype=int)
        for i in range(n - 2):
            A[i, i + 1] = A[i + 1, i] = 1
        A[2, n - 1] = A[n - 1, 2] = 1
    elif family == "T":
        if n < 1:
            raise ValueError("T_n needs n >= 1")
        A = np.zeros((n, n), dtype=int)
        for i in range(n - 1):
            A[i, i + 1] = A[i + 1, i] = 1
        A[n - 1, n - 1] = 1
    else:
        raise ValueError(f"unknown graph family '{family}'")
    return Graph(A, [str(i) for i in range(n)], name=f"{family}{n}")


def su2_nimrep_from_graph(k: int, graph: Graph) -> Optional[List[np.ndarray]]:
    """Chebyshev tower G_0..G_k over the graph, or None if it fails.

    Requires the Perron-Frobenius eigenvalue to match 2 cos(pi/(k+2));
    the recursion G_{j+1} = G_1 G_j - G_{j-1} must stay nonnegative and
    the full tower must represent the su(2)_k fusion rules.
    """
    A = graph.adjacency
    target = 2.0 * math.cos(math.pi / (k + 2))
    if abs(graph.pf_eigenvalue() - target) > PF_TOL:
        return None
    n = A.shape[0]
    mats = [np.eye(n, dtype=int), A.copy()]
    for _ in range(2, k + 1):
        nxt = A @ mats[-1] - mats[-2]
        if np.any(nxt < 0):
            return None
        mats.append(nxt)
    N = su2_model(k).ring.N
    lhs = np.einsum("iab,jbc->ijac", np.stack(mats), np.stack(mats))
    rhs = np.einsum("ijn,nac->ijac", N, np.stack(mats))
    if not np.array_equal(lhs, rhs):
        return None
    return mats


def _sorted_eigs(M: np.ndarray) -> np.ndarray:
    vals = np.linalg.eigvals(M.astype(complex))
    order = np.lexsort((np.round(vals.imag, 8), np.round(vals.real, 8)))
    return vals[order]


def spectrum_match(
    mats: Sequence[np.ndarray],
    S: np.ndarray,
    Z: np.ndarray,
    tol: float = PF_TOL,
    labels: Optional[Sequence[int]] = None,
) -> Tuple[bool, Dict[str, object]]:
    """Eigenvalues of each G_lam must be {S_{lam rho}/S_{0 rho}} with
    multiplicities Z_{rho rho}; graph size must equal tr Z.

    mats[i] is checked against label labels[i] (default: label i).
    """
    Z = np.asarray(Z)
    n = mats[0].shape[0]
    trace = int(np.trace(Z))
    info: Dict[str, object] = {"size": n, "trace": trace}
    if n != trace:
        info["reason"] = "vertex count differs from tr Z"
        return False, info
    m = S.shape[0]
    diag = [int(Z[r, r]) for r in range(m)]
    if labels is None:
        labels = list(range(len(mats)))
    for mat, lam in zip(mats, labels):
        expect = []
        for rho in range(m):
            expect.extend([S[lam, rho] / S[0, rho]] * diag[rho])
        expect = np.asarray(expect, dtype=complex)
        order = np.lexsort((np.round(expect.imag, 8), np.round(expect.real, 8)))
        expect = expect[order]
        got = _sorted_eigs(mat)
        if len(got) != len(expect) or np.max(np.abs(got - expect)) > tol:
            info["reason"] = f"spectrum mismatch at label {lam}"
            return False, info
    return True, info


def ade_assignment(md: ModularData, Z: np.ndarray) -> List[Graph]:
    """Graphs in the catalog whose nimrep spectrum matches diag Z.

    Scans A_{k+1}, D_{(k+4)/2} for even k >= 4, the three E graphs at
    their levels, and T_{(k+1)/2} for odd k.
    """
    k = md.ring.size - 1
    if md.S is None:
        raise ValueError("spectrum assignment needs nondegenerate data")
    cands: List[Graph] = [graph_catalog("A", k + 1)]
    if k % 2 == 0 and k >= 4:
        cands.append(graph_catalog("D", (k + 4) // 2))
    if k == 10:
        cands.append(graph_catalog("E", 6))
    if k == 16:
        cands.append(graph_catalog("E", 7))
    if k == 28:
        cands.append(graph_catalog("E", 8))
    if k % 2 == 1:
        cands.append(graph_catalog("T", (k + 1) // 2))
    out: List[Graph] = []
    for g in cands:
        mats = su2_nimrep_from_graph(k, g)
        if mats is None:
            continue
        ok, _ = spectrum_match(mats, md.S, Z)
        if ok:
            out.append(g)
    return out


@dataclass
class TadpoleRecord:
    """Why the tadpole graph fails as a physical graph at odd level k."""

    k: int
    ell: int
    pf_weights: np.ndarray
    extremal_weight: float
    forces_index_two: bool
    current_weight: Fraction
    current_integral: bool
    excluded: bool


def tadpole_exclusion(k: int) -> TadpoleRecord:
    """T_{(k+1)/2} at odd level k: the extremal vertex has weight
    sqrt(2), demanding an index-2 extension, but 2 h_k is not an
    integer, so no such extension exists and the graph is excluded."""
    if k % 2 == 0:
        raise ValueError("tadpole candidates occur at odd level only")
    ell = (k + 1) // 2
    g = graph_catalog("T", ell)
    v = g.pf_vector()
    spec = su2_model(k)
    w = spec.ring.global_index
    v = v * math.sqrt(w / float(v @ v))
    extremal = float(v[0])
    forces = abs(extremal - math.sqrt(2.0)) < PF_TOL
    hk = spec.spins.h[k]
    integral = (2 * hk).denominator == 1
    return TadpoleRecord(
        k=k,
        ell=ell,
        pf_weights=v,
        extremal_weight=extremal,
        forces_index_two=forces,
        current_weight=hk,
        current_integral=integral,
        excluded=forces and not integral,
    )


def orbifold_quotient(graph: Graph, sigma: Sequence[int]) -> Graph:
    """Quotient of a graph by a cyclic automorphism.

    Free orbits collapse to single vertices (orbit-summed adjacency);
    each fixed vertex splits into m copies, m the automorphism order,
    with the per-representative adjacency to the free part.  Orbits of
    intermediate size, or adjacency between fixed vertices, are outside
    the rule and raise ValueError.
    """
    A = graph.adjacency
    n = A.shape[0]
    sig = np.asarray(sigma, dtype=int)
    if sorted(sig.tolist()) != list(range(n)):
        raise ValueError("sigma is not a permutation")
    if not np.array_equal(A[np.ix_(sig, sig)], A):
        raise ValueError("sigma is not a graph automorphism")

    seen = [False] * n
    orbits: List[List[int]] = []
    for v in range(n):
        if seen[v]:
            continue
        orb = [v]
        seen[v] = True
        x = int(sig[v])
        while x != v:
            orb.append(x)
            seen[x] = True
            x = int(sig[x])
        orbits.append(orb)

    m = 1
    for orb in orbits:
        m = math.lcm(m, len(orb))
    if m == 1:
        return Graph(A.copy(), list(graph.names), name=f"{graph.name}/1")
    for orb in orbits:
        if len(orb) not in (1, m):
            raise ValueError(
                f"orbit of size {len(orb)} under automorphism of order {m}"
            )

    free = [orb for orb in orbits if len(orb) == m]
    fixed = [orb[0] for orb in orbits if len(orb) == 1]
    for u in fixed:
        for v in fixed:
            if A[u, v] != 0:
                raise ValueError("adjacent fixed vertices: quotient rule undefined")

    nodes: List[Tuple[str, object]] = [("free", orb) for orb in free]
    nodes += [("fixed", (v, t)) for v in fixed for t in range(m)]
    names: List[str] = []
    for kind, data in nodes:
        if kind == "free":
            names.append(graph.names[data[0]])
        else:
            v, t = data
            names.append(f"{graph.names[v]}:{t}")

    q = len(nodes)
    Q = np.zeros((q, q), dtype=int)
    for a, (ka, da) in enumerate(nodes):
        for b, (kb, db) in enumerate(nodes):
            if ka == "free" and kb == "free":
                rep = da[0]
                Q[a, b] = int(sum(A[rep, v] for v in db))
            elif ka == "free" and kb == "fixed":
                Q[a, b] = int(A[da[0], db[0]])
            elif ka == "fixed" and kb == "free":
                Q[a, b] = int(A[da[0], db[0]])
    return Graph(Q, names, name=f"{graph.name}/{m}")


# ---------------------------------------------------------------------------
# frozen 32-vertex pair

def pz_graph() -> Graph:
    """Fusion action of the first fundamental generator, 32 vertices."""
    return Graph(
        np.array(_pzdata.PZ_ADJ_100, dtype=int),
        list(_pzdata.PZ_NODE_NAMES),
        grading=list(_pzdata.PZ_FOURALITY),
        name="pz_32",
    )


def pz_second_generator() -> Graph:
    """Fusion action of the second fundamental generator on the same vertices."""
    return Graph(
        np.array(_pzdata.PZ_ADJ_010, dtype=int),
        list(_pzdata.PZ_NODE_NAMES),
        grading=list(_pzdata.PZ_FOURALITY),
        name="pz_32_second",
    )


def pz_translation() -> np.ndarray:
    """The order-5 translation acting freely outside the central pair."""
    return np.array(_pzdata.PZ_TRANSLATION, dtype=int)


def pz_quotient_reference() -> Graph:
    """The 16-vertex quotient graph (free orbits plus split central pair)."""
    return Graph(
        np.array(_pzdata.PZ_QUOTIENT_ADJ, dtype=int),
        list(_pzdata.PZ_QUOTIENT_NAMES),
        name="pz_16",
    )
