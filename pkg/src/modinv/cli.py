"""Command line front end: model inspection, enumeration, classification,
graph assignment, extension and restriction reports.

Exit codes: 0 on success, 1 on usage errors (bad arguments, unknown
model), 2 when a verification step fails (model validation, oracle
cross-check).  All output is deterministic.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np

from .catalog import (
    BranchingTable,
    branching_catalog,
    model_by_name,
)
from .classify import classify_invariant
from .commutant import brute_force_enumerate, commutant_basis, enumerate_invariants
from .extensions import (
    rehren_admissible,
    restrict,
    so8_restriction_sweep,
    sun_divisor_table,
    theta_vector,
    zn_invariant_table,
)
from .fusion import FusionRing, verify_axioms
from .graphs import Graph, ade_assignment, graph_catalog
from .modular import ModelSpec, SpinAssignment, build, relation_residuals

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2


# ---------------------------------------------------------------------------
# serialization

def model_to_json(spec: ModelSpec) -> Dict[str, object]:
    """Portable model description: labels with exact weights, sparse
    fusion tensor, conjugation permutation."""
    ring = spec.ring
    fusion = [
        [int(l), int(m), int(n), int(ring.N[l, m, n])]
        for l, m, n in np.argwhere(ring.N != 0)
    ]
    return {
        "name": spec.name,
        "labels": [
            {"index": i, "name": ring.labels[i].name, "h": str(spec.spins.h[i])}
            for i in range(ring.size)
        ],
        "fusion": fusion,
        "conjugation": [int(x) for x in ring.conj],
    }


def model_from_json(data: Dict[str, object]) -> ModelSpec:
    """Inverse of model_to_json; the ring axioms are re-verified."""
    labels = data["labels"]
    m = len(labels)
    names = [str(l["name"]) for l in sorted(labels, key=lambda l: int(l["index"]))]
    N = np.zeros((m, m, m), dtype=int)
    for l, mu, nu, mult in data["fusion"]:
        N[int(l), int(mu), int(nu)] = int(mult)
    ring = FusionRing(names, N, conj=[int(x) for x in data["conjugation"]])
    problems = verify_axioms(ring)
    if problems:
        raise ValueError("; ".join(problems))
    h = [Fraction(str(l["h"])) for l in sorted(labels, key=lambda l: int(l["index"]))]
    return ModelSpec(ring, SpinAssignment(h), name=str(data.get("name", "")))


def matrix_to_json(Z: np.ndarray) -> List[List[int]]:
    return [[int(x) for x in row] for row in np.asarray(Z)]


# ---------------------------------------------------------------------------
# rendering

def _chi(name: str) -> str:
    return f"χ{name}"


def render_partition_function(
    Z: np.ndarray,
    names: Optional[Sequence[str]] = None,
    branching: Optional[BranchingTable] = None,
) -> str:
    """Character-sum form of a coupling matrix.

    With a branching table the blocks are rendered as |chi+...|^2 with
    multiplicities for repeated rows; otherwise diagonal terms come
    first (ascending), then off-diagonal terms row-major.
    """
    Z = np.asarray(Z, dtype=int)
    m = Z.shape[0]
    if names is None:
        names = [str(i) for i in range(m)]

    if branching is not None:
        b = branching.b
        if not np.array_equal(b.T @ b, Z):
            raise ValueError("branching table does not reproduce the matrix")
        terms: List[str] = []
        seen: List[int] = []
        for t in range(b.shape[0]):
            if t in seen:
                continue
            dup = [u for u in range(b.shape[0]) if np.array_equal(b[u], b[t])]
            seen.extend(dup)
            inner = []
            for lam in range(m):
                c = int(b[t, lam])
                if c == 0:
                    continue
                inner.append(f"{c if c > 1 else ''}{_chi(names[lam])}")
            pre = f"{len(dup)}" if len(dup) > 1 else ""
            terms.append(f"{pre}|{' + '.join(inner)}|²")
        return " + ".join(terms)

    terms = []
    for lam in range(m):
        c = int(Z[lam, lam])
        if c:
            pre = f"{c}" if c > 1 else ""
            terms.append(f"{pre}|{_chi(names[lam])}|²")
    for lam in range(m):
        for mu in range(m):
            if lam == mu:
                continue
            c = int(Z[lam, mu])
            if c:
                pre = f"{c}" if c > 1 else ""
                terms.append(f"{pre}{_chi(names[lam])}{_chi(names[mu])}*")
    return " + ".join(terms) if terms else "0"


def graph_to_dot(graph: Graph) -> str:
    """DOT text; undirected when the adjacency is symmetric."""
    A = graph.adjacency
    n = A.shape[0]
    sym = np.array_equal(A, A.T)
    kind, arrow = ("graph", "--") if sym else ("digraph", "->")
    lines = [f"{kind} \"{graph.name or 'G'}\" {{"]
    for i in range(n):
        lines.append(f'  n{i} [label="{graph.names[i]}"];')
    for i in range(n):
        for j in range(n):
            if sym and j < i:
                continue
            for _ in range(int(A[i, j])):
                lines.append(f"  n{i} {arrow} n{j};")
    lines.append("}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# helpers

def _load_model(name: str) -> ModelSpec:
    if name.endswith(".json"):
        with open(name) as f:
            return model_from_json(json.load(f))
    return model_by_name(name)


def _fmt_complex(x: complex) -> str:
    return f"{x.real:+.6f}{x.imag:+.6f}i"


# ---------------------------------------------------------------------------
# commands

def cmd_model(args: argparse.Namespace) -> int:
    if args.action == "list":
        print("built-in models:")
        print("  su2:K            su(2) at level K (K >= 1)")
        print("  zn:N:A           Z_N spin model, weight A (see 'extend' for A choices)")
        print("  sun_currents:N:K current sector of su(N)_K")
        print("  so8_1            so(8) level 1")
        print("  so16_1           so(16) level 1")
        return EXIT_OK

    if args.action == "validate":
        try:
            with open(args.name) as f:
                data = json.load(f)
            spec = model_from_json(data)
            md = build(spec)
        except (OSError, KeyError, TypeError) as exc:
            print(f"cannot read model: {exc}", file=sys.stderr)
            return EXIT_VERIFY
        except ValueError as exc:
            print(f"invalid model: {exc}", file=sys.stderr)
            return EXIT_VERIFY
        print(f"model ok: {spec.name or args.name} (m={spec.ring.size}, "
              f"nondegenerate={md.nondegenerate})")
        return EXIT_OK

    # show
    try:
        spec = _load_model(args.name)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    md = build(spec)
    ring = spec.ring
    print(f"model {spec.name}: {ring.size} sectors, w = {md.w:.6f}")
    if md.nondegenerate:
        print(f"nondegenerate, c = {md.c:.6f} (mod 8), z = {_fmt_complex(md.z)}")
    else:
        print(f"degenerate: {md.degenerate_reason}")
    print("labels:")
    d = ring.d
    for i, lab in enumerate(ring.labels):
        print(f"  {i:3d}  {lab.name:>10s}  h={str(spec.spins.h[i]):>8s}  d={d[i]:.6f}")
    if md.S is not None and ring.size <= 8:
        print("S:")
        for row in md.S:
            print("  [" + "  ".join(_fmt_complex(x) for x in row) + "]")
    if args.json:
        with open(args.json, "w") as f:
            json.dump(model_to_json(spec), f, indent=2, sort_keys=True)
        print(f"wrote {args.json}")
    return EXIT_OK


def cmd_enumerate(args: argparse.Namespace) -> int:
    try:
        spec = _load_model(args.model)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    md = build(spec)
    basis = commutant_basis(md)
    invs = enumerate_invariants(md)
    print(
        f"{spec.name}: commutant rank {basis.r} ({basis.kind}"
        f"{', float basis' if not basis.exact else ''}), "
        f"{len(invs)} physical invariants"
    )
    if basis.warning:
        print(f"warning: {basis.warning}")
    for i, Z in enumerate(invs):
        print(f"invariant {i}: trace {int(np.trace(Z))}")
        for row in Z:
            print("  " + " ".join(f"{int(x):2d}" for x in row))
    if args.oracle:
        ref = brute_force_enumerate(md)
        same = len(ref) == len(invs) and all(
            np.array_equal(a, b) for a, b in zip(ref, invs)
        )
        if not same:
            print("oracle mismatch: brute force disagrees", file=sys.stderr)
            return EXIT_VERIFY
        print(f"oracle agrees ({len(ref)} invariants)")
    if args.json:
        payload = {
            "model": spec.name,
            "commutant": {"rank": basis.r, "kind": basis.kind, "exact": basis.exact},
            "invariants": [matrix_to_json(Z) for Z in invs],
        }
        with open(args.json, "w") as f:
            json.dump(payload, f, indent=2, sort_keys=True)
        print(f"wrote {args.json}")
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    try:
        spec = _load_model(args.model)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    md = build(spec)
    invs = enumerate_invariants(md)
    print(f"{spec.name}: {len(invs)} invariants")
    for i, Z in enumerate(invs):
        rep = classify_invariant(Z, md, enumerated=invs)
        tags = [rep.kind]
        if rep.permutation is not None:
            tags.append("automorphism")
        if rep.heterotic:
            tags.append("heterotic")
        if rep.simple_current_supported:
            tags.append("current-supported")
        parents = rep.parents or {}
        print(f"invariant {i}: {', '.join(tags)}")
        print(f"  trace {rep.counts['trace']}, sum Z^2 {rep.counts['sum_squares']}, "
              f"w+ {rep.indices['w_plus']:.6f}, w- {rep.indices['w_minus']:.6f}")
        print(f"  parents: plus={parents.get('plus')}, minus={parents.get('minus')}")
        print(f"  Z = {render_partition_function(Z, branching=rep.branching)}")
    return EXIT_OK


def cmd_graphs(args: argparse.Namespace) -> int:
    try:
        spec = _load_model(args.model)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not spec.name.startswith("su2:"):
        print("graph assignment covers su2 models only", file=sys.stderr)
        return EXIT_USAGE
    md = build(spec)
    invs = enumerate_invariants(md)
    for i, Z in enumerate(invs):
        graphs = ade_assignment(md, Z)
        names = ", ".join(g.name for g in graphs) or "(none)"
        print(f"invariant {i} (trace {int(np.trace(Z))}): {names}")
        if args.dot:
            import os

            os.makedirs(args.dot, exist_ok=True)
            for g in graphs:
                path = os.path.join(
                    args.dot, f"{spec.name.replace(':', '_')}_inv{i}_{g.name}.dot"
                )
                with open(path, "w") as f:
                    f.write(graph_to_dot(g) + "\n")
                print(f"  wrote {path}")
    return EXIT_OK


def cmd_extend(args: argparse.Namespace) -> int:
    try:
        spec = _load_model(args.model)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    records = rehren_admissible(spec)
    print(f"{spec.name}: cyclic current subgroups")
    for r in records:
        flag = "admissible" if r.admissible else "not admissible"
        print(
            f"  gen {r.generator} order {r.order} h={r.h_generator} [{flag}] "
            f"theta={theta_vector(r).tolist()}"
        )
    parts = spec.name.split(":")
    if parts[0] == "zn":
        n, a = int(parts[1]), int(parts[2])
        print("divisor invariants:")
        for delta, Z in sorted(zn_invariant_table(n, a).items()):
            print(f"  Z^({delta}): trace {int(np.trace(Z))}")
    if parts[0] == "sun_currents":
        n, k = int(parts[1]), int(parts[2])
        tab = sun_divisor_table(n, k)
        print(f"admissible orders: {tab['orders']}")
        print(f"locality by order: {tab['locality']}")
    return EXIT_OK


def cmd_restrict(args: argparse.Namespace) -> int:
    tables = branching_catalog()
    if args.table not in tables:
        print(
            f"unknown table '{args.table}'; have: {', '.join(sorted(tables))}",
            file=sys.stderr,
        )
        return EXIT_USAGE
    table = tables[args.table]
    if args.invariant == "sweep":
        if args.table != "so8_to_su3":
            print("sweep is defined for so8_to_su3 only", file=sys.stderr)
            return EXIT_USAGE
        res = so8_restriction_sweep()
        Z = res["matrix"]
        print(f"all {res['count']} invariants restrict to:")
    else:
        rows = table.rows
        if args.invariant == "identity":
            Z_ext = np.eye(rows, dtype=int)
        elif args.invariant == "conjugation":
            if args.table == "so8_to_su3":
                print(
                    "conjugation is trivial for so8_to_su3; use identity or sweep",
                    file=sys.stderr,
                )
                return EXIT_USAGE
            Z_ext = np.zeros((rows, rows), dtype=int)
            for t in range(rows):
                Z_ext[t, (-t) % rows] = 1
        else:
            print("invariant must be identity, conjugation or sweep", file=sys.stderr)
            return EXIT_USAGE
        Z = restrict(table, Z_ext)
        print(f"{args.table} / {args.invariant}:")
    for row in Z:
        print("  " + " ".join(f"{int(x):2d}" for x in row))
    print(f"trace {int(np.trace(Z))}, sum {int(Z.sum())}")
    b = table if args.invariant in ("identity", "sweep") else None
    try:
        print("Z = " + render_partition_function(Z, names=table.col_names, branching=b))
    except ValueError:
        print("Z = " + render_partition_function(Z, names=table.col_names))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors exit 1, not 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="modinv", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    pm = sub.add_parser("model", help="list, show or validate models")
    pm.add_argument("action", choices=["list", "show", "validate"])
    pm.add_argument("name", nargs="?", help="model name or JSON file")
    pm.add_argument("--json", help="write the model as JSON to this path")
    pm.set_defaults(func=cmd_model)

    pe = sub.add_parser("enumerate", help="enumerate physical invariants")
    pe.add_argument("model")
    pe.add_argument("--oracle", action="store_true", help="brute-force cross-check")
    pe.add_argument("--json", help="write results as JSON to this path")
    pe.set_defaults(func=cmd_enumerate)

    pc = sub.add_parser("classify", help="classify enumerated invariants")
    pc.add_argument("model")
    pc.set_defaults(func=cmd_classify)

    pg = sub.add_parser("graphs", help="assign graphs to su2 invariants")
    pg.add_argument("model")
    pg.add_argument("--dot", help="directory for DOT exports")
    pg.set_defaults(func=cmd_graphs)

    px = sub.add_parser("extend", help="admissible current extensions")
    px.add_argument("model")
    px.set_defaults(func=cmd_extend)

    pr = sub.add_parser("restrict", help="restrict an extended invariant")
    pr.add_argument("table")
    pr.add_argument("invariant", help="identity, conjugation or sweep")
    pr.set_defaults(func=cmd_restrict)

    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "model" and args.action in ("show", "validate") and not args.name:
        print("model show/validate needs a name", file=sys.stderr)
        return EXIT_USAGE
    try:
        return int(args.func(args))
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
