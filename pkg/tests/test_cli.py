"""Command line surface: exit codes, JSON round trips, renderers."""
import json
from fractions import Fraction

import numpy as np
import pytest

from modinv import build, enumerate_invariants, graph_catalog, pz_graph, su2_model, zn_model
from modinv.catalog import model_by_name, so8_level1_model
from modinv.cli import (
    graph_to_dot,
    main,
    matrix_to_json,
    model_from_json,
    model_to_json,
    render_partition_function,
)
from modinv.classify import type1_decomposition

from test_commutant import d5_matrix, d10_matrix


def chi_terms(expr):
    """Coupling coefficients of a character-sum expression.

    Understands m|χa + 2χb|², mχaχb* and m|χa|² terms; returns a dict
    (row, col) -> coefficient so differently written but equal
    expressions compare equal.
    """
    out = {}

    def add(r, c, v):
        out[(r, c)] = out.get((r, c), 0) + v

    def split_pre(t):
        i = 0
        while i < len(t) and t[i].isdigit():
            i += 1
        return (int(t[:i]) if i else 1), t[i:]

    def top_terms(s):
        terms, buf, inside, i = [], "", False, 0
        while i < len(s):
            if s[i] == "|":
                inside = not inside
            if not inside and s.startswith(" + ", i):
                terms.append(buf)
                buf, i = "", i + 3
                continue
            buf += s[i]
            i += 1
        terms.append(buf)
        return terms

    for term in top_terms(expr):
        term = term.strip()
        pre, rest = split_pre(term)
        if rest.startswith("|") and rest.endswith("|²"):
            inner = rest[1:-2]
            parts = []
            for piece in inner.split(" + "):
                c, tail = split_pre(piece.strip())
                assert tail.startswith("χ")
                parts.append((c, tail[1:]))
            for c1, n1 in parts:
                for c2, n2 in parts:
                    add(n1, n2, pre * c1 * c2)
        else:
            assert rest.endswith("*") and rest.startswith("χ")
            names = rest[:-1].split("χ")[1:]
            assert len(names) == 2
            add(names[0], names[1], pre)
    return out


def matrix_terms(Z):
    return {
        (str(i), str(j)): int(Z[i, j])
        for i, j in np.argwhere(np.asarray(Z) != 0)
    }


def test_render_d5_matches_offdiagonal_writing():
    ours = render_partition_function(d5_matrix())
    # same coupling, diagonal term written out as chi3 chi3*
    classic = "|χ0|² + |χ2|² + |χ4|² + |χ6|² + χ1χ5* + χ3χ3* + χ5χ1*"
    assert chi_terms(ours) == chi_terms(classic) == matrix_terms(d5_matrix())


def test_render_d10_block_form():
    b = type1_decomposition(d10_matrix())
    out = render_partition_function(d10_matrix(), branching=b)
    assert out == "|χ0 + χ16|² + |χ2 + χ14|² + |χ4 + χ12|² + |χ6 + χ10|² + 2|χ8|²"
    assert chi_terms(out) == matrix_terms(d10_matrix())


def test_render_identity_and_empty():
    out = render_partition_function(np.eye(7, dtype=int))
    assert out == " + ".join(f"|χ{i}|²" for i in range(7))
    assert render_partition_function(np.zeros((3, 3), dtype=int)) == "0"
    with pytest.raises(ValueError):
        render_partition_function(
            np.eye(17, dtype=int), branching=type1_decomposition(d10_matrix()))


def test_graph_to_dot():
    dot = graph_to_dot(graph_catalog("A", 7))
    assert dot.startswith('graph "A7"')
    assert dot.count("--") == 6 and "->" not in dot
    assert dot.count("label=") == 7
    dot = graph_to_dot(graph_catalog("T", 2))
    assert "n1 -- n1;" in dot
    dot = graph_to_dot(pz_graph())
    assert dot.startswith('digraph "pz_32"') and "->" in dot


def test_model_json_round_trip():
    for name in ("su2:6", "zn:10:9", "so8_1"):
        spec = model_by_name(name)
        data = json.loads(json.dumps(model_to_json(spec)))
        back = model_from_json(data)
        assert back.name == spec.name
        assert np.array_equal(back.ring.N, spec.ring.N)
        assert np.array_equal(back.ring.conj, spec.ring.conj)
        assert back.spins.h == spec.spins.h
        assert all(isinstance(h, Fraction) for h in back.spins.h)


def test_cli_model_list_and_show(capsys):
    assert main(["model", "list"]) == 0
    out = capsys.readouterr().out
    assert "su2:K" in out and "so16_1" in out
    assert main(["model", "show", "su2:6"]) == 0
    out = capsys.readouterr().out
    assert "7 sectors" in out and "3/32" in out and "nondegenerate" in out
    assert main(["model", "show", "so8_1"]) == 0
    out = capsys.readouterr().out
    assert "S:" in out and "c = 4.000000" in out


def test_cli_model_errors(capsys):
    assert main(["model", "show", "nosuch"]) == 1
    assert "error" in capsys.readouterr().err
    assert main(["model", "show"]) == 1
    assert main(["model", "validate", "/nonexistent/x.json"]) == 2
    assert main([]) == 1
    assert main(["model", "frobnicate", "su2:6"]) == 1


def test_cli_model_json_and_validate(tmp_path, capsys):
    path = tmp_path / "su2_6.json"
    assert main(["model", "show", "su2:6", "--json", str(path)]) == 0
    capsys.readouterr()
    assert main(["model", "validate", str(path)]) == 0
    out = capsys.readouterr().out
    assert "model ok" in out and "nondegenerate=True" in out
    # corrupt the conjugation: loader must reject it
    data = json.loads(path.read_text())
    data["conjugation"] = [0] * 7
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    assert main(["model", "validate", str(bad)]) == 2
    trunc = tmp_path / "trunc.json"
    trunc.write_text('{"labels": []}')
    assert main(["model", "validate", str(trunc)]) == 2


def test_cli_show_from_json_file(tmp_path, capsys):
    path = tmp_path / "zn.json"
    assert main(["model", "show", "zn:5:2", "--json", str(path)]) == 0
    capsys.readouterr()
    assert main(["model", "show", str(path)]) == 0
    assert "5 sectors" in capsys.readouterr().out


def test_cli_enumerate(tmp_path, capsys):
    assert main(["enumerate", "su2:6"]) == 0
    out = capsys.readouterr().out
    assert "commutant rank 2 (modular)" in out
    assert "2 physical invariants" in out
    assert main(["enumerate", "su2:6", "--oracle"]) == 0
    assert "oracle agrees (2 invariants)" in capsys.readouterr().out
    path = tmp_path / "inv.json"
    assert main(["enumerate", "su2:6", "--json", str(path)]) == 0
    payload = json.loads(path.read_text())
    invs = enumerate_invariants(build(su2_model(6)))
    assert payload["invariants"] == [matrix_to_json(Z) for Z in invs]
    assert payload["commutant"] == {"rank": 2, "kind": "modular", "exact": True}
    assert main(["enumerate", "nosuch:9"]) == 1


def test_cli_classify(capsys):
    assert main(["classify", "su2:16"]) == 0
    out = capsys.readouterr().out
    assert "3 invariants" in out
    assert "type I," in out and "type II" in out
    assert "automorphism" in out
    assert "|χ0 + χ16|²" in out
    invs = enumerate_invariants(build(su2_model(16)))
    i_d10 = next(i for i, Z in enumerate(invs) if np.array_equal(Z, d10_matrix()))
    assert f"parents: plus={i_d10}, minus={i_d10}" in out
    assert main(["classify", "so16_1"]) == 0
    assert "heterotic" in capsys.readouterr().out


def test_cli_graphs(tmp_path, capsys):
    dotdir = tmp_path / "dots"
    assert main(["graphs", "su2:6", "--dot", str(dotdir)]) == 0
    out = capsys.readouterr().out
    assert "A7" in out and "D5" in out
    files = sorted(p.name for p in dotdir.iterdir())
    assert files == ["su2_6_inv0_D5.dot", "su2_6_inv1_A7.dot"]
    assert (dotdir / files[0]).read_text().startswith('graph "D5"')
    assert main(["graphs", "zn:5:2"]) == 1
    assert "su2" in capsys.readouterr().err


def test_cli_extend(capsys):
    assert main(["extend", "su2:6"]) == 0
    out = capsys.readouterr().out
    assert "gen 6 order 2" in out and "[admissible]" in out
    assert "theta=[1, 0, 0, 0, 0, 0, 1]" in out
    assert main(["extend", "sun_currents:4:6"]) == 0
    out = capsys.readouterr().out
    assert "admissible orders: [1, 2, 4]" in out
    assert "locality by order: {1: True, 2: True, 4: False}" in out
    assert main(["extend", "zn:10:9"]) == 0
    out = capsys.readouterr().out
    assert "Z^(1): trace 2" in out and "Z^(5): trace 10" in out
    assert main(["extend", "su2:5"]) == 0
    assert "[not admissible]" in capsys.readouterr().out


def test_cli_restrict(capsys):
    assert main(["restrict", "su10_to_su4", "conjugation"]) == 0
    out = capsys.readouterr().out
    assert "trace 16" in out
    assert main(["restrict", "su10_to_su4", "identity"]) == 0
    assert "trace 32" in capsys.readouterr().out
    assert main(["restrict", "so8_to_su3", "sweep"]) == 0
    out = capsys.readouterr().out
    assert "all 6 invariants restrict to:" in out
    assert "trace 6" in out and "3|χ(1,1)|²" in out
    assert main(["restrict", "e6_to_su3", "conjugation"]) == 0
    assert "trace 12" in capsys.readouterr().out
    assert main(["restrict", "bogus", "identity"]) == 1
    assert main(["restrict", "su10_to_su4", "bogus"]) == 1
    assert main(["restrict", "so8_to_su3", "conjugation"]) == 1
    assert main(["restrict", "e6_to_su3", "sweep"]) == 1
