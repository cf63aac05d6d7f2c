"""Fusion ring axioms, quantum dimensions and simple currents."""
import math

import numpy as np
import pytest

from modinv import su2_model, zn_model, so8_level1_model, verify_axioms
from modinv.fusion import FusionRing, frobenius_violations, simple_currents


def test_su2_ring_axioms_clean():
    assert verify_axioms(su2_model(6).ring) == []


def test_injected_identity_violation_is_reported():
    ring = su2_model(6).ring
    N = ring.N.copy()
    N[0, 1, 2] = 1  # identity no longer acts trivially
    broken = FusionRing([l.name for l in ring.labels], N, conj=list(range(7)))
    report = verify_axioms(broken)
    assert report
    assert any("identity" in line for line in report)
    assert any("(0, 1, 2)" in line for line in report)


def test_zn_ring_axioms_clean():
    assert verify_axioms(zn_model(5, 2).ring) == []


def test_vacuum_dimension_is_one():
    for spec in (su2_model(3), zn_model(7, 2), so8_level1_model()):
        assert spec.ring.d[0] == pytest.approx(1.0, abs=1e-12)


def test_su2_level2_dimension():
    d = su2_model(2).ring.d
    assert d[1] == pytest.approx(math.sqrt(2.0), abs=1e-9)


def test_su2_level6_dimension_closed_form():
    d = su2_model(6).ring.d
    assert d[1] == pytest.approx(2 * math.cos(math.pi / 8), abs=1e-9)
    # full column: d_j = sin((j+1)pi/8)/sin(pi/8)
    for j in range(7):
        ref = math.sin((j + 1) * math.pi / 8) / math.sin(math.pi / 8)
        assert d[j] == pytest.approx(ref, abs=1e-9)


def test_dimension_residual_tolerance():
    for spec in (su2_model(6), su2_model(16), zn_model(10, 9), so8_level1_model()):
        ring = spec.ring
        d = ring.d
        resid = np.max(np.abs(np.outer(d, d) - ring.N @ d))
        assert resid < 1e-9


def test_su2_tensor_matches_truncation_rule():
    for k in (3, 6):
        N = su2_model(k).ring.N
        for j1 in range(k + 1):
            for j2 in range(k + 1):
                for j3 in range(k + 1):
                    ok = (
                        abs(j1 - j2) <= j3 <= min(j1 + j2, 2 * k - j1 - j2)
                        and (j1 + j2 + j3) % 2 == 0
                    )
                    assert N[j1, j2, j3] == (1 if ok else 0)


def test_fusion_matrix_of_vacuum_is_identity():
    ring = su2_model(6).ring
    assert np.array_equal(ring.fusion_matrix(0), np.eye(7, dtype=int))


def test_fusion_matrix_of_generator_is_path():
    A = su2_model(6).ring.fusion_matrix(1)
    expect = np.zeros((7, 7), dtype=int)
    for i in range(6):
        expect[i, i + 1] = expect[i + 1, i] = 1
    assert np.array_equal(A, expect)


def test_fusion_matrix_cyclic_shift():
    A = zn_model(4, 1).ring.fusion_matrix(1)
    expect = np.zeros((4, 4), dtype=int)
    for j in range(4):
        expect[j, (j + 1) % 4] = 1
    assert np.array_equal(A, expect)


def test_fusion_matrix_bad_label():
    with pytest.raises(IndexError):
        su2_model(4).ring.fusion_matrix(9)


def test_simple_currents_su2():
    for k in (2, 3, 6, 16):
        g = simple_currents(su2_model(k).ring)
        assert g.elements == [0, k]
        assert g.orders == [1, 2]


def test_simple_currents_zn_everything():
    g = simple_currents(zn_model(10, 9).ring)
    assert g.elements == list(range(10))
    assert g.order == 10


def test_simple_currents_so8_klein_four():
    g = simple_currents(so8_level1_model().ring)
    assert g.elements == [0, 1, 2, 3]
    assert sorted(o for _, o in g.cyclic_factors) == [2, 2]


def test_current_group_closure():
    for spec in (su2_model(6), zn_model(12, 5), so8_level1_model()):
        ring = spec.ring
        g = simple_currents(ring)
        elems = set(g.elements)
        for i in g.elements:
            assert int(ring.conj[i]) in elems
        for a in range(g.order):
            for b in range(g.order):
                assert g.elements[g.table[a, b]] in elems


def test_frobenius_reciprocity_holds_on_catalog():
    for spec in (su2_model(6), zn_model(7, 2), so8_level1_model()):
        assert frobenius_violations(spec.ring) == []


def test_conjugation_read_from_vacuum_slice():
    # zn ring without an explicit conj: must recover j -> -j
    n = 6
    N = np.zeros((n, n, n), dtype=int)
    for a in range(n):
        for b in range(n):
            N[a, b, (a + b) % n] = 1
    ring = FusionRing([str(j) for j in range(n)], N)
    assert [int(x) for x in ring.conj] == [(-j) % n for j in range(n)]


def test_global_index_su2():
    # w = sum d_j^2 = (k+2)/(2 sin^2(pi/(k+2)))
    for k in (2, 6, 16):
        w = su2_model(k).ring.global_index
        ref = (k + 2) / (2 * math.sin(math.pi / (k + 2)) ** 2)
        assert w == pytest.approx(ref, rel=1e-10)
