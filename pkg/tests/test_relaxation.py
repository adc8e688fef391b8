"""Lamination oracle: witnessed upper bounds on the rank-one envelope."""

import numpy as np
import pytest

from nemem.algebra import diag_embed, rank_one_gap
from nemem.constitutive import MaterialParams
from nemem.membrane import plane_energy
from nemem.microstructure import measure_pairing
from nemem.relaxation import OracleConfig, OracleResult, relax_along_line, relax_lamination

P8 = MaterialParams(mu=2.0, r=8.0)
CFG = OracleConfig()


def test_config_validation():
    with pytest.raises(ValueError):
        OracleConfig(depth=0)
    with pytest.raises(ValueError):
        OracleConfig(t_grid=0)


def test_identity_relaxes_to_zero():
    res = relax_lamination(diag_embed(1.0, 1.0), P8, CFG)
    assert res.closed_form == 0.0
    assert res.value <= 1e-3
    assert len(res.best_measure.atoms) >= 2


def test_solid_point_has_no_beneficial_split():
    F = diag_embed(2.5, 0.8)
    res = relax_lamination(F, P8, CFG)
    assert abs(res.value - plane_energy(F, P8)) <= 1e-12
    assert abs(res.value - 0.3425) <= 1e-8


def test_wrinkling_point_value():
    res = relax_lamination(diag_embed(3.0, 1.0 / 3.0), P8, CFG)
    assert abs(res.value - 0.58333333) <= 1e-3


def test_witness_reproduces_value():
    for F in (diag_embed(1.0, 1.0), diag_embed(1.6, 1.25), diag_embed(3.0, 1.0 / 3.0)):
        res = relax_lamination(F, P8, CFG)
        paired = measure_pairing(res.best_measure, lambda G: plane_energy(G, P8))
        assert abs(paired - res.value) <= 1e-12
        np.testing.assert_allclose(res.best_measure.barycenter(), F, atol=1e-9)


def test_witness_splits_are_rank_one():
    res = relax_lamination(diag_embed(1.0, 1.0), P8, CFG)
    for s in res.best_measure.tree:
        D = s["magnitude"] * np.outer(s["a"], s["b"])
        assert rank_one_gap(D, np.zeros((3, 2))) <= 1e-12


def test_gap_window():
    rng = np.random.default_rng(0)
    for _ in range(6):
        F = rng.normal(size=(3, 2))
        res = relax_lamination(F, P8, CFG)
        assert -1e-9 <= res.gap <= 5e-3


def test_monotone_in_depth():
    F = diag_embed(1.0, 1.0)
    v1 = relax_lamination(F, P8, OracleConfig(depth=1)).value
    v2 = relax_lamination(F, P8, OracleConfig(depth=2)).value
    v3 = relax_lamination(F, P8, OracleConfig(depth=3)).value
    assert v2 <= v1 + 1e-12
    assert v3 <= v2 + 1e-12


def test_two_level_tree_needed_below_the_soft_segment():
    # Small largest stretch in the liquid region: no single split reaches
    # the zero set, the two-level tree does.
    F = diag_embed(0.44, 0.08 / 0.44)
    r2 = MaterialParams(mu=2.0, r=2.0)
    v1 = relax_lamination(F, r2, OracleConfig(depth=1)).value
    res = relax_lamination(F, r2, OracleConfig(depth=2))
    assert v1 > 0.1
    assert res.value <= 5e-3
    assert res.closed_form == 0.0


def test_deterministic_under_seed():
    F = diag_embed(1.7, 0.9)
    a = relax_lamination(F, P8, OracleConfig(seed=5))
    b = relax_lamination(F, P8, OracleConfig(seed=5))
    assert a.value == b.value and a.gap == b.gap
    assert len(a.best_measure.atoms) == len(b.best_measure.atoms)
    for (wa, Ga), (wb, Gb) in zip(a.best_measure.atoms, b.best_measure.atoms):
        assert wa == wb and np.array_equal(Ga, Gb)


def test_result_type():
    res = relax_lamination(diag_embed(2.0, 1.0), P8, CFG)
    assert isinstance(res, OracleResult)
    assert res.gap == res.value - res.closed_form


def test_line_relaxation_convex_direction_returns_value():
    F = diag_embed(2.5, 0.8)
    v = relax_along_line(F, np.array([1.0, 0, 0]), np.array([1.0, 0]), P8)
    assert abs(v - plane_energy(F, P8)) <= 1e-10


def test_line_relaxation_shear_direction_drops_below_value():
    F = diag_embed(1.0, 1.0)
    v = relax_along_line(F, np.array([1.0, 0, 0]), np.array([0.0, 1.0]), P8)
    assert v < 0.41421356
    assert v <= 1e-6  # the soft segment is reachable along this line


def test_line_relaxation_through_infinite_point():
    F = np.outer([1.0, 0.0, 0.0], [1.0, 0.0])
    v = relax_along_line(F, np.array([0.0, 1.0, 0.0]), np.array([0.0, 1.0]), P8)
    assert np.isfinite(v)


def test_line_relaxation_rejects_non_unit_directions():
    with pytest.raises(ValueError):
        relax_along_line(diag_embed(1.0, 1.0), np.array([2.0, 0, 0]), np.array([1.0, 0]), P8)
