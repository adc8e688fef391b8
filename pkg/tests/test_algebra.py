"""Small-matrix kernels: adjugate, closed-form SVD, rank-one gap."""

import numpy as np
import pytest

from nemem.algebra import adj2, diag_embed, rank_one_gap, singular_values, svd32

from helpers import random_orthogonal2, random_rotation


@pytest.mark.parametrize(
    "F, expected",
    [
        ([[1, 0], [0, 1], [0, 0]], (0.0, 0.0, 1.0)),
        ([[2, 0], [0, 3], [0, 0]], (0.0, 0.0, 6.0)),
        ([[1, 2], [3, 4], [5, 6]], (-2.0, 4.0, -2.0)),
    ],
)
def test_adj2_examples(F, expected):
    np.testing.assert_allclose(adj2(np.array(F, dtype=float)), expected, atol=1e-15)


def test_svd32_diagonal():
    sd = svd32(np.array([[3.0, 0.0], [0.0, 1.0], [0.0, 0.0]]))
    assert sd.lamM == 3.0 and sd.lamm == 1.0 and sd.delta == 3.0


def test_svd32_zero_matrix():
    sd = svd32(np.zeros((3, 2)))
    assert sd.lamM == sd.lamm == sd.delta == 0.0
    np.testing.assert_allclose(sd.Q, np.eye(3))
    np.testing.assert_allclose(sd.reconstruct(), np.zeros((3, 2)))


def test_svd32_equal_singular_values():
    # F^T F = 2 I, both singular values sqrt(2); only the reconstruction
    # is unique here, never the frame.
    F = np.array([[1.0, 1.0], [1.0, -1.0], [0.0, 0.0]])
    sd = svd32(F)
    assert abs(sd.lamM - np.sqrt(2)) < 1e-14
    assert abs(sd.lamm - np.sqrt(2)) < 1e-14
    assert abs(sd.delta - 2.0) < 1e-14
    np.testing.assert_allclose(sd.reconstruct(), F, atol=1e-14)


def test_svd32_random_properties():
    rng = np.random.default_rng(0)
    for _ in range(10_000):
        F = rng.normal(size=(3, 2)) * rng.choice([1e-2, 1.0, 1e2])
        sd = svd32(F)
        scale = max(1.0, np.abs(F).max())
        assert np.abs(sd.reconstruct() - F).max() <= 1e-12 * scale
        assert abs(np.linalg.norm(adj2(F)) - sd.delta) <= 1e-12 * max(1.0, sd.delta)
        assert sd.lamM >= sd.lamm >= 0.0
        assert np.abs(sd.Q.T @ sd.Q - np.eye(3)).max() <= 1e-12
        assert np.abs(sd.R @ sd.R.T - np.eye(2)).max() <= 1e-12
        assert abs(np.linalg.det(sd.Q) - 1.0) <= 1e-12


def test_svd32_rank_deficient_frame_completion():
    rng = np.random.default_rng(1)
    for _ in range(500):
        F = np.outer(rng.normal(size=3), rng.normal(size=2))
        sd = svd32(F)
        assert sd.lamm <= 1e-13 * max(1.0, sd.lamM)
        np.testing.assert_allclose(sd.reconstruct(), F, atol=1e-12 * max(1.0, sd.lamM))
        assert np.abs(sd.Q.T @ sd.Q - np.eye(3)).max() <= 1e-12


def test_adj2_frame_invariance():
    rng = np.random.default_rng(2)
    for _ in range(1000):
        F = rng.normal(size=(3, 2))
        Q = random_rotation(rng)
        R = random_orthogonal2(rng)
        assert abs(
            np.linalg.norm(adj2(Q @ F @ R)) - np.linalg.norm(adj2(F))
        ) <= 1e-12 * max(1.0, np.linalg.norm(adj2(F)))


def test_largest_stretch_matches_angular_sweep():
    # lamM = max over unit v of |F v|: 720-point sweep plus golden-section
    # refinement around the best angle.
    rng = np.random.default_rng(3)
    golden = (np.sqrt(5.0) - 1.0) / 2.0
    for _ in range(50):
        F = rng.normal(size=(3, 2))
        sd = svd32(F)
        angles = np.linspace(0.0, 2.0 * np.pi, 720, endpoint=False)
        V = np.stack([np.cos(angles), np.sin(angles)], axis=1)
        norms = np.linalg.norm(V @ F.T, axis=1)
        k = int(np.argmax(norms))
        lo = angles[k] - 2.0 * np.pi / 720
        hi = angles[k] + 2.0 * np.pi / 720

        def f(t):
            return -np.linalg.norm(F @ np.array([np.cos(t), np.sin(t)]))

        a, b = lo, hi
        c = b - golden * (b - a)
        d = a + golden * (b - a)
        for _ in range(60):
            if f(c) < f(d):
                b, d = d, c
                c = b - golden * (b - a)
            else:
                a, c = c, d
                d = a + golden * (b - a)
        refined = np.linalg.norm(F @ np.array([np.cos(0.5 * (a + b)), np.sin(0.5 * (a + b))]))
        assert abs(refined - sd.lamM) <= 1e-9


@pytest.mark.parametrize(
    "A, B, expected",
    [
        (diag_embed(1.0, 2.0), diag_embed(1.0, 2.0), 0.0),
        (np.outer([1.0, 0, 0], [1.0, 0]), np.zeros((3, 2)), 0.0),
        (diag_embed(1.0, 1.0), np.zeros((3, 2)), 1.0),
    ],
)
def test_rank_one_gap_examples(A, B, expected):
    assert abs(rank_one_gap(A, B) - expected) <= 1e-14


def test_singular_values_batch_agrees_with_svd32():
    rng = np.random.default_rng(4)
    F = rng.normal(size=(64, 3, 2))
    lamM, lamm = singular_values(F)
    for i in range(64):
        sd = svd32(F[i])
        assert abs(lamM[i] - sd.lamM) <= 1e-12 * max(1.0, sd.lamM)
        assert abs(lamm[i] - sd.lamm) <= 1e-12 * max(1.0, sd.lamM)


def test_svd32_rejects_bad_input():
    with pytest.raises(ValueError):
        svd32(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        svd32(np.array([[np.nan, 0], [0, 1], [0, 0]]))
