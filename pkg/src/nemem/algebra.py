"""Exact small-matrix kernels for 3x2 deformation gradients.

Everything a membrane calculation needs from linear algebra lives here:
the vector of 2x2 minors (``adj2``), a closed-form singular value
decomposition of 3x2 matrices (``svd32``), and a rank-one certificate
(``rank_one_gap``).  The SVD is computed analytically from the 2x2
symmetric eigenproblem of F^T F, so it is exact up to rounding and has
no iteration or library dependency.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SingularData",
    "adj2",
    "diag_embed",
    "rank_one_gap",
    "singular_values",
    "svd32",
]

# Relative threshold below which the smaller singular value is treated as
# zero when building the left frame (the value itself is still reported).
_FRAME_TOL = 1e-13


@dataclass(frozen=True)
class SingularData:
    """Singular value decomposition F = Q D R of a 3x2 matrix.

    Attributes
    ----------
    lamM, lamm : float
        Singular values, ``lamM >= lamm >= 0``.
    delta : float
        Areal stretch ``lamM * lamm`` (equals ``|adj2(F)|``).
    Q : ndarray, shape (3, 3)
        Rotation (det Q = +1) whose first two columns are the left
        singular vectors.
    R : ndarray, shape (2, 2)
        Orthogonal matrix whose rows are the right singular vectors.
    """

    lamM: float
    lamm: float
    delta: float
    Q: np.ndarray
    R: np.ndarray

    @property
    def e1(self):
        return self.Q[:, 0]

    @property
    def e2(self):
        return self.Q[:, 1]

    @property
    def f1(self):
        return self.R[0, :]

    @property
    def f2(self):
        return self.R[1, :]

    @property
    def D(self):
        return diag_embed(self.lamM, self.lamm)

    def reconstruct(self):
        return self.Q @ self.D @ self.R


def diag_embed(a, b):
    """3x2 matrix with ``a`` and ``b`` on the diagonal and a zero third row."""
    return np.array([[a, 0.0], [0.0, b], [0.0, 0.0]], dtype=float)


def adj2(F):
    """Vector of the three 2x2 minors of a 3x2 matrix.

    The sign pattern makes ``adj2(grad y)`` the (unnormalized) normal of
    the deformed surface, and ``|adj2(F)|`` the areal stretch.

    Parameters
    ----------
    F : ndarray, shape (3, 2)

    Returns
    -------
    ndarray, shape (3,)
    """
    F = np.asarray(F, dtype=float)
    return np.array(
        [
            F[1, 0] * F[2, 1] - F[1, 1] * F[2, 0],
            -(F[0, 0] * F[2, 1] - F[0, 1] * F[2, 0]),
            F[0, 0] * F[1, 1] - F[0, 1] * F[1, 0],
        ]
    )


def _right_vector(C):
    # Leading unit eigenvector of the symmetric 2x2 matrix C, with a
    # deterministic sign and a tie-break along the first axis.
    a, c = C[0, 0], C[1, 1]
    b = C[0, 1]
    half_gap = 0.5 * (a - c)
    disc = np.hypot(half_gap, b)
    scale = max(abs(a), abs(c), 1.0)
    if disc <= 1e-15 * scale:
        # Repeated singular values: any frame works, pick the first axis.
        return np.array([1.0, 0.0])
    s1sq = 0.5 * (a + c) + disc
    # Two algebraically equivalent eigenvector expressions; use the
    # better conditioned one.
    v_a = np.array([b, s1sq - a])
    v_b = np.array([s1sq - c, b])
    v = v_a if v_a @ v_a >= v_b @ v_b else v_b
    v = v / np.linalg.norm(v)
    # Deterministic sign: first component of significant size positive.
    if abs(v[0]) > 1e-12:
        if v[0] < 0.0:
            v = -v
    elif v[1] < 0.0:
        v = -v
    return v


def _complete_left(u1):
    # Deterministic unit vector orthogonal to u1: start from the basis
    # vector least aligned with u1, then fix the sign.
    k = int(np.argmin(np.abs(u1)))
    u2 = np.zeros(3)
    u2[k] = 1.0
    u2 = u2 - (u2 @ u1) * u1
    u2 = u2 / np.linalg.norm(u2)
    for comp in u2:
        if abs(comp) > 1e-12:
            if comp < 0.0:
                u2 = -u2
            break
    return u2


def svd32(F):
    """Closed-form singular value decomposition of a 3x2 matrix.

    Solves the 2x2 symmetric eigenproblem of F^T F analytically and
    assembles F = Q D R with Q in SO(3) and R orthogonal.  Repeated or
    zero singular values get a deterministic frame; only ``lamM``,
    ``lamm`` and the reconstruction are unique in those cases.

    Parameters
    ----------
    F : ndarray, shape (3, 2)

    Returns
    -------
    SingularData
    """
    F = np.asarray(F, dtype=float)
    if F.shape != (3, 2):
        raise ValueError(f"expected a 3x2 matrix, got shape {F.shape}")
    if not np.all(np.isfinite(F)):
        raise ValueError("matrix entries must be finite")

    C = F.T @ F
    v1 = _right_vector(C)
    v2 = np.array([-v1[1], v1[0]])  # det [v1; v2] = +1

    w1 = F @ v1
    w2 = F @ v2
    lamM = float(np.linalg.norm(w1))
    lamm = float(np.linalg.norm(w2))
    if lamm > lamM:
        # Rounding near a repeated value can swap the order; restore it.
        v1, v2 = v2, -v1
        w1, w2 = w2, -w1
        lamM, lamm = lamm, lamM

    if lamM <= 0.0:
        Q = np.eye(3)
    else:
        u1 = w1 / lamM
        if lamm > _FRAME_TOL * max(1.0, lamM):
            u2 = w2 / lamm
            u2 = u2 - (u1 @ u2) * u1
            u2 = u2 / np.linalg.norm(u2)
        else:
            u2 = _complete_left(u1)
        u3 = np.cross(u1, u2)
        Q = np.column_stack([u1, u2, u3])

    R = np.vstack([v1, v2])
    return SingularData(lamM=lamM, lamm=lamm, delta=lamM * lamm, Q=Q, R=R)


def singular_values(F):
    """Singular values of a batch of 3x2 matrices, frames not computed.

    Parameters
    ----------
    F : ndarray, shape (..., 3, 2)

    Returns
    -------
    lamM, lamm : ndarray, shape (...)
    """
    F = np.asarray(F, dtype=float)
    a = np.einsum("...ij,...ij->...j", F, F)  # diag of F^T F
    b = np.einsum("...i,...i->...", F[..., 0], F[..., 1])
    half_tr = 0.5 * (a[..., 0] + a[..., 1])
    disc = np.hypot(0.5 * (a[..., 0] - a[..., 1]), b)
    s1 = np.sqrt(np.maximum(half_tr + disc, 0.0))
    s2 = np.sqrt(np.maximum(half_tr - disc, 0.0))
    return s1, s2


def rank_one_gap(A, B):
    """Second singular value of A - B; values at rounding scale certify
    that the difference has rank at most one."""
    return svd32(np.asarray(A, dtype=float) - np.asarray(B, dtype=float)).lamm
