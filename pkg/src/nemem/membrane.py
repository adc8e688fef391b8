"""Relaxed membrane energy, region classification, and effective stress.

Minimizing the 3D density over the thickness direction and the director
leaves a plane energy that depends on a 3x2 gradient only through its
largest singular value ``lamM`` and areal stretch ``delta``.  Its
relaxation admits a closed form with four regimes:

* ``L`` -- liquid: fine-scale wrinkling plus director oscillation drive
  the energy (and stress) to zero;
* ``M`` -- microstructure: in-plane director stripes, equi-biaxial tension;
* ``W`` -- wrinkling: out-of-plane oscillation, uniaxial tension;
* ``S`` -- solid: no relaxation, biaxial tension.

All evaluators accept scalars or arrays in the invariant plane; the
matrix-level entry points go through :func:`nemem.algebra.svd32`.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .algebra import adj2, svd32
from .constitutive import MaterialParams, step_length_tensor

__all__ = [
    "DomainError",
    "MembraneEval",
    "RankDeficientError",
    "Region",
    "classify",
    "membrane_stress",
    "minimize_thickness_vector",
    "plane_energy",
    "plane_energy_values",
    "psi",
    "relaxed_energy",
    "relaxed_energy_grad_fd",
    "relaxed_growth_constant",
    "StressState",
]

# Relative slack accepted before (lamM, delta) is declared unrealizable.
_INVALID_TOL = 1e-12
# A 3x2 matrix counts as rank two when delta exceeds this relative floor.
_RANK_TOL = 1e-12
# Closed comparison tolerance for the finite window of the third branch.
_GATE_TOL = 1e-14


class DomainError(ValueError):
    """Raised for evaluations requested outside their proven domain."""


class RankDeficientError(ValueError):
    """Raised when an operation needs a rank-two 3x2 matrix."""


class Region(enum.Enum):
    L = "L"
    M = "M"
    W = "W"
    S = "S"
    INVALID = "Invalid"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class MembraneEval:
    """Relaxed energy together with its classification.

    ``energy`` is zero exactly on region ``L`` (up to rounding near the
    region boundary)."""

    region: Region
    energy: float
    lamM: float
    delta: float


@dataclass(frozen=True)
class StressState:
    """Effective Cauchy stress of the membrane.

    ``sigma`` is the 3x3 plane-stress tensor assembled in the deformed
    principal frame; the principal values are never compressive."""

    sigma: np.ndarray
    classification: str
    principal_values: tuple
    principal_dirs: tuple
    region: Region


def _check_invariants(lamM, delta):
    lamM = np.asarray(lamM, dtype=float)
    delta = np.asarray(delta, dtype=float)
    if np.any(lamM < 0.0) or np.any(delta < 0.0):
        raise ValueError("stretch invariants must be non-negative")
    return lamM, delta


def classify(lamM, delta, params):
    """Region of the pair (lamM, delta).

    Boundary points are resolved with the fixed precedence L, S, W, M;
    the energy formulas agree on shared boundaries, so the precedence
    only fixes the reported tag.  Pairs with ``delta > lamM**2`` are not
    realizable by any 3x2 matrix and classify as ``Region.INVALID``.

    Parameters
    ----------
    lamM, delta : float
        Largest singular value and areal stretch, both >= 0.
    params : MaterialParams

    Returns
    -------
    Region
    """
    lamM = float(lamM)
    delta = float(delta)
    if lamM < 0.0 or delta < 0.0:
        raise ValueError(f"invariants must be non-negative, got ({lamM}, {delta})")
    if delta > lamM * lamM * (1.0 + _INVALID_TOL):
        return Region.INVALID
    r = params.r
    if lamM <= r ** (1.0 / 3.0) and delta <= r ** (1.0 / 6.0):
        return Region.L
    if np.sqrt(lamM) <= delta <= lamM * lamM / np.sqrt(r):
        return Region.S
    if delta < np.sqrt(lamM):
        return Region.W
    return Region.M


def psi(lamM, delta, params):
    """Scalar representative of the relaxed energy on the invariant plane.

    Vectorized over numpy arrays.  For realizable pairs
    (``delta <= lamM**2``) this is the four-regime closed form.  Pairs
    above the equi-biaxial line are not realizable by any matrix; there
    the convex representative is continued constantly in ``lamM`` (the
    value at ``lamM = sqrt(delta)``), which keeps the polyconvexity test
    function total.  Matrix-level callers never reach that branch.

    Parameters
    ----------
    lamM, delta : array_like
        Non-negative invariants.
    params : MaterialParams

    Returns
    -------
    ndarray or float
    """
    lamM, delta = _check_invariants(lamM, delta)
    scalar = lamM.ndim == 0 and delta.ndim == 0
    s, t = np.broadcast_arrays(np.atleast_1d(lamM), np.atleast_1d(delta))
    s = np.maximum(s, np.sqrt(t))  # constant continuation above delta = lamM^2

    r, mu = params.r, params.mu
    rc = r ** (1.0 / 3.0)
    rs = r ** (1.0 / 6.0)
    sqr = np.sqrt(r)

    in_L = (s <= rc) & (t <= rs)
    in_S = ~in_L & (np.sqrt(s) <= t) & (t * sqr <= s * s)
    in_W = ~in_L & ~in_S & (t < np.sqrt(s))
    in_M = ~(in_L | in_S | in_W)

    out = np.zeros_like(s)
    if np.any(in_S):
        ss, tt = s[in_S], t[in_S]
        out[in_S] = rc * (ss * ss / r + (tt / ss) ** 2 + 1.0 / tt**2) - 3.0
    if np.any(in_W):
        ss = s[in_W]
        out[in_W] = rc * (ss * ss / r + 2.0 / ss) - 3.0
    if np.any(in_M):
        tt = t[in_M]
        out[in_M] = rc * (2.0 * tt / sqr + 1.0 / tt**2) - 3.0
    out *= 0.5 * mu
    out[in_L] = 0.0
    return float(out[0]) if scalar else out.reshape(np.broadcast(lamM, delta).shape)


def plane_energy_values(lamM, delta, params):
    """Unrelaxed plane energy on the invariant plane (vectorized).

    The minimum of the three candidate branches produced by the exact
    thickness/director minimization; +inf where the matrix would be
    rank-deficient (``delta`` at rounding scale) and on the closed
    complement of the finite window of the third branch.
    """
    lamM, delta = _check_invariants(lamM, delta)
    scalar = lamM.ndim == 0 and delta.ndim == 0
    s, t = np.broadcast_arrays(
        np.atleast_1d(lamM).astype(float), np.atleast_1d(delta).astype(float)
    )

    r, mu = params.r, params.mu
    rc = r ** (1.0 / 3.0)
    sqr = np.sqrt(r)

    rank_ok = t > _RANK_TOL * np.maximum(1.0, s * s)
    out = np.full(s.shape, np.inf)
    if np.any(rank_ok):
        ss, tt = s[rank_ok], t[rank_ok]
        ratio2 = (tt / ss) ** 2
        inv_t2 = 1.0 / tt**2
        phi1 = rc * (ss * ss / r + ratio2 + inv_t2) - 3.0
        phi2 = rc * (ss * ss + ratio2 + inv_t2 / r) - 3.0
        prod = ss * tt
        gate = (prod >= (1.0 - _GATE_TOL) / sqr) & (prod <= (1.0 + _GATE_TOL) * sqr)
        phi3 = np.where(gate, rc * (ratio2 + 2.0 * ss / (sqr * tt)) - 3.0, np.inf)
        out[rank_ok] = 0.5 * mu * np.minimum(np.minimum(phi1, phi2), phi3)
    return float(out[0]) if scalar else out.reshape(np.broadcast(lamM, delta).shape)


def plane_energy(Ft, params):
    """Plane energy of a 3x2 gradient: thickness- and director-minimized
    3D density.  +inf for rank-deficient input.

    Agrees with direct two-variable numerical minimization of the 3D
    density over the thickness vector and the director.
    """
    sd = svd32(Ft)
    return plane_energy_values(sd.lamM, sd.delta, params)


def relaxed_energy(Ft, params):
    """Relaxed (effective) membrane energy of a 3x2 gradient.

    Finite for every input, including rank-deficient matrices, and zero
    exactly on region ``L``.

    Returns
    -------
    MembraneEval
    """
    sd = svd32(Ft)
    region = classify(sd.lamM, sd.delta, params)
    return MembraneEval(
        region=region,
        energy=psi(sd.lamM, sd.delta, params),
        lamM=sd.lamM,
        delta=sd.delta,
    )


def minimize_thickness_vector(Ft, n, params):
    """Optimal thickness vector of the constrained 3D minimization.

    For a rank-two 3x2 gradient and unit director the minimizer of the
    entropic density over the third column, subject to unit determinant,
    is ``l a / |l^(1/2) a|^2`` with ``a = adj2(Ft)`` and ``l`` the
    step-length tensor.  The result satisfies ``det (Ft | c) = 1``.

    Raises
    ------
    RankDeficientError
        If ``Ft`` has numerical rank below two.
    """
    Ft = np.asarray(Ft, dtype=float)
    sd = svd32(Ft)
    if sd.delta <= _RANK_TOL * max(1.0, sd.lamM**2):
        raise RankDeficientError(
            "thickness minimizer needs rank(Ft) = 2; "
            f"areal stretch {sd.delta:.3e} is at rounding scale"
        )
    ell = step_length_tensor(n, params)
    a = adj2(Ft)
    la = ell @ a
    return la / float(a @ la)  # a . l a = |l^(1/2) a|^2


def membrane_stress(Ft, params):
    """Effective Cauchy stress of the membrane.

    Defined on the open set 0 < delta < lamM^2 (distinct, nonzero
    singular values).  The tensor is assembled in the deformed principal
    frame; principal values are non-negative, with zero / uniaxial /
    equi-biaxial / biaxial tension on regions L / W / M / S.

    Raises
    ------
    DomainError
        Outside the open set, naming the violated strict inequality.
    """
    sd = svd32(Ft)
    lamM, delta = sd.lamM, sd.delta
    if not delta > 0.0:
        raise DomainError(
            f"stress is defined for 0 < delta; got delta = {delta} (violates 0 < delta)"
        )
    if not delta < lamM * lamM:
        raise DomainError(
            f"stress is defined for delta < lamM^2; got delta = {delta}, "
            f"lamM^2 = {lamM * lamM} (violates delta < lamM^2)"
        )
    region = classify(lamM, delta, params)
    r, mu = params.r, params.mu
    scale = mu * r ** (1.0 / 3.0)
    if region is Region.L:
        s1 = s2 = 0.0
    elif region is Region.M:
        s1 = s2 = scale * (delta / np.sqrt(r) - 1.0 / delta**2)
    elif region is Region.W:
        s1 = scale * (lamM**2 / r - 1.0 / lamM)
        s2 = 0.0
    else:
        s1 = scale * (lamM**2 / r - 1.0 / delta**2)
        s2 = scale * ((delta / lamM) ** 2 - 1.0 / delta**2)
    e1, e2 = sd.e1, sd.e2
    sigma = s1 * np.outer(e1, e1) + s2 * np.outer(e2, e2)
    labels = {
        Region.L: "zero",
        Region.M: "equibiaxial",
        Region.W: "uniaxial",
        Region.S: "biaxial",
    }
    return StressState(
        sigma=sigma,
        classification=labels[region],
        principal_values=(float(s1), float(s2)),
        principal_dirs=(e1.copy(), e2.copy()),
        region=region,
    )


def relaxed_energy_grad_fd(Ft, params, h=None):
    """Central finite-difference gradient of the relaxed energy.

    Intended for points at distance greater than ~10 h from a region
    boundary in the invariant plane, where the energy is smooth.

    Parameters
    ----------
    Ft : ndarray, shape (3, 2)
    params : MaterialParams
    h : float, optional
        Step; defaults to 1e-5 * max(1, |Ft|).
    """
    Ft = np.asarray(Ft, dtype=float)
    if h is None:
        h = 1e-5 * max(1.0, float(np.linalg.norm(Ft)))
    grad = np.zeros((3, 2))
    for i in range(3):
        for j in range(2):
            Fp = Ft.copy()
            Fm = Ft.copy()
            Fp[i, j] += h
            Fm[i, j] -= h
            ep = relaxed_energy(Fp, params).energy
            em = relaxed_energy(Fm, params).energy
            grad[i, j] = (ep - em) / (2.0 * h)
    return grad


def relaxed_growth_constant(params):
    """Constant c' with (1/c')|Ft|^2 - c' <= relaxed energy <= c'(|Ft|^2 + 1).

    Assembled from per-region bounds: the energy is at most
    (mu/2)(r^(1/3)|Ft|^2 + 1) everywhere and at least
    (mu/2)(r^(-2/3)|Ft|^2 - 3) outside L, while on L the norm itself is
    bounded by 2 r^(2/3).
    """
    mu, r = params.mu, params.r
    upper = max(0.5 * mu * (r ** (1.0 / 3.0) + 1.0), mu * (r ** (-1.0 / 6.0) + 1.0))
    lower_slope = 2.0 * r ** (2.0 / 3.0) / mu
    lower_offset = 0.5 * mu * (r ** (-2.0 / 3.0) + 3.0)
    liquid = np.sqrt(2.0) * r ** (1.0 / 3.0)
    return max(1.0, upper, lower_slope, lower_offset, liquid)
