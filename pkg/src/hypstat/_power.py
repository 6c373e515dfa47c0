"""Dominant-eigenvalue machinery shared by the coding and spectral modules.

Only dominant-eigenvalue methods are used, never a general eigensolver:

* real nonnegative matrices: power iteration on ``M + c*I`` with shift
  ``c = max row sum``.  The shift makes the iteration converge even when the
  matrix is periodic (the Perron root of a nonnegative matrix shifts by
  exactly ``c``, while the other peripheral eigenvalues lose their tie).
* complex matrices: block orthogonal iteration (block size 2) on ``M^p``
  where ``p`` is a period hint; the projected 2x2 eigenvalues are evaluated
  in closed form.  Raising to the ``p``-th power collapses a peripheral
  group ``lambda * exp(2*pi*i*k/p)`` onto the single eigenvalue
  ``lambda^p``, for which the iteration converges geometrically.

The iteration aims for residual 1e-13 (with a stagnation guard) so that
downstream second differences of the pressure keep enough accuracy; the
contractual bound callers may rely on is ``RESIDUAL_CONTRACT``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError

RESIDUAL_CONTRACT = 1e-12
_RESIDUAL_TARGET = 1e-13
_MAX_ITERATIONS = 1_000_000
_STAGNATION_WINDOW = 64
_COMPLEX_SEED = 20240817


@dataclass(frozen=True)
class PerronData:
    """Dominant-eigenvalue data of a nonnegative matrix."""

    value: float
    right: np.ndarray
    left: np.ndarray
    iterations: int
    residual: float


def _power_iterate(matrix: np.ndarray) -> tuple[float, np.ndarray, int, float]:
    """Return (Perron root, right vector, iterations, residual) of a nonnegative matrix."""
    dim = matrix.shape[0]
    if dim == 0:
        return 0.0, np.zeros(0), 0, 0.0
    row_sums = matrix.sum(axis=1)
    shift = float(row_sums.max(initial=0.0))
    if shift == 0.0:
        return 0.0, np.full(dim, 1.0 / dim), 0, 0.0
    shifted = matrix + shift * np.eye(dim)
    x = np.full(dim, 1.0 / dim)
    best_res = math.inf
    best: tuple[float, np.ndarray, int] = (0.0, x, 0)
    since_improvement = 0
    for iteration in range(1, _MAX_ITERATIONS + 1):
        y = shifted @ x
        total = y.sum()
        x = y / total
        mx = matrix @ x
        value = float(x @ mx) / float(x @ x)
        residual = float(np.abs(mx - value * x).max()) / float(np.abs(x).max())
        if residual < best_res:
            best_res = residual
            best = (value, x.copy(), iteration)
            since_improvement = 0
        else:
            since_improvement += 1
        if best_res <= _RESIDUAL_TARGET:
            break
        if since_improvement >= _STAGNATION_WINDOW and best_res <= RESIDUAL_CONTRACT:
            break
    value, x, iteration = best
    if best_res > RESIDUAL_CONTRACT:
        raise NumericalError(
            f"power iteration did not reach residual {RESIDUAL_CONTRACT:g} "
            f"after {iteration} iterations (best residual {best_res:.3e})"
        )
    return value, x, iteration, best_res


def perron_root(matrix: np.ndarray) -> PerronData:
    """Perron root and left/right vectors of a square nonnegative matrix.

    Parameters
    ----------
    matrix : ndarray
        Square nonnegative real matrix.

    Returns
    -------
    PerronData
        Dominant eigenvalue, right and left eigenvectors (1-norm one,
        nonnegative), iteration count, and achieved residual
        ``max|Mv - lam*v| / max|v|``.
    """
    value, right, iters_r, res_r = _power_iterate(np.asarray(matrix, dtype=float))
    _, left, iters_l, res_l = _power_iterate(np.asarray(matrix, dtype=float).T)
    return PerronData(
        value=value,
        right=right,
        left=left,
        iterations=iters_r + iters_l,
        residual=max(res_r, res_l),
    )


def _eigenvalues_2x2(t: np.ndarray) -> tuple[complex, complex]:
    """Closed-form eigenvalues of a 2x2 complex matrix."""
    tr = t[0, 0] + t[1, 1]
    det = t[0, 0] * t[1, 1] - t[0, 1] * t[1, 0]
    disc = cmath.sqrt(tr * tr / 4.0 - det)
    return tr / 2.0 + disc, tr / 2.0 - disc


def dominant_modulus(matrix: np.ndarray, period_hint: int = 1) -> tuple[float, int, float]:
    """Largest eigenvalue modulus of a complex matrix.

    Parameters
    ----------
    matrix : ndarray
        Square complex matrix.
    period_hint : int
        Period of the underlying nonnegative support; the iteration runs on
        ``matrix**period_hint`` so peripheral eigenvalue groups coalesce.

    Returns
    -------
    (modulus, iterations, residual)
        ``residual`` is the smaller of the single-vector residual
        ``max|N q - mu q| / max|q|`` and the invariant-subspace residual,
        both relative to ``max(1, |mu|)``.
    """
    m = np.asarray(matrix, dtype=complex)
    dim = m.shape[0]
    if dim == 0:
        return 0.0, 0, 0.0
    p = max(1, int(period_hint))
    n = np.linalg.matrix_power(m, p) if p > 1 else m
    if float(np.abs(n).max(initial=0.0)) == 0.0:
        return 0.0, 0, 0.0
    block = min(dim, 2)
    rng = np.random.default_rng(_COMPLEX_SEED)
    q = rng.standard_normal((dim, block)) + 1j * rng.standard_normal((dim, block))
    q, _ = np.linalg.qr(q)
    best_res = math.inf
    best_mu = 0.0
    best_iter = 0
    since_improvement = 0
    for iteration in range(1, _MAX_ITERATIONS + 1):
        z = n @ q
        if float(np.abs(z).max()) == 0.0:
            return 0.0, iteration, 0.0
        q, _ = np.linalg.qr(z)
        nq = n @ q
        t = q.conj().T @ nq
        q1 = q[:, 0]
        lam1 = t[0, 0]
        res1 = float(np.abs(nq[:, 0] - lam1 * q1).max())
        res1 /= float(np.abs(q1).max()) * max(1.0, abs(lam1))
        if block == 2:
            eig_a, eig_b = _eigenvalues_2x2(t)
            mu_sub = max(abs(eig_a), abs(eig_b))
            res2 = float(np.abs(nq - q @ t).max())
            res2 /= float(np.abs(q).max()) * max(1.0, mu_sub)
        else:
            mu_sub = abs(lam1)
            res2 = res1
        if res1 <= res2:
            mu, res = abs(lam1), res1
        else:
            mu, res = mu_sub, res2
        if res < best_res:
            best_res = res
            best_mu = mu
            best_iter = iteration
            since_improvement = 0
        else:
            since_improvement += 1
        if best_res <= _RESIDUAL_TARGET:
            break
        if since_improvement >= _STAGNATION_WINDOW and best_res <= RESIDUAL_CONTRACT:
            break
    if best_res > RESIDUAL_CONTRACT:
        raise NumericalError(
            f"block orthogonal iteration did not reach residual {RESIDUAL_CONTRACT:g} "
            f"after {best_iter} iterations (best residual {best_res:.3e})"
        )
    return best_mu ** (1.0 / p), best_iter, best_res


def power_growth_log(matrix: np.ndarray, steps: int = 200) -> float:
    """Second method for the dominant modulus: ``log ||M^n x||_inf / n``.

    Coarse (error ``O(1/n)``) but structurally independent of the orthogonal
    iteration; used to cross-validate near-tie spectral radii.
    """
    m = np.asarray(matrix, dtype=complex)
    dim = m.shape[0]
    if dim == 0:
        return -math.inf
    rng = np.random.default_rng(_COMPLEX_SEED + 1)
    x = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    x /= float(np.abs(x).max())
    log_norm = 0.0
    for _ in range(steps):
        x = m @ x
        scale = float(np.abs(x).max())
        if scale == 0.0:
            return -math.inf
        x /= scale
        log_norm += math.log(scale)
    return log_norm / steps
