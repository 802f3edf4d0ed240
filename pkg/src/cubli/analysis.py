"""Verification mathematics: characteristic polynomials, roots, rank tests,
closed-loop matrices, and a finite-difference Jacobian oracle.

Everything here is dense, small (n <= 8), and deliberately simple; the module
exists so the model and controller claims can be checked by independent
machinery rather than by the code that produced them.
"""

from __future__ import annotations

import numpy as np

from .control import DesignSpec, Gains
from .errors import DegenerateInputError, DivergenceError, ValidationError
from .plant import DerivedParams

_MAX_DIM = 8


def char_poly(a) -> np.ndarray:
    """Monic characteristic polynomial coefficients, highest degree first.

    Uses the Faddeev-LeVerrier trace recurrence, which is exact in the field
    of the inputs up to rounding and needs no eigensolver.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"matrix must be square, got shape {a.shape}")
    n = a.shape[0]
    if n > _MAX_DIM:
        raise ValidationError(f"matrix dimension {n} exceeds supported maximum {_MAX_DIM}")
    coeffs = np.empty(n + 1)
    coeffs[0] = 1.0
    m = np.zeros_like(a)
    ident = np.eye(n)
    for k in range(1, n + 1):
        m = a @ m + coeffs[k - 1] * ident
        coeffs[k] = -np.trace(a @ m) / k
    return coeffs


def companion_matrix(coeffs) -> np.ndarray:
    """Top-row companion matrix of a monic polynomial."""
    c = np.asarray(coeffs, dtype=float)
    c = c / c[0]
    n = len(c) - 1
    m = np.zeros((n, n))
    m[0, :] = -c[1:]
    m[1:, :-1] += np.eye(n - 1)
    return m


def poly_roots(coeffs) -> np.ndarray:
    """All roots of the polynomial via companion-matrix eigenvalues."""
    c = np.atleast_1d(np.asarray(coeffs, dtype=float))
    nonzero = np.nonzero(np.abs(c) > 0.0)[0]
    if len(nonzero) == 0:
        raise DegenerateInputError("cannot take roots of the zero polynomial")
    c = c[nonzero[0] :]  # strip exact leading zeros
    if len(c) - 1 > _MAX_DIM:
        raise ValidationError(f"degree {len(c) - 1} exceeds supported maximum {_MAX_DIM}")
    if len(c) == 1:
        return np.array([], dtype=complex)
    # trailing zero coefficients are exact roots at the origin
    n_zero_roots = 0
    while abs(c[-1]) == 0.0 and len(c) > 1:
        c = c[:-1]
        n_zero_roots += 1
    roots = np.zeros(n_zero_roots, dtype=complex)
    if len(c) > 1:
        roots = np.concatenate([np.linalg.eigvals(companion_matrix(c)), roots])
    return roots


def controllability_matrix(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float).reshape(a.shape[0], -1)
    blocks = [b]
    for _ in range(a.shape[0] - 1):
        blocks.append(a @ blocks[-1])
    return np.hstack(blocks)


def controllability_rank(a, b, tol: float = 1e-9) -> int:
    """Rank of [B AB ... A^(n-1)B], singular values below tol * s_max dropped."""
    s = np.linalg.svd(controllability_matrix(a, b), compute_uv=False)
    if len(s) == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def fd_jacobian(f, x0, step: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian of f at x0, step scaled per component.

    Oracle for the analytic linearizations; only valid where f is smooth
    (disable Coulomb/drag friction before differentiating across zero wheel
    speed).
    """
    x0 = np.asarray(x0, dtype=float)
    f0 = np.asarray(f(x0), dtype=float)
    if not np.all(np.isfinite(f0)):
        raise DivergenceError("non-finite function value at the expansion point")
    jac = np.empty((len(f0), len(x0)))
    for i in range(len(x0)):
        h = step * max(1.0, abs(x0[i]))
        xp = x0.copy()
        xm = x0.copy()
        xp[i] += h
        xm[i] -= h
        fp, fm = np.asarray(f(xp), dtype=float), np.asarray(f(xm), dtype=float)
        if not (np.all(np.isfinite(fp)) and np.all(np.isfinite(fm))):
            raise DivergenceError(f"non-finite function value while differentiating component {i}")
        jac[:, i] = (fp - fm) / (2.0 * h)
    return jac


def closed_loop_matrix(gains: Gains, dp: DerivedParams) -> np.ndarray:
    """Linearized closed loop of the full regulator in (sigma_e, theta_w,
    omega_c, omega_w) coordinates about the upright reference.

    Row 3 is the regulator itself (omega_c_dot = u); row 4 is the wheel under
    the linearizing torque, omega_w_dot = -delta * sigma_e - gamma * u, the
    gravity reaction plus the gamma-amplified command.
    """
    g, k = dp.gamma, gains
    return np.array(
        [
            [0.0, 0.0, -1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [k.k_p, -k.k_pw, -k.k_d, -k.k_dw],
            [-(dp.delta + g * k.k_p), g * k.k_pw, g * k.k_d, g * k.k_dw],
        ]
    )


def design_poly(spec: DesignSpec) -> np.ndarray:
    """Coefficients of (s^2 + 2 zeta wn s + wn^2)(s + alpha zeta wn)^2."""
    z, wn, a = spec.zeta, spec.omega_n, spec.alpha
    quad = np.array([1.0, 2.0 * z * wn, wn**2])
    lin = np.array([1.0, a * z * wn])
    return np.convolve(np.convolve(quad, lin), lin)


def designed_poles(spec: DesignSpec) -> np.ndarray:
    """The four target poles: a complex pair and a repeated real wheel pole."""
    z, wn, a = spec.zeta, spec.omega_n, spec.alpha
    wd = wn * np.sqrt(1.0 - z**2)
    return np.array([-z * wn + 1j * wd, -z * wn - 1j * wd, -a * z * wn, -a * z * wn])


def spectrum_mismatch(computed, expected, cluster_tol: float | None = None) -> float:
    """Worst distance between matched eigenvalue clusters.

    Repeated expected eigenvalues are compared against the mean of their
    matched computed group: a defective multiple eigenvalue splits by
    O(sqrt(eps)) under rounding but its cluster mean stays O(eps) accurate,
    so this measures the meaningful error.
    """
    computed = list(np.asarray(computed, dtype=complex))
    expected = np.asarray(expected, dtype=complex)
    if len(computed) != len(expected):
        raise ValidationError("spectra must have equal length")
    scale = max(1.0, float(np.max(np.abs(expected))))
    tol = cluster_tol if cluster_tol is not None else 1e-6 * scale
    clusters: list[list[complex]] = []
    for val in expected:
        for cl in clusters:
            if abs(val - cl[0]) <= tol:
                cl.append(val)
                break
        else:
            clusters.append([val])
    worst = 0.0
    for cl in clusters:
        centre = np.mean(cl)
        matched = []
        for _ in cl:
            j = int(np.argmin([abs(c - centre) for c in computed]))
            matched.append(computed.pop(j))
        worst = max(worst, abs(np.mean(matched) - centre))
    return worst
