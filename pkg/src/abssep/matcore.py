"""Dense complex Hermitian linear algebra.

Eigendecomposition is done by Householder tridiagonalization followed by
implicit-shift QL iteration. Dimensions in this package stay below ~100,
so the routine favours robustness and determinism over speed.

Matrices are plain numpy arrays throughout; ``hermitize`` is the gateway
that enforces the Hermitian contract (inputs further than HERMITIZE_TOL
from their Hermitian part are rejected, anything closer is symmetrized).
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import InvalidMatrix

HERMITIZE_TOL = 1e-8
DEFAULT_PSD_TOL = 1e-9

_EPS = float(np.finfo(np.float64).eps)
_MAX_QL_SWEEPS = 64


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray   # real, descending
    eigenvectors: np.ndarray  # unitary, column i pairs with eigenvalues[i]


class PsdReport:
    """Boolean verdict of a PSD test together with the minimum eigenvalue."""

    __slots__ = ("ok", "min_eigenvalue")

    def __init__(self, ok: bool, min_eigenvalue: float):
        self.ok = bool(ok)
        self.min_eigenvalue = float(min_eigenvalue)

    def __bool__(self) -> bool:
        return self.ok

    def __repr__(self) -> str:
        return f"PsdReport(ok={self.ok}, min_eigenvalue={self.min_eigenvalue:.3e})"


def as_complex_matrix(a) -> np.ndarray:
    """Validate and return a finite 2-d complex array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise InvalidMatrix(f"expected a 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise InvalidMatrix("matrix has non-finite entries")
    return m


def hermitize(a, tol: float = HERMITIZE_TOL) -> np.ndarray:
    """Return the exactly Hermitian form (A + A†)/2, rejecting far-from-Hermitian input."""
    m = as_complex_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise InvalidMatrix(f"Hermitian matrix must be square, got {m.shape}")
    defect = np.linalg.norm(m - m.conj().T)
    if defect > tol * (1.0 + np.linalg.norm(m)):
        raise InvalidMatrix(f"matrix is not Hermitian (defect {defect:.3e})")
    return (m + m.conj().T) / 2.0


def _tridiagonalize(a: np.ndarray):
    """Reduce Hermitian A to real symmetric tridiagonal form.

    Returns (d, e, q) with A = Q T Q†, diag(T) = d and subdiag(T) = e >= 0.
    """
    n = a.shape[0]
    a = a.copy()
    q = np.eye(n, dtype=np.complex128)
    for k in range(n - 2):
        x = a[k + 1:, k]
        nx = math.sqrt(float(np.real(np.vdot(x, x))))
        if nx == 0.0:
            continue
        ax0 = abs(x[0])
        phase = x[0] / ax0 if ax0 > 0.0 else 1.0
        v = x.copy()
        v[0] += phase * nx
        nv = math.sqrt(float(np.real(np.vdot(v, v))))
        if nv == 0.0:
            continue
        v /= nv
        # two-sided reflector I - 2vv† on the trailing block
        w = v.conj() @ a[k + 1:, k:]
        a[k + 1:, k:] -= 2.0 * np.outer(v, w)
        w2 = a[k:, k + 1:] @ v
        a[k:, k + 1:] -= 2.0 * np.outer(w2, v.conj())
        q[:, k + 1:] -= 2.0 * np.outer(q[:, k + 1:] @ v, v.conj())
    d = a.diagonal().real.copy()
    if n == 1:
        return d, np.zeros(0), q
    e = a.diagonal(-1).copy()
    # rotate away subdiagonal phases so the tridiagonal matrix is real
    ph = np.ones(n, dtype=np.complex128)
    for i in range(n - 1):
        mag = abs(e[i])
        ph[i + 1] = ph[i] * (e[i] / mag) if mag > 0.0 else ph[i]
    q *= ph[np.newaxis, :]
    return d, np.abs(e), q


def _ql_implicit(d: np.ndarray, e: np.ndarray, z: np.ndarray | None):
    """Implicit-shift QL on a real symmetric tridiagonal matrix, in place.

    d: diagonal (overwritten with eigenvalues), e: subdiagonal (destroyed),
    z: optional matrix whose columns accumulate the eigenvectors.
    """
    n = d.size
    if n == 1:
        return
    e = np.append(e, 0.0)
    for low in range(n):
        for sweep in range(_MAX_QL_SWEEPS + 1):
            for m in range(low, n - 1):
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd:
                    break
            else:
                m = n - 1
            if m == low:
                break
            if sweep == _MAX_QL_SWEEPS:
                raise InvalidMatrix("QL iteration failed to converge")
            g = (d[low + 1] - d[low]) / (2.0 * e[low])
            r = math.hypot(g, 1.0)
            g = d[m] - d[low] + e[low] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            interrupted = False
            for i in range(m - 1, low - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    interrupted = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if z is not None:
                    zc = z[:, i + 1].copy()
                    z[:, i + 1] = s * z[:, i] + c * zc
                    z[:, i] = c * z[:, i] - s * zc
            if interrupted:
                continue
            d[low] -= p
            e[low] = g
            e[m] = 0.0


def eigh(a, tol: float = HERMITIZE_TOL) -> EigenDecomposition:
    """Full eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Ties are broken deterministically by the pre-sort index.
    """
    h = hermitize(a, tol=tol)
    d, e, q = _tridiagonalize(h)
    _ql_implicit(d, e, q)
    order = np.argsort(-d, kind="stable")
    return EigenDecomposition(d[order], np.ascontiguousarray(q[:, order]))


def eigvalsh(a, tol: float = HERMITIZE_TOL) -> np.ndarray:
    """Eigenvalues only (descending); skips eigenvector accumulation."""
    h = hermitize(a, tol=tol)
    d, e, _ = _tridiagonalize(h)
    _ql_implicit(d, e, None)
    return d[np.argsort(-d, kind="stable")]


def singular_values(a) -> np.ndarray:
    """Singular values (descending) via the eigenvalues of A†A, clamped at 0."""
    m = as_complex_matrix(a)
    w = eigvalsh(m.conj().T @ m)
    return np.sqrt(np.clip(w, 0.0, None))


def schatten_norm(a, kind: str) -> float:
    """Schatten norm: kind is 'trace', 'frobenius' or 'operator'."""
    m = as_complex_matrix(a)
    if kind == "frobenius":
        return float(np.linalg.norm(m))
    if kind == "trace":
        return float(np.sum(singular_values(m)))
    if kind == "operator":
        return float(singular_values(m)[0])
    raise ValueError(f"unknown Schatten norm selector {kind!r}")


def is_psd(a, tol: float = DEFAULT_PSD_TOL) -> PsdReport:
    """PSD test with relative tolerance: min eig >= -tol * max(1, operator norm)."""
    w = eigvalsh(a)
    lam_min = float(w[-1])
    op = max(abs(float(w[0])), abs(lam_min))
    return PsdReport(lam_min >= -tol * max(1.0, op), lam_min)


def matrix_to_json(a) -> dict:
    """Encode a matrix in the shared JSON format (row-major re/im lists)."""
    m = as_complex_matrix(a)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "re": [float(v) for v in m.real.ravel()],
        "im": [float(v) for v in m.imag.ravel()],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    """Decode the shared matrix JSON format, rejecting length mismatches."""
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        re = obj["re"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidMatrix(f"malformed matrix JSON: {exc}") from exc
    if rows < 1 or cols < 1:
        raise InvalidMatrix("matrix dims must be positive")
    im = obj.get("im", [0.0] * (rows * cols))
    if len(re) != rows * cols or len(im) != rows * cols:
        raise InvalidMatrix("re/im length does not match rows*cols")
    m = np.asarray(re, dtype=np.float64) + 1j * np.asarray(im, dtype=np.float64)
    return as_complex_matrix(m.reshape(rows, cols))
