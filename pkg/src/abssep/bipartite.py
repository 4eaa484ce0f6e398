"""Tensor-product structure on M_m ⊗ M_n.

Kronecker products, partial trace/transpose, the realignment rearrangement,
operator- and vector-Schmidt decompositions, standard states and operators,
and Haar-random unitary sampling.

Index convention: an operator X on M_m ⊗ M_n is an (mn)x(mn) array whose
row index is the row-major pair (i, k) with i in [m], k in [n]. The
realignment maps X to an m² x n² array with rows (i, j) and columns (k, l),
i.e. R(|i><j| ⊗ |k><l|) = |i><k| ⊗ |j><l|.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import matcore
from .errors import InvalidDim, InvalidMatrix, InvalidVector

VECTOR_NORM_TOL = 1e-9


class OperatorSchmidt(NamedTuple):
    coefficients: np.ndarray       # nonnegative, descending
    left_ops: list[np.ndarray]     # HS-orthonormal, m x m
    right_ops: list[np.ndarray]    # HS-orthonormal, n x n


def _check_dims(x: np.ndarray, m: int, n: int) -> np.ndarray:
    x = matcore.as_complex_matrix(x)
    if m < 1 or n < 1:
        raise InvalidDim(f"factor dims must be positive, got ({m}, {n})")
    if x.shape != (m * n, m * n):
        raise InvalidDim(f"operator shape {x.shape} does not match dims ({m}, {n})")
    return x


def kron(a, b) -> np.ndarray:
    """Kronecker product with the (i,k),(j,l) pairing convention."""
    return np.kron(matcore.as_complex_matrix(a), matcore.as_complex_matrix(b))


def partial_transpose(x, m: int, n: int) -> np.ndarray:
    """Transpose the second tensor factor."""
    x = _check_dims(x, m, n)
    return x.reshape(m, n, m, n).transpose(0, 3, 2, 1).reshape(m * n, m * n)


def partial_trace(x, m: int, n: int, subsystem: str = "second") -> np.ndarray:
    """Trace out one tensor factor; 'second' leaves an m x m matrix."""
    x = _check_dims(x, m, n)
    t = x.reshape(m, n, m, n)
    if subsystem == "second":
        return np.einsum("ikjk->ij", t)
    if subsystem == "first":
        return np.einsum("ikil->kl", t)
    raise ValueError(f"subsystem must be 'first' or 'second', got {subsystem!r}")


def realign(x, m: int, n: int) -> np.ndarray:
    """Realignment rearrangement, an m² x n² matrix with the same entries as X."""
    x = _check_dims(x, m, n)
    return x.reshape(m, n, m, n).transpose(0, 2, 1, 3).reshape(m * m, n * n)


def realign_trace_norm(x, m: int, n: int) -> float:
    """Trace norm of the realigned operator (the realignment criterion value)."""
    return matcore.schatten_norm(realign(x, m, n), "trace")


def operator_schmidt(x, m: int, n: int) -> OperatorSchmidt:
    """Operator-Schmidt decomposition X = sum_i c_i A_i ⊗ B_i.

    Returns min(m², n²) terms; coefficients are the singular values of the
    realignment. Terms with (near-)zero coefficient get an arbitrary
    orthonormal completion for the left operators.
    """
    r = realign(x, m, n)
    k = min(m * m, n * n)
    w, v = matcore.eigh(r.conj().T @ r)
    coeffs = np.sqrt(np.clip(w[:k], 0.0, None))
    # the A†A route resolves singular values only down to ~sqrt(eps); below
    # that they are numerically zero and get an orthonormal completion
    cutoff = 1e-8 * max(1.0, coeffs[0] if k else 1.0)
    coeffs[coeffs <= cutoff] = 0.0
    left_cols = np.zeros((m * m, k), dtype=np.complex128)
    good = []
    for i in range(k):
        if coeffs[i] > 0.0:
            left_cols[:, i] = (r @ v[:, i]) / coeffs[i]
            good.append(i)
    if len(good) < k:
        # complete the left family orthonormally; zero-coefficient terms do
        # not affect the reconstruction
        basis = np.linalg.qr(
            np.concatenate([left_cols[:, good], np.eye(m * m)], axis=1)
        )[0]
        fill = iter(range(len(good), m * m))
        for i in range(k):
            if coeffs[i] == 0.0:
                left_cols[:, i] = basis[:, next(fill)]
    left_ops = [left_cols[:, i].reshape(m, m) for i in range(k)]
    right_ops = [v[:, i].conj().reshape(n, n) for i in range(k)]
    return OperatorSchmidt(coeffs, left_ops, right_ops)


def _check_unit_vector(v, length: int | None = None) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128).ravel()
    if length is not None and v.size != length:
        raise InvalidVector(f"expected a vector of length {length}, got {v.size}")
    if not np.all(np.isfinite(v.real)) or not np.all(np.isfinite(v.imag)):
        raise InvalidVector("vector has non-finite entries")
    nv = float(np.linalg.norm(v))
    if abs(nv - 1.0) > VECTOR_NORM_TOL:
        raise InvalidVector(f"vector is not unit norm (|v| = {nv:.12g})")
    return v


def vector_schmidt(v, m: int, n: int) -> np.ndarray:
    """Schmidt coefficients of a unit vector in C^m ⊗ C^n, descending."""
    v = _check_unit_vector(v, m * n)
    return matcore.singular_values(v.reshape(m, n))[: min(m, n)]


def max_entangled(n: int) -> np.ndarray:
    """The standard maximally entangled unit vector (1/sqrt(n)) sum_i |ii>."""
    if n < 1:
        raise InvalidDim("n must be >= 1")
    v = np.zeros(n * n, dtype=np.complex128)
    v[:: n + 1] = 1.0 / np.sqrt(n)
    return v


def max_entangled_projector(n: int) -> np.ndarray:
    v = max_entangled(n)
    return np.outer(v, v.conj())


def swap_operator(n: int) -> np.ndarray:
    """The swap S(|a> ⊗ |b>) = |b> ⊗ |a> on C^n ⊗ C^n."""
    if n < 1:
        raise InvalidDim("n must be >= 1")
    s = np.zeros((n * n, n * n), dtype=np.complex128)
    for i in range(n):
        for k in range(n):
            s[i * n + k, k * n + i] = 1.0
    return s


def rng_stream(seed: int, stream: int | None = None) -> np.random.Generator:
    """Counter-based generator; stream splits are independent and reproducible."""
    if stream is None:
        seq = np.random.SeedSequence(int(seed))
    else:
        seq = np.random.SeedSequence(int(seed), spawn_key=(int(stream),))
    return np.random.Generator(np.random.Philox(seq))


def haar_unitary(n: int, seed: int | np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via complex Ginibre + phase-fixed QR."""
    if n < 1:
        raise InvalidDim("n must be >= 1")
    rng = seed if isinstance(seed, np.random.Generator) else rng_stream(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))[np.newaxis, :]


def random_density(dim: int, seed: int | np.random.Generator) -> np.ndarray:
    """Full-rank random density matrix from a Ginibre factor (GG†, normalized)."""
    if dim < 1:
        raise InvalidDim("dim must be >= 1")
    rng = seed if isinstance(seed, np.random.Generator) else rng_stream(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def min_unitary_overlap(spec_a, spec_b) -> float:
    """min_U Tr(A U B U†) for Hermitian A, B given by descending spectra.

    Equals sum_j a_j b_{n-j+1}, the anti-aligned pairing.
    """
    a = np.asarray(spec_a, dtype=np.float64)
    b = np.asarray(spec_b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise InvalidMatrix("spectra must be 1-d arrays of equal length")
    if np.any(np.diff(a) > 1e-12) or np.any(np.diff(b) > 1e-12):
        raise InvalidMatrix("spectra must be sorted descending")
    return float(np.dot(a, b[::-1]))
