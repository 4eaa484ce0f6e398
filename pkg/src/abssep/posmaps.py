"""Positive linear maps as first-class objects.

Ships the maps used throughout the toolkit: identity, transpose, the
reduction map, the Choi map on M_3, its two-parameter generalization
Phi_{b,c} (with a := 2-b-c), and the Breuer-Hall map on even dimensions.
Each map exposes a closed-form action; Choi matrices, duals and
id ⊗ map applications are materialized on demand.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import bipartite, matcore
from .errors import DegenerateWitness, InvalidDim, InvalidMatrix, InvalidVector

BC_PREDICATE_TOL = 1e-9


def breuer_hall_default_v(n: int) -> np.ndarray:
    """The anti-diagonal skew-symmetric unitary (+1 top half, -1 bottom half)."""
    if n < 4 or n % 2 != 0:
        raise InvalidDim("Breuer-Hall dimension must be even and >= 4")
    v = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        v[i, n - 1 - i] = 1.0 if i < n // 2 else -1.0
    return v


@dataclass(frozen=True)
class MapSpec:
    """A positive linear map given by kind and parameters; dims are equal in/out."""

    kind: str
    dim: int
    b: float = 0.0
    c: float = 0.0
    v: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in {
            "identity", "transpose", "reduction", "choi",
            "generalized_choi", "breuer_hall",
        }:
            raise ValueError(f"unknown map kind {self.kind!r}")
        if self.dim < 1:
            raise InvalidDim("map dimension must be positive")
        if self.kind == "choi" and self.dim != 3:
            raise InvalidDim("the Choi map lives on M_3")
        if self.kind == "generalized_choi":
            if self.dim != 3:
                raise InvalidDim("generalized Choi maps live on M_3")
            if self.b < 0 or self.c < 0:
                raise ValueError("generalized Choi parameters must satisfy b, c >= 0")
        if self.kind == "breuer_hall":
            n = self.dim
            if n < 4 or n % 2 != 0:
                raise InvalidDim("Breuer-Hall dimension must be even and >= 4")
            v = self.v if self.v is not None else breuer_hall_default_v(n)
            v = matcore.as_complex_matrix(v)
            if v.shape != (n, n):
                raise InvalidMatrix("Breuer-Hall V has the wrong shape")
            if np.linalg.norm(v.T + v) > 1e-10:
                raise InvalidMatrix("Breuer-Hall V must be skew-symmetric")
            if np.linalg.norm(v.conj().T @ v - np.eye(n)) > 1e-10:
                raise InvalidMatrix("Breuer-Hall V must be unitary")
            object.__setattr__(self, "v", v)

    @property
    def in_dim(self) -> int:
        return self.dim

    @property
    def out_dim(self) -> int:
        return self.dim


def identity_map(n: int) -> MapSpec:
    return MapSpec("identity", n)


def transpose_map(n: int) -> MapSpec:
    return MapSpec("transpose", n)


def reduction_map(n: int) -> MapSpec:
    """X -> (Tr(X) I - X) / (n - 1); on M_3 this equals Phi_{1,1}."""
    if n < 2:
        raise InvalidDim("reduction map needs n >= 2")
    return MapSpec("reduction", n)


def choi_map() -> MapSpec:
    return MapSpec("choi", 3)


def generalized_choi_map(b: float, c: float) -> MapSpec:
    return MapSpec("generalized_choi", 3, b=float(b), c=float(c))


def breuer_hall_map(n: int, v: np.ndarray | None = None) -> MapSpec:
    return MapSpec("breuer_hall", n, v=v)


def apply(phi: MapSpec, x) -> np.ndarray:
    """Apply the map's closed-form action to an in_dim x in_dim matrix."""
    x = matcore.as_complex_matrix(x)
    if x.shape != (phi.in_dim, phi.in_dim):
        raise InvalidDim(f"matrix shape {x.shape} does not match map dim {phi.in_dim}")
    if phi.kind == "identity":
        return x.copy()
    if phi.kind == "transpose":
        return x.T.copy()
    if phi.kind == "reduction":
        return (np.trace(x) * np.eye(phi.dim) - x) / (phi.dim - 1)
    if phi.kind == "choi":
        out = -x.copy()
        out[0, 0] = x[0, 0] + x[1, 1]
        out[1, 1] = x[1, 1] + x[2, 2]
        out[2, 2] = x[2, 2] + x[0, 0]
        return out / 2.0
    if phi.kind == "generalized_choi":
        b, c = phi.b, phi.c
        a = 2.0 - b - c
        out = -x.copy()
        out[0, 0] = a * x[0, 0] + b * x[1, 1] + c * x[2, 2]
        out[1, 1] = c * x[0, 0] + a * x[1, 1] + b * x[2, 2]
        out[2, 2] = b * x[0, 0] + c * x[1, 1] + a * x[2, 2]
        return out / 2.0
    if phi.kind == "breuer_hall":
        n, v = phi.dim, phi.v
        return (np.trace(x) * np.eye(n) - x - v @ x.T @ v.conj().T) / (n - 2)
    raise AssertionError(phi.kind)


def dual_map(phi: MapSpec) -> MapSpec:
    """Adjoint in the Hilbert-Schmidt inner product: Tr(Phi(X)Y) = Tr(X Phi†(Y))."""
    if phi.kind in {"identity", "transpose", "reduction", "breuer_hall"}:
        return phi
    if phi.kind == "choi":
        return generalized_choi_map(0.0, 1.0)
    if phi.kind == "generalized_choi":
        return generalized_choi_map(phi.c, phi.b)
    raise AssertionError(phi.kind)


def apply_id_tensor(phi: MapSpec, x, id_dim: int) -> np.ndarray:
    """(id_{id_dim} ⊗ Phi)(X), applying the map block-wise to the second factor."""
    d = phi.in_dim
    x = bipartite._check_dims(x, id_dim, d)
    blocks = x.reshape(id_dim, d, id_dim, d)
    out = np.empty((id_dim, phi.out_dim, id_dim, phi.out_dim), dtype=np.complex128)
    for i in range(id_dim):
        for j in range(id_dim):
            out[i, :, j, :] = apply(phi, blocks[i, :, j, :])
    return out.reshape(id_dim * phi.out_dim, id_dim * phi.out_dim)


def choi_matrix(phi: MapSpec) -> np.ndarray:
    """J(Phi) = n (id_n ⊗ Phi)(|psi+><psi+|)."""
    n = phi.in_dim
    return n * apply_id_tensor(phi, bipartite.max_entangled_projector(n), n)


def witness_from_map(phi: MapSpec, v) -> np.ndarray:
    """(id ⊗ Phi)(|v><v|); unit trace whenever the map is trace-preserving.

    Callers interested in the witness of a map's dual pass dual_map(phi).
    """
    v = np.asarray(v, dtype=np.complex128).ravel()
    if v.size % phi.in_dim != 0:
        raise InvalidVector("vector length is not a multiple of the map dimension")
    m = v.size // phi.in_dim
    v = bipartite._check_unit_vector(v, m * phi.in_dim)
    return apply_id_tensor(phi, np.outer(v, v.conj()), m)


def witness_from_schmidt(
    os: bipartite.OperatorSchmidt, m: int, n: int, k: int | None = None
) -> np.ndarray:
    """Unit-trace witness (I - sum_{i<=k} A_i ⊗ B_i) / Tr(...).

    Only the terms of the decomposition count: k defaults to the Schmidt
    rank, and the orthonormal completion at zero coefficients never enters.
    """
    rank = int(np.count_nonzero(os.coefficients))
    if k is None:
        k = rank
    if not 1 <= k <= rank:
        raise ValueError(f"k must be in 1..{rank} (the Schmidt rank), got {k}")
    w = np.eye(m * n, dtype=np.complex128)
    for i in range(k):
        w -= bipartite.kron(os.left_ops[i], os.right_ops[i])
    tr = np.trace(w)
    if abs(tr) < 1e-12:
        raise DegenerateWitness("witness trace vanishes; cannot normalize")
    return matcore.hermitize(w / tr)


def is_positive_bc(b: float, c: float) -> bool:
    """Positivity of Phi_{b,c}: b+c <= 1 or bc >= (b+c-1)²."""
    if b < 0 or c < 0:
        raise ValueError("parameters must satisfy b, c >= 0")
    return b + c <= 1.0 + BC_PREDICATE_TOL or b * c >= (b + c - 1.0) ** 2 - BC_PREDICATE_TOL


def is_completely_positive_bc(b: float, c: float) -> bool:
    """Phi_{b,c} is completely positive only at (0, 0)."""
    return abs(b) <= BC_PREDICATE_TOL and abs(c) <= BC_PREDICATE_TOL


def is_indecomposable_bc(b: float, c: float) -> bool:
    """Among positive non-CP members, indecomposability holds exactly for b != c."""
    return (
        is_positive_bc(b, c)
        and not is_completely_positive_bc(b, c)
        and abs(b - c) > BC_PREDICATE_TOL
    )


def is_exposed_bc(b: float, c: float) -> bool:
    """Exposedness: b != c, b+c > 1 and bc = (b+c-1)² (within tolerance)."""
    if b < 0 or c < 0:
        raise ValueError("parameters must satisfy b, c >= 0")
    return (
        abs(b - c) > BC_PREDICATE_TOL
        and b + c > 1.0 + BC_PREDICATE_TOL
        and abs(b * c - (b + c - 1.0) ** 2) <= BC_PREDICATE_TOL
    )
