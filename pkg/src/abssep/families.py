"""Parametric state families with closed-form absolute-separability thresholds.

Werner states (I - alpha S)/(n² - n alpha), isotropic states
(1-alpha)/n² I + alpha |psi+><psi+|, and full-rank mixtures of the
maximally mixed state with a UPB-complement state on M_3 ⊗ M_3.
Classification thresholds are stored as exact expressions and compared
with 1e-12 slack.
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np

from . import absppt, bipartite, matcore
from .errors import InvalidDim, InvalidState, InvalidVector

THRESHOLD_SLACK = 1e-12

UPB_ABS_PPT_THRESHOLD = 9.0 * (10.0 - math.sqrt(17.0)) / 83.0   # approx 0.6373
UPB_ABS_SEP_THRESHOLD = 1.0 - 1.0 / math.sqrt(10.0)             # approx 0.6838


class WernerClass(Enum):
    ABS_SEP = "AbsSep"
    NOT_ABS_PPT = "NotAbsPPT"
    UNKNOWN = "Unknown"


class IsotropicClass(Enum):
    ABS_SEP = "AbsSep"
    NOT_ABS_PPT = "NotAbsPPT"


class UpbClass(Enum):
    ABS_PPT_AND_ABS_SEP = "AbsPPT_and_AbsSep"
    ABS_PPT_ONLY_KNOWN = "AbsPPT_only_known"
    NOT_ABS_PPT = "NotAbsPPT"


def _check_werner(n: int, alpha: float):
    if n < 2:
        raise InvalidDim("Werner states need n >= 2")
    if not -1.0 <= alpha <= 1.0:
        raise InvalidState(f"Werner parameter alpha = {alpha} outside [-1, 1]")


def _check_isotropic(n: int, alpha: float):
    if n < 2:
        raise InvalidDim("isotropic states need n >= 2")
    lo = -1.0 / (n * n - 1.0)
    if not lo - THRESHOLD_SLACK <= alpha <= 1.0 + THRESHOLD_SLACK:
        raise InvalidState(f"isotropic parameter alpha = {alpha} outside [{lo:.6g}, 1]")


def _check_upb_p(p: float):
    if not 0.0 < p < 1.0:
        raise InvalidState(f"mixture parameter p = {p} outside (0, 1)")


def werner_state(n: int, alpha: float) -> np.ndarray:
    _check_werner(n, alpha)
    s = bipartite.swap_operator(n)
    return (np.eye(n * n) - alpha * s) / (n * n - n * alpha)


def werner_spectrum(n: int, alpha: float) -> absppt.Spectrum:
    """(1 -+ alpha) eigenvalues with multiplicities n(n+1)/2 and n(n-1)/2."""
    _check_werner(n, alpha)
    norm = n * n - n * alpha
    sym = np.full(n * (n + 1) // 2, (1.0 - alpha) / norm)
    anti = np.full(n * (n - 1) // 2, (1.0 + alpha) / norm)
    return absppt.Spectrum(n, n, np.concatenate([sym, anti]))


def isotropic_state(n: int, alpha: float) -> np.ndarray:
    _check_isotropic(n, alpha)
    return (1.0 - alpha) / (n * n) * np.eye(n * n) + alpha * bipartite.max_entangled_projector(n)


def isotropic_spectrum(n: int, alpha: float) -> absppt.Spectrum:
    """alpha + (1-alpha)/n² once, (1-alpha)/n² with multiplicity n²-1."""
    _check_isotropic(n, alpha)
    vals = np.full(n * n, (1.0 - alpha) / (n * n))
    vals[0] += alpha
    return absppt.Spectrum(n, n, vals)


def tiles_upb() -> list[np.ndarray]:
    """The Tiles unextendible product basis in C³ ⊗ C³ (five product vectors)."""
    e = np.eye(3, dtype=np.complex128)
    r2 = math.sqrt(2.0)
    ones = (e[0] + e[1] + e[2]) / math.sqrt(3.0)
    vecs = [
        np.kron(e[0], (e[0] - e[1]) / r2),
        np.kron(e[2], (e[1] - e[2]) / r2),
        np.kron((e[0] - e[1]) / r2, e[2]),
        np.kron((e[1] - e[2]) / r2, e[0]),
        np.kron(ones, ones),
    ]
    return vecs


def validate_upb(vectors: list[np.ndarray], tol: float = 1e-10) -> None:
    """Check five mutually orthogonal product unit vectors in C³ ⊗ C³."""
    if len(vectors) != 5:
        raise InvalidVector("a UPB in C³ ⊗ C³ has exactly five vectors")
    for v in vectors:
        vv = np.asarray(v).ravel()
        if vv.size != 9:
            raise InvalidVector("UPB vectors must live in C³ ⊗ C³")
        if abs(np.linalg.norm(vv) - 1.0) > tol:
            raise InvalidVector("UPB vectors must be unit norm")
        # rank-1 check via 2x2 minors; singular values only resolve to
        # ~sqrt(eps) so the Schmidt coefficient itself is checked loosely
        mat = vv.reshape(3, 3)
        for r in range(2):
            for s in range(r + 1, 3):
                for u in range(2):
                    for w in range(u + 1, 3):
                        minor = mat[r, u] * mat[s, w] - mat[r, w] * mat[s, u]
                        if abs(minor) > tol:
                            raise InvalidVector("UPB vectors must be product vectors")
        if bipartite.vector_schmidt(vv, 3, 3)[1] > 1e-7:
            raise InvalidVector("UPB vectors must be product vectors")
    for i in range(5):
        for j in range(i + 1, 5):
            if abs(np.vdot(vectors[i], vectors[j])) > tol:
                raise InvalidVector(f"UPB vectors {i} and {j} are not orthogonal")


def upb_complement_state(vectors: list[np.ndarray] | None = None) -> np.ndarray:
    """The PPT entangled state (I - sum |v_i><v_i|) / 4 from a UPB."""
    vecs = tiles_upb() if vectors is None else vectors
    validate_upb(vecs)
    proj = np.eye(9, dtype=np.complex128)
    for v in vecs:
        proj -= np.outer(v, np.conj(v))
    return proj / 4.0


def upb_state(p: float, vectors: list[np.ndarray] | None = None) -> np.ndarray:
    """Full-rank mixture p I/9 + (1-p) * (UPB complement state)."""
    _check_upb_p(p)
    return p * np.eye(9) / 9.0 + (1.0 - p) * upb_complement_state(vectors)


def upb_spectrum(p: float) -> absppt.Spectrum:
    """p/9 with multiplicity 5 and (9-5p)/36 with multiplicity 4.

    Depends only on |UPB| = 5, not on which UPB was mixed in.
    """
    _check_upb_p(p)
    vals = np.concatenate([np.full(5, p / 9.0), np.full(4, (9.0 - 5.0 * p) / 36.0)])
    return absppt.Spectrum(3, 3, vals)


def werner_lmi_case_matrices(n: int, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """The two special-form LMIs from the Werner analysis.

    Case 1 (alpha > 0 side): all diagonal 2-2alpha, off-diagonal -2alpha.
    Case 2 (alpha < 0 side): (n-1)-block with diagonal 2+2alpha and
    off-diagonal 2alpha, plus an isolated 2-2alpha entry.
    """
    _check_werner(n, alpha)
    case1 = np.full((n, n), -2.0 * alpha)
    np.fill_diagonal(case1, 2.0 - 2.0 * alpha)
    case2 = np.zeros((n, n))
    case2[: n - 1, : n - 1] = 2.0 * alpha
    np.fill_diagonal(case2, 2.0 + 2.0 * alpha)
    case2[n - 1, n - 1] = 2.0 - 2.0 * alpha
    return case1, case2


def werner_lmi_min_eigs(n: int, alpha: float) -> tuple[float, float]:
    """Closed-form minimum eigenvalues of the two Werner LMIs."""
    _check_werner(n, alpha)
    case1 = min(2.0 - 2.0 * n * alpha, 2.0)
    case2 = min(2.0 + 2.0 * (n - 1.0) * alpha, 2.0, 2.0 - 2.0 * alpha)
    return case1, case2


def werner_classify(n: int, alpha: float) -> WernerClass:
    """Absolutely separable for |alpha| <= 1/n, not absolutely PPT outside
    [-1/(n-1), 1/n]; the band [-1/(n-1), -1/n) is open."""
    _check_werner(n, alpha)
    if -1.0 / n - THRESHOLD_SLACK <= alpha <= 1.0 / n + THRESHOLD_SLACK:
        return WernerClass.ABS_SEP
    if alpha > 1.0 / n or alpha < -1.0 / (n - 1.0) - THRESHOLD_SLACK:
        return WernerClass.NOT_ABS_PPT
    return WernerClass.UNKNOWN


def werner_abs_ppt_verdict(n: int, alpha: float) -> absppt.AbsPptVerdict:
    """Exact LMI verdict; only available at desk scale (n <= 3)."""
    if n > 3:
        raise InvalidDim("exact Werner absolute-PPT check is limited to n <= 3")
    return absppt.is_abs_ppt(werner_spectrum(n, alpha))


def isotropic_classify(n: int, alpha: float) -> IsotropicClass:
    """Absolutely separable iff absolutely PPT iff alpha <= 2/(2+n²)."""
    _check_isotropic(n, alpha)
    if alpha <= 2.0 / (2.0 + n * n) + THRESHOLD_SLACK:
        return IsotropicClass.ABS_SEP
    return IsotropicClass.NOT_ABS_PPT


def upb_lmi_matrix(p: float) -> np.ndarray:
    """The (coinciding) LMIs of the UPB mixture, (1/36)[[8p, 9p-9, ...]]."""
    _check_upb_p(p)
    q = 9.0 * p - 9.0
    return np.array(
        [
            [8.0 * p, q, q],
            [q, 8.0 * p, q],
            [q, q, 18.0 - 10.0 * p],
        ]
    ) / 36.0


def upb_classify(p: float) -> UpbClass:
    """Threshold trichotomy; the middle band is only known to be abs PPT."""
    _check_upb_p(p)
    if p < UPB_ABS_PPT_THRESHOLD - THRESHOLD_SLACK:
        return UpbClass.NOT_ABS_PPT
    if p >= UPB_ABS_SEP_THRESHOLD - THRESHOLD_SLACK:
        return UpbClass.ABS_PPT_AND_ABS_SEP
    return UpbClass.ABS_PPT_ONLY_KNOWN
