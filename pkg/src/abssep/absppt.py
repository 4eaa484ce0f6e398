"""Spectral tests for the absolutely PPT property.

For min{m,n} <= 3 the finitely many linear matrix inequalities in the
sorted eigenvalues decide absolute PPT exactly (one 2x2 matrix for
min = 2, two 3x3 matrices for min = 3). For min{m,n} >= 4 only the
universal top-left 2x2 necessary condition is evaluated and the verdict
is downgraded accordingly; the exact families for large dimensions are
deliberately not constructed here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import bipartite, matcore
from .errors import InvalidDim, InvalidState, Unsupported

LMI_PSD_TOL = 1e-10  # absolute tolerance on LMI minimum eigenvalues


class AbsPptVerdict(Enum):
    YES = "Yes"
    NO = "No"
    NECESSARY_PASSED_ONLY = "NecessaryPassedOnly"


class RankVerdict(Enum):
    ABSOLUTELY_SEPARABLE = "AbsolutelySeparable"
    FULL_RANK_REQUIRED = "FullRankRequired"


@dataclass(frozen=True)
class Spectrum:
    """Descending, nonnegative eigenvalue list of a state on M_m ⊗ M_n."""

    m: int
    n: int
    values: np.ndarray

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise InvalidDim(f"dims must be positive, got ({self.m}, {self.n})")
        v = np.asarray(self.values, dtype=np.float64).ravel()
        if v.size != self.m * self.n:
            raise InvalidState(f"expected {self.m * self.n} eigenvalues, got {v.size}")
        if not np.all(np.isfinite(v)):
            raise InvalidState("spectrum has non-finite entries")
        if np.min(v) < -1e-12:
            raise InvalidState(f"negative eigenvalue {np.min(v):.3e} below clamp tolerance")
        v = np.clip(v, 0.0, None)
        v = np.sort(v)[::-1]
        if abs(float(np.sum(v)) - 1.0) > 1e-10:
            raise InvalidState(f"spectrum sums to {np.sum(v):.12g}, expected 1")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @classmethod
    def from_state(cls, rho, m: int, n: int) -> "Spectrum":
        return cls(m, n, matcore.eigvalsh(bipartite._check_dims(rho, m, n)))

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "values": [float(x) for x in self.values]}

    @classmethod
    def from_json(cls, obj: dict) -> "Spectrum":
        try:
            return cls(int(obj["m"]), int(obj["n"]), obj["values"])
        except (KeyError, TypeError) as exc:
            raise InvalidState(f"malformed spectrum JSON: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_json())


@dataclass(frozen=True)
class LmiTemplate:
    """One spectral LMI: 2*lambda_j on the diagonal, lambda_j - lambda_k off it.

    Indices are 1-based positions in the descending spectrum.
    """

    diag: tuple[int, ...]
    off: dict[tuple[int, int], tuple[int, int]]

    def evaluate(self, values: np.ndarray) -> np.ndarray:
        q = len(self.diag)
        out = np.zeros((q, q))
        for i, idx in enumerate(self.diag):
            out[i, i] = 2.0 * values[idx - 1]
        for (r, c), (plus, minus) in self.off.items():
            out[r, c] = out[c, r] = values[plus - 1] - values[minus - 1]
        return out


@dataclass(frozen=True)
class LmiSet:
    m: int
    n: int
    exact: bool                       # False: only the 2x2 necessary condition
    matrices: tuple[LmiTemplate, ...]


def _necessary_template(total: int) -> LmiTemplate:
    return LmiTemplate(diag=(total, total - 2), off={(0, 1): (total - 1, 1)})


def build_lmis(m: int, n: int) -> LmiSet:
    """The LMI family deciding absolute PPT (exact for min{m,n} <= 3)."""
    if m < 1 or n < 1:
        raise InvalidDim(f"dims must be positive, got ({m}, {n})")
    total = m * n
    q = min(m, n)
    if q == 1:
        return LmiSet(m, n, True, ())
    if q == 2:
        return LmiSet(m, n, True, (_necessary_template(total),))
    if q == 3:
        l1 = LmiTemplate(
            diag=(total, total - 2, total - 5),
            off={
                (0, 1): (total - 1, 1),
                (0, 2): (total - 3, 2),
                (1, 2): (total - 4, 3),
            },
        )
        l2 = LmiTemplate(
            diag=(total, total - 3, total - 5),
            off={
                (0, 1): (total - 1, 1),
                (0, 2): (total - 2, 2),
                (1, 2): (total - 4, 3),
            },
        )
        return LmiSet(m, n, True, (l1, l2))
    return LmiSet(m, n, False, (_necessary_template(total),))


def lmi_min_eigenvalues(s: Spectrum) -> np.ndarray:
    lmis = build_lmis(s.m, s.n)
    return np.array(
        [matcore.eigvalsh(t.evaluate(s.values))[-1] for t in lmis.matrices]
    )


def is_abs_ppt(s: Spectrum, tol: float = LMI_PSD_TOL) -> AbsPptVerdict:
    """Exact Yes/No for min{m,n} <= 3; NecessaryPassedOnly above that."""
    lmis = build_lmis(s.m, s.n)
    mins = lmi_min_eigenvalues(s)
    if mins.size and float(np.min(mins)) < -tol:
        return AbsPptVerdict.NO
    return AbsPptVerdict.YES if lmis.exact else AbsPptVerdict.NECESSARY_PASSED_ONLY


def necessary_2x2_matrix(s: Spectrum) -> np.ndarray:
    return _necessary_template(s.m * s.n).evaluate(s.values)


def necessary_2x2(s: Spectrum, tol: float = LMI_PSD_TOL) -> bool:
    """The universal top-left 2x2 condition; necessary for absolute PPT."""
    if s.m * s.n < 3:
        return True
    return float(matcore.eigvalsh(necessary_2x2_matrix(s))[-1]) >= -tol


def gurvits_barnum_value(x, m: int, n: int) -> float:
    """min over scalings s>0 of ||I - X/s||_F, in closed form.

    The minimizer is s = ||X||_F² / Tr(X); a value <= 1 certifies that X is
    proportional to an absolutely separable state.
    """
    x = matcore.hermitize(bipartite._check_dims(x, m, n))
    tr = float(np.trace(x).real)
    if tr <= 0.0:
        raise InvalidState("operator must have positive trace")
    fro2 = float(np.linalg.norm(x)) ** 2
    return float(np.sqrt(max(0.0, m * n - tr * tr / fro2)))


def gurvits_barnum_abs_sep(x, m: int, n: int, slack: float = 1e-12) -> bool:
    """True certifies absolute separability (ball of radius 1 around I)."""
    return gurvits_barnum_value(x, m, n) <= 1.0 + slack


def rank_deficient_classification(
    s: Spectrum, zero_tol: float = 1e-12
) -> RankVerdict:
    """Rank logic: a rank-deficient spectrum can only be absolutely PPT if it
    is the uniform rank-(mn-1) projector spectrum, which sits inside the
    separable ball; full-rank spectra carry no such shortcut."""
    if s.values[-1] > zero_tol:
        return RankVerdict.FULL_RANK_REQUIRED
    if not necessary_2x2(s):
        raise InvalidState(
            "rank-deficient spectrum fails the 2x2 necessary condition; "
            "it is not absolutely PPT"
        )
    return RankVerdict.ABSOLUTELY_SEPARABLE


def sample_abs_ppt_spectrum(
    m: int, n: int, seed: int | np.random.Generator, tol: float = LMI_PSD_TOL
) -> Spectrum:
    """Random spectrum passing the exact absolute-PPT test (min{m,n} <= 3).

    A flat-Dirichlet draw is mixed toward the uniform spectrum; binary search
    finds the largest admissible mixing weight and a uniform sub-weight is
    returned, which covers the boundary of the feasible region.
    """
    if min(m, n) > 3:
        raise Unsupported("exact absolute-PPT sampling needs min{m,n} <= 3")
    rng = seed if isinstance(seed, np.random.Generator) else bipartite.rng_stream(seed)
    total = m * n
    uniform = np.full(total, 1.0 / total)
    draw = np.sort(rng.dirichlet(np.ones(total)))[::-1]

    def passes(beta: float) -> bool:
        mix = (1.0 - beta) * uniform + beta * draw
        return is_abs_ppt(Spectrum(m, n, mix), tol=tol) is AbsPptVerdict.YES

    if passes(1.0):
        beta_ok = 1.0
    else:
        lo, hi = 0.0, 1.0
        for _ in range(60):
            mid = (lo + hi) / 2.0
            if passes(mid):
                lo = mid
            else:
                hi = mid
        beta_ok = lo
    beta = rng.uniform(0.0, beta_ok)
    return Spectrum(m, n, (1.0 - beta) * uniform + beta * draw)
