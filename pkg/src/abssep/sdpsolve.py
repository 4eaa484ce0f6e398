"""Small dense semidefinite programming layer.

Two complementary paths:

* a log-det barrier solver (path-following, infeasible-start Newton) for
  the problem shapes used in this package: linear objective, affine
  Hermitian PSD blocks, affine equalities, scalar inequalities folded in
  as 1x1 blocks. Problems stay below a few hundred variables and blocks
  below ~100x100, so a dense Newton method is both adequate and robust;

* verifiers for the analytic dual-feasible points (diamond-norm and
  max-eigenvalue certificates for the Choi, generalized Choi and
  Breuer-Hall maps). Certificates are exact closed forms, so their
  verification tolerances are much tighter than the solver's.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import absppt, bipartite, matcore, posmaps
from .errors import (
    CertificateRejected,
    MaxIterations,
    NoInteriorPoint,
    Unsupported,
)

DEFAULT_GAP_TOL = 1e-7
CERT_PSD_TOL = 1e-10
_MU_REDUCTION = 0.2  # barrier parameter shrink per outer step


@dataclass
class AffineBlock:
    """PSD constraint const + sum_i x_i coeffs[i] >= 0 (Hermitian h x h)."""

    const: np.ndarray   # (h, h)
    coeffs: np.ndarray  # (nv, h, h)

    @property
    def size(self) -> int:
        return self.const.shape[0]

    def eval(self, x: np.ndarray) -> np.ndarray:
        return self.const + np.tensordot(x, self.coeffs, axes=1)


@dataclass
class SdpProblem:
    """minimize objective @ x + offset over the blocks/equality constraints."""

    objective: np.ndarray
    blocks: list[AffineBlock]
    eq_mat: np.ndarray | None = None
    eq_rhs: np.ndarray | None = None
    interior_point: np.ndarray | None = None
    offset: float = 0.0
    name: str = ""

    @property
    def n_vars(self) -> int:
        return self.objective.size

    def to_json(self) -> dict:
        """Debugging dump: objective plus block descriptions (not a stable format)."""
        return {
            "name": self.name,
            "n_vars": int(self.n_vars),
            "objective": [float(v) for v in self.objective],
            "offset": float(self.offset),
            "equalities": 0 if self.eq_mat is None else int(self.eq_mat.shape[0]),
            "blocks": [
                {
                    "size": int(b.size),
                    "const_fro": float(np.linalg.norm(b.const)),
                    "coeff_fro": [float(np.linalg.norm(c)) for c in b.coeffs],
                }
                for b in self.blocks
            ],
        }


@dataclass
class SdpSolution:
    primal_value: float   # objective at the returned strictly feasible point
    dual_value: float     # primal_value - duality gap estimate
    x: np.ndarray
    gap: float
    newton_steps: int


@dataclass
class DualCertificate:
    """An analytic dual-feasible point with its claimed objective value."""

    name: str
    values: dict[str, np.ndarray] = field(default_factory=dict)
    expected_value: float = math.nan


def scalar_inequality(nv: int, coeffs: np.ndarray, lower: float) -> AffineBlock:
    """coeffs @ x >= lower as a 1x1 block."""
    c = np.zeros((nv, 1, 1), dtype=np.complex128)
    c[:, 0, 0] = coeffs
    return AffineBlock(const=np.array([[-lower]], dtype=np.complex128), coeffs=c)


def _feasible(blocks: list[AffineBlock], x: np.ndarray) -> bool:
    for b in blocks:
        try:
            np.linalg.cholesky(b.eval(x))
        except np.linalg.LinAlgError:
            return False
    return True


def solve(
    problem: SdpProblem,
    tol: float = DEFAULT_GAP_TOL,
    max_newton: int = 5000,
) -> SdpSolution:
    """Barrier method; returns values bracketing the optimum within ~tol."""
    nv = problem.n_vars
    c = np.asarray(problem.objective, dtype=np.float64)
    blocks = problem.blocks
    m_total = sum(b.size for b in blocks)
    a_mat = problem.eq_mat
    b_rhs = problem.eq_rhs
    p = 0 if a_mat is None else a_mat.shape[0]

    x = problem.interior_point
    if x is None:
        x = np.zeros(nv)
        if p and not np.allclose(a_mat @ x, b_rhs):
            x = np.linalg.lstsq(a_mat, b_rhs, rcond=None)[0]
    x = np.asarray(x, dtype=np.float64).copy()
    if not _feasible(blocks, x):
        raise NoInteriorPoint(
            f"starting point is not strictly feasible for problem {problem.name!r}"
        )
    nu = np.zeros(p)

    flat_coeffs = [b.coeffs.reshape(nv, -1) for b in blocks]
    t = 1.0
    steps = 0

    def residual(xv, nuv, tv):
        g = tv * c
        for b, cf in zip(blocks, flat_coeffs):
            f = b.eval(xv)
            finv = np.linalg.inv(f)
            g = g - np.real(cf.conj() @ finv.ravel())
        r_dual = g if p == 0 else g + a_mat.T @ nuv
        r_pri = np.zeros(0) if p == 0 else a_mat @ xv - b_rhs
        return r_dual, r_pri

    while True:
        # center at the current barrier parameter; intermediate stages only
        # need loose centering, the final stage is polished
        final_stage = m_total / t <= tol
        scale = max(1.0, t * (1.0 + float(np.linalg.norm(c))))
        center_tol = (1e-9 if final_stage else 1e-5) * scale
        for _ in range(400):
            grad = t * c
            hess = np.zeros((nv, nv))
            for b, cf in zip(blocks, flat_coeffs):
                f = b.eval(x)
                lo = np.linalg.cholesky(f)
                finv = np.linalg.inv(f)
                grad = grad - np.real(cf.conj() @ finv.ravel())
                half = np.linalg.solve(lo[np.newaxis, :, :], b.coeffs)
                mid = np.linalg.solve(
                    lo[np.newaxis, :, :], half.conj().transpose(0, 2, 1)
                ).conj().transpose(0, 2, 1)
                mflat = mid.reshape(nv, -1)
                hess = hess + np.real(mflat @ mflat.conj().T)
            r_dual = grad if p == 0 else grad + a_mat.T @ nu
            r_pri = np.zeros(0) if p == 0 else a_mat @ x - b_rhs
            r_norm = math.sqrt(
                float(np.dot(r_dual, r_dual)) + float(np.dot(r_pri, r_pri))
            )
            if r_norm <= center_tol:
                break
            if steps >= max_newton:
                raise MaxIterations(
                    f"Newton budget exhausted in problem {problem.name!r}"
                )
            ridge = 1e-13 * max(1.0, float(np.trace(hess)) / nv)
            hess[np.diag_indices_from(hess)] += ridge
            if p:
                kkt = np.zeros((nv + p, nv + p))
                kkt[:nv, :nv] = hess
                kkt[:nv, nv:] = a_mat.T
                kkt[nv:, :nv] = a_mat
                rhs = -np.concatenate([r_dual, r_pri])
                try:
                    step = np.linalg.solve(kkt, rhs)
                except np.linalg.LinAlgError:
                    step = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
                dx, dnu = step[:nv], step[nv:]
            else:
                try:
                    dx = np.linalg.solve(hess, -r_dual)
                except np.linalg.LinAlgError:
                    dx = np.linalg.lstsq(hess, -r_dual, rcond=None)[0]
                dnu = np.zeros(0)
            alpha = 1.0
            while alpha > 1e-13 and not _feasible(blocks, x + alpha * dx):
                alpha *= 0.5
            while alpha > 1e-13:
                rd, rp = residual(x + alpha * dx, nu + alpha * dnu, t)
                new_norm = math.sqrt(
                    float(np.dot(rd, rd)) + float(np.dot(rp, rp))
                )
                if new_norm <= (1.0 - 0.25 * alpha) * r_norm + 1e-16 * scale:
                    break
                alpha *= 0.5
            if alpha <= 1e-13:
                break  # stalled; current point is as centered as we can get
            x = x + alpha * dx
            nu = nu + alpha * dnu
            steps += 1
        gap = m_total / t
        if gap <= tol:
            break
        t /= _MU_REDUCTION

    primal = float(c @ x) + problem.offset
    return SdpSolution(
        primal_value=primal,
        dual_value=primal - gap,
        x=x,
        gap=gap,
        newton_steps=steps,
    )


# ----------------------------------------------------------------------------
# witness minimization over absolutely PPT spectra
# ----------------------------------------------------------------------------


def min_witness_problem(
    witness_spectrum, dims: tuple[int, int], lmi_mode: str = "full"
) -> SdpProblem:
    """min sum_j lambda_j mu_{mn-j+1} over absolutely PPT spectra lambda.

    lmi_mode 'full' uses the exact LMI family (min{m,n} <= 3 only);
    'submatrix2x2' keeps only the universal 2x2 necessary condition, a
    relaxation whose optimum can only be lower.
    """
    m, n = dims
    total = m * n
    mu = np.asarray(witness_spectrum, dtype=np.float64)
    if mu.size != total:
        raise ValueError(f"witness spectrum must have length {total}")
    if np.any(np.diff(mu) > 1e-12):
        raise ValueError("witness spectrum must be sorted descending")
    if lmi_mode == "full":
        lmis = absppt.build_lmis(m, n)
        if not lmis.exact:
            raise Unsupported("full LMI mode requires min{m,n} <= 3")
        templates = lmis.matrices
    elif lmi_mode == "submatrix2x2":
        templates = (absppt._necessary_template(total),)
    else:
        raise ValueError(f"unknown lmi_mode {lmi_mode!r}")

    nv = total
    blocks = []
    for tpl in templates:
        q = len(tpl.diag)
        coeffs = np.zeros((nv, q, q), dtype=np.complex128)
        for i, idx in enumerate(tpl.diag):
            coeffs[idx - 1, i, i] += 2.0
        for (r, s), (plus, minus) in tpl.off.items():
            coeffs[plus - 1, r, s] += 1.0
            coeffs[plus - 1, s, r] += 1.0
            coeffs[minus - 1, r, s] -= 1.0
            coeffs[minus - 1, s, r] -= 1.0
        blocks.append(AffineBlock(np.zeros((q, q), dtype=np.complex128), coeffs))
    for j in range(total - 1):
        row = np.zeros(nv)
        row[j], row[j + 1] = 1.0, -1.0
        blocks.append(scalar_inequality(nv, row, 0.0))
    last = np.zeros(nv)
    last[total - 1] = 1.0
    blocks.append(scalar_inequality(nv, last, 0.0))

    tilt = 1.0 + 0.01 * np.linspace(1.0, -1.0, total)
    start = tilt / tilt.sum()
    return SdpProblem(
        objective=mu[::-1].copy(),
        blocks=blocks,
        eq_mat=np.ones((1, nv)),
        eq_rhs=np.ones(1),
        interior_point=start,
        name=f"min-witness-{lmi_mode}",
    )


def min_witness_over_abs_ppt(
    witness_spectrum,
    dims: tuple[int, int],
    lmi_mode: str = "full",
    tol: float = 1e-8,
) -> float:
    """Minimum witness overlap over absolutely PPT spectra (primal value).

    The returned value is attained by a feasible spectrum, so it always
    upper-bounds the exact optimum; with the default tolerance the two agree
    to ~1e-8.
    """
    return solve(min_witness_problem(witness_spectrum, dims, lmi_mode), tol=tol).primal_value


# ----------------------------------------------------------------------------
# Hermitian matrix variables
# ----------------------------------------------------------------------------


def _hermitian_basis(h: int) -> np.ndarray:
    """Real basis of the Hermitian h x h matrices: E_ii, symmetric, antisymmetric."""
    out = np.zeros((h * h, h, h), dtype=np.complex128)
    k = 0
    for i in range(h):
        out[k, i, i] = 1.0
        k += 1
    for i in range(h):
        for j in range(i + 1, h):
            out[k, i, j] = out[k, j, i] = 1.0
            k += 1
            out[k, i, j] = 1.0j
            out[k, j, i] = -1.0j
            k += 1
    return out


def diamond_norm_problem(phi: posmaps.MapSpec) -> SdpProblem:
    """Standard diamond-norm SDP for the map phi (via its Choi matrix)."""
    n, m = phi.in_dim, phi.out_dim
    d = n * m
    jmat = posmaps.choi_matrix(phi)
    basis = _hermitian_basis(d)
    nb = d * d
    nv = 2 * nb + 2  # Y0 coeffs, Y1 coeffs, s0, s1

    big_const = np.zeros((2 * d, 2 * d), dtype=np.complex128)
    big_const[:d, d:] = -jmat
    big_const[d:, :d] = -jmat.conj().T
    big_coeffs = np.zeros((nv, 2 * d, 2 * d), dtype=np.complex128)
    big_coeffs[:nb, :d, :d] = basis
    big_coeffs[nb : 2 * nb, d:, d:] = basis

    y0_coeffs = np.zeros((nv, d, d), dtype=np.complex128)
    y0_coeffs[:nb] = basis
    y1_coeffs = np.zeros((nv, d, d), dtype=np.complex128)
    y1_coeffs[nb : 2 * nb] = basis

    traced = np.stack(
        [bipartite.partial_trace(basis[k], n, m, "second") for k in range(nb)]
    )
    cap0 = np.zeros((nv, n, n), dtype=np.complex128)
    cap0[:nb] = -traced
    cap0[2 * nb, :, :] = np.eye(n)
    cap1 = np.zeros((nv, n, n), dtype=np.complex128)
    cap1[nb : 2 * nb] = -traced
    cap1[2 * nb + 1, :, :] = np.eye(n)
    zero_n = np.zeros((n, n), dtype=np.complex128)

    objective = np.zeros(nv)
    objective[2 * nb] = objective[2 * nb + 1] = 0.5

    kappa = matcore.schatten_norm(jmat, "operator") + 1.0
    start = np.zeros(nv)
    start[: d] = kappa          # diagonal coefficients of Y0 = kappa I
    start[nb : nb + d] = kappa
    start[2 * nb] = start[2 * nb + 1] = kappa * m + 1.0

    return SdpProblem(
        objective=objective,
        blocks=[
            AffineBlock(big_const, big_coeffs),
            AffineBlock(np.zeros((d, d), dtype=np.complex128), y0_coeffs),
            AffineBlock(np.zeros((d, d), dtype=np.complex128), y1_coeffs),
            AffineBlock(zero_n.copy(), cap0),
            AffineBlock(zero_n.copy(), cap1),
        ],
        interior_point=start,
        name="diamond-norm",
    )


def max_eig_problem(phi: posmaps.MapSpec) -> SdpProblem:
    """sup Tr(J(phi) rho) over PPT rho with Tr(rho) <= 1, as a minimization."""
    n, m = phi.in_dim, phi.out_dim
    d = n * m
    jmat = posmaps.choi_matrix(phi)
    basis = _hermitian_basis(d)
    nv = d * d
    objective = -np.real(
        np.einsum("kab,ba->k", basis, jmat)
    )
    pt_basis = np.stack(
        [bipartite.partial_transpose(basis[k], n, m) for k in range(nv)]
    )
    trace_row = -np.real(np.einsum("kaa->k", basis))
    blocks = [
        AffineBlock(np.zeros((d, d), dtype=np.complex128), basis.copy()),
        AffineBlock(np.zeros((d, d), dtype=np.complex128), pt_basis),
        scalar_inequality(nv, trace_row, -1.0),
    ]
    start = np.zeros(nv)
    start[:d] = 1.0 / (2.0 * d)
    return SdpProblem(
        objective=objective,
        blocks=blocks,
        interior_point=start,
        name="max-eig-ppt",
    )


# ----------------------------------------------------------------------------
# analytic certificates
# ----------------------------------------------------------------------------


def _psd_or_reject(mat: np.ndarray, what: str, tol: float = CERT_PSD_TOL) -> float:
    report = matcore.is_psd(mat, tol=tol)
    if not report:
        raise CertificateRejected(
            f"{what} is not PSD (min eigenvalue {report.min_eigenvalue:.3e})"
        )
    return max(0.0, -report.min_eigenvalue)


def _diamond_shift(phi: posmaps.MapSpec) -> float:
    if phi.kind == "choi":
        return 1.0
    if phi.kind == "generalized_choi":
        return phi.b + phi.c
    if phi.kind == "breuer_hall":
        return 2.0
    raise Unsupported(f"no analytic diamond certificate for map kind {phi.kind!r}")


def diamond_certificate(phi: posmaps.MapSpec) -> DualCertificate:
    """Feasible (Y0, Y1) for the diamond-norm SDP of the given map.

    Y0 = Y1 = J(phi) + kappa |psi+><psi+| with kappa = b + c for the
    (generalized) Choi family and kappa = 2 for Breuer-Hall; the certified
    values are (3 + b + c)/3 and (n + 2)/n respectively.
    """
    kappa = _diamond_shift(phi)
    n = phi.in_dim
    y0 = posmaps.choi_matrix(phi) + kappa * bipartite.max_entangled_projector(n)
    if phi.kind == "breuer_hall":
        expected = (n + 2.0) / n
    else:
        expected = (3.0 + kappa) / 3.0
    return DualCertificate(
        name=f"diamond-{phi.kind}", values={"Y0": y0, "Y1": y0.copy()}, expected_value=expected
    )


def verify_diamond_certificate(
    phi: posmaps.MapSpec, cert: DualCertificate, tol: float = CERT_PSD_TOL
) -> float:
    """Verify SDP feasibility of (Y0, Y1) and return the certified upper bound."""
    n, m = phi.in_dim, phi.out_dim
    d = n * m
    jmat = posmaps.choi_matrix(phi)
    y0, y1 = cert.values["Y0"], cert.values["Y1"]
    _psd_or_reject(y0, "Y0", tol)
    _psd_or_reject(y1, "Y1", tol)
    big = np.zeros((2 * d, 2 * d), dtype=np.complex128)
    big[:d, :d] = y0
    big[d:, d:] = y1
    big[:d, d:] = -jmat
    big[d:, :d] = -jmat.conj().T
    _psd_or_reject(big, "diamond block matrix", tol)
    val0 = matcore.schatten_norm(bipartite.partial_trace(y0, n, m, "second"), "operator")
    val1 = matcore.schatten_norm(bipartite.partial_trace(y1, n, m, "second"), "operator")
    return 0.5 * (val0 + val1)


def gen_choi_xy(b: float, c: float) -> tuple[float, float]:
    """The (x, y) entries of the max-eigenvalue certificate, second case."""
    if 2.0 * b + c >= 3.0 or b + 2.0 * c >= 3.0:
        raise ValueError("x, y are only defined when 2b+c < 3 and b+2c < 3")
    den = 6.0 * (2.0 - b - c)
    return (3.0 - 2.0 * b - c) ** 2 / den, (3.0 - b - 2.0 * c) ** 2 / den


def _gen_choi_params_of_dual(phi: posmaps.MapSpec) -> tuple[float, float]:
    """Recover (b, c) with phi = dual of the generalized Choi map Phi_{b,c}."""
    if phi.kind == "choi":
        return 0.0, 1.0  # the Choi map is the dual of Phi_{0,1}
    if phi.kind == "generalized_choi":
        return phi.c, phi.b
    raise Unsupported(f"map kind {phi.kind!r} is not in the generalized Choi family")


def max_eig_certificate(phi: posmaps.MapSpec) -> DualCertificate:
    """Feasible Y >= 0 for the PPT max-eigenvalue SDP of the given map.

    For the generalized Choi family the two parameter regimes use Y = 0
    (certifying max{b,c}/2) and the sqrt(xy)-patterned Y (certifying
    (b² + c² - 6(b+c) + bc + 9) / (6(2-b-c))); for Breuer-Hall the rank-one
    rotated maximally entangled Y certifies 1/(n-2).
    """
    if phi.kind == "breuer_hall":
        n = phi.dim
        psi = bipartite.max_entangled(n)
        rotated = bipartite.kron(np.eye(n), phi.v) @ np.outer(psi, psi.conj()) @ bipartite.kron(
            np.eye(n), phi.v
        ).conj().T
        y = n / (n - 2.0) * rotated
        return DualCertificate(
            name="max-eig-breuer-hall", values={"Y": y}, expected_value=1.0 / (n - 2.0)
        )
    b, c = _gen_choi_params_of_dual(phi)
    if 2.0 * b + c >= 3.0 or b + 2.0 * c >= 3.0:
        y = np.zeros((9, 9), dtype=np.complex128)
        expected = max(b, c) / 2.0
    else:
        x, yv = gen_choi_xy(b, c)
        root = math.sqrt(x * yv)
        y = np.zeros((9, 9), dtype=np.complex128)
        for idx in (1, 5, 6):
            y[idx, idx] = x
        for idx in (2, 3, 7):
            y[idx, idx] = yv
        for r, s in ((1, 3), (2, 6), (5, 7)):
            y[r, s] = y[s, r] = root
        # the shifted matrix is ((b+2x) I + 3(2 sqrt(xy) - 1) psi+)/2; for
        # b+c >= 2/3 the sqrt(xy) term is nonpositive and (b+2x)/2 is the
        # certified bound, below that the psi+ direction takes over
        expected = (b * b + c * c - 6.0 * (b + c) + b * c + 9.0) / (6.0 * (2.0 - b - c))
        if 2.0 * root > 1.0:
            expected += 1.5 * (2.0 * root - 1.0)
    return DualCertificate(
        name=f"max-eig-gen-choi({b:g},{c:g})", values={"Y": y}, expected_value=expected
    )


def verify_max_eig_certificate(
    phi: posmaps.MapSpec, cert: DualCertificate, tol: float = CERT_PSD_TOL
) -> float:
    """Verify Y >= 0 and return lambda_max((id ⊗ T)(Y) + J(phi))."""
    n, m = phi.in_dim, phi.out_dim
    y = cert.values["Y"]
    _psd_or_reject(y, "Y", tol)
    shifted = bipartite.partial_transpose(y, n, m) + posmaps.choi_matrix(phi)
    return float(matcore.eigvalsh(shifted)[0])


def diamond_norm_ub(
    phi: posmaps.MapSpec,
    cert: DualCertificate | None = None,
    tol: float = DEFAULT_GAP_TOL,
) -> float:
    """Upper bound on the diamond norm: verified certificate or SDP solve."""
    if cert is not None:
        return verify_diamond_certificate(phi, cert)
    return solve(diamond_norm_problem(phi), tol=tol).primal_value


def max_eig_ub(
    phi: posmaps.MapSpec,
    cert: DualCertificate | None = None,
    tol: float = DEFAULT_GAP_TOL,
) -> float:
    """Upper bound on eigenvalues of (id ⊗ phi)(|v><v|) over unit vectors."""
    if cert is not None:
        return verify_max_eig_certificate(phi, cert)
    sol = solve(max_eig_problem(phi), tol=tol)
    return -sol.dual_value  # upper bracket of the maximization


def min_eig_lb_from_diamond(diamond_ub: float) -> float:
    """(1 - diamond upper bound)/2 lower-bounds the witness eigenvalues."""
    if diamond_ub < 1.0 - 1e-9:
        raise ValueError("a diamond norm upper bound cannot be below 1")
    return (1.0 - diamond_ub) / 2.0
