"""Barrier solver and analytic certificate verifiers."""

import math

import numpy as np
import pytest

from abssep import bipartite, matcore, posmaps, sdpsolve, witness
from abssep.errors import CertificateRejected, NoInteriorPoint, Unsupported

R2 = math.sqrt(2.0)


def _ordering_problem(nv):
    blocks = []
    for j in range(nv - 1):
        row = np.zeros(nv)
        row[j], row[j + 1] = 1.0, -1.0
        blocks.append(sdpsolve.scalar_inequality(nv, row, 0.0))
    last = np.zeros(nv)
    last[-1] = 1.0
    blocks.append(sdpsolve.scalar_inequality(nv, last, 0.0))
    obj = np.zeros(nv)
    obj[0] = 1.0
    tilt = 1.0 + 0.01 * np.linspace(1.0, -1.0, nv)
    return sdpsolve.SdpProblem(
        objective=obj,
        blocks=blocks,
        eq_mat=np.ones((1, nv)),
        eq_rhs=np.ones(1),
        interior_point=tilt / tilt.sum(),
        name="toy-ordering",
    )


def test_solve_toy_ordering_lp():
    sol = sdpsolve.solve(_ordering_problem(4), tol=1e-7)
    assert abs(sol.primal_value - 0.25) <= 1e-6
    assert sol.dual_value <= sol.primal_value
    assert abs(sol.dual_value - 0.25) <= 1e-6


def test_solve_requires_interior_point():
    prob = _ordering_problem(4)
    prob.interior_point = np.array([0.4, 0.3, 0.2, 0.1])[::-1].copy()  # not descending
    with pytest.raises(NoInteriorPoint):
        sdpsolve.solve(prob)


def test_min_witness_uniform_spectrum():
    value = sdpsolve.min_witness_over_abs_ppt(np.full(9, 1.0 / 9.0), (3, 3), "full")
    assert abs(value - 1.0 / 9.0) <= 1e-6


def test_min_witness_boundary_witness_is_zero():
    spec = witness.extremal_witness_spectrum(-0.4, 0.6, 9)
    relaxed = sdpsolve.min_witness_over_abs_ppt(spec, (3, 3), "submatrix2x2")
    assert abs(relaxed) <= 1e-6
    full = sdpsolve.min_witness_over_abs_ppt(spec, (3, 3), "full")
    assert abs(full) <= 1e-6
    # the relaxation can only go lower
    assert relaxed <= full + 1e-8


def test_min_witness_detects_beyond_threshold():
    spec = witness.extremal_witness_spectrum(-0.4, 0.62, 9)
    value = sdpsolve.min_witness_over_abs_ppt(spec, (3, 3), "full")
    assert value < -1e-4


def test_min_witness_relaxation_dominated_on_random_witnesses():
    rng = bipartite.rng_stream(3)
    for _ in range(5):
        mu = np.sort(rng.standard_normal(9))[::-1]
        mu = mu - (mu.sum() - 1.0) / 9.0  # unit trace
        full = sdpsolve.min_witness_over_abs_ppt(mu, (3, 3), "full", tol=1e-7)
        relaxed = sdpsolve.min_witness_over_abs_ppt(mu, (3, 3), "submatrix2x2", tol=1e-7)
        assert relaxed <= full + 1e-6


def test_min_witness_full_mode_needs_small_dims():
    with pytest.raises(Unsupported):
        sdpsolve.min_witness_over_abs_ppt(np.full(16, 1.0 / 16.0), (4, 4), "full")


def test_diamond_certificate_choi_dual():
    phi = posmaps.dual_map(posmaps.choi_map())
    value = sdpsolve.verify_diamond_certificate(phi, sdpsolve.diamond_certificate(phi))
    assert abs(value - 4.0 / 3.0) <= 1e-12


def test_diamond_certificate_matches_literal_display():
    phi = posmaps.dual_map(posmaps.choi_map())
    y0 = sdpsolve.diamond_certificate(phi).values["Y0"]
    literal = np.zeros((9, 9))
    sixth = [
        (0, 0, 5.0), (1, 1, 3.0), (4, 4, 5.0), (5, 5, 3.0), (6, 6, 3.0), (8, 8, 5.0),
        (0, 4, -1.0), (0, 8, -1.0), (4, 8, -1.0),
    ]
    for r, s, v in sixth:
        literal[r, s] = literal[s, r] = v / 6.0
    assert np.allclose(y0, literal, atol=1e-14)


def test_max_eig_certificate_choi_dual():
    phi = posmaps.dual_map(posmaps.choi_map())
    cert = sdpsolve.max_eig_certificate(phi)
    value = sdpsolve.verify_max_eig_certificate(phi, cert)
    assert abs(value - 2.0 / 3.0) <= 1e-12
    literal = np.zeros((9, 9))
    sixth = [
        (1, 1, 1.0), (2, 2, 4.0), (3, 3, 4.0), (5, 5, 1.0), (6, 6, 1.0), (7, 7, 4.0),
        (1, 3, 2.0), (2, 6, 2.0), (5, 7, 2.0),
    ]
    for r, s, v in sixth:
        literal[r, s] = literal[s, r] = v / 6.0
    assert np.allclose(cert.values["Y"], literal, atol=1e-14)


def test_gen_choi_certificates_on_grid():
    for b in np.linspace(0.0, 4.0 / 3.0, 5):
        for c in np.linspace(0.0, 4.0 / 3.0, 5):
            phi = posmaps.dual_map(posmaps.generalized_choi_map(float(b), float(c)))
            dval = sdpsolve.verify_diamond_certificate(phi, sdpsolve.diamond_certificate(phi))
            assert abs(dval - (3.0 + b + c) / 3.0) <= 1e-12
            cert = sdpsolve.max_eig_certificate(phi)
            mval = sdpsolve.verify_max_eig_certificate(phi, cert)
            assert abs(mval - cert.expected_value) <= 1e-12


def test_gen_choi_xy_identity():
    # b + 2x = c + 2y = 2 - b - c - (2 sqrt(xy) - 1) across the second case
    for b in np.linspace(0.0, 1.3, 14):
        for c in np.linspace(0.0, 1.3, 14):
            if 2 * b + c >= 3.0 or b + 2 * c >= 3.0:
                continue
            x, y = sdpsolve.gen_choi_xy(float(b), float(c))
            lhs = b + 2.0 * x
            mid = c + 2.0 * y
            rhs = 2.0 - b - c - (2.0 * math.sqrt(x * y) - 1.0)
            assert abs(lhs - mid) <= 1e-12
            assert abs(lhs - rhs) <= 1e-12


def test_breuer_hall_certificates():
    for n in (4, 6):
        phi = posmaps.dual_map(posmaps.breuer_hall_map(n))
        cert = sdpsolve.diamond_certificate(phi)
        dval = sdpsolve.verify_diamond_certificate(phi, cert)
        assert abs(dval - (n + 2.0) / n) <= 1e-12
        # the partial trace of Y0 collapses to ((n+2)/n) I
        traced = bipartite.partial_trace(cert.values["Y0"], n, n, "second")
        assert np.allclose(traced, (n + 2.0) / n * np.eye(n), atol=1e-12)
        mcert = sdpsolve.max_eig_certificate(phi)
        mval = sdpsolve.verify_max_eig_certificate(phi, mcert)
        assert abs(mval - 1.0 / (n - 2.0)) <= 1e-12


def test_certificates_reject_perturbations():
    phi = posmaps.dual_map(posmaps.choi_map())
    cert = sdpsolve.diamond_certificate(phi)
    cert.values["Y0"] = cert.values["Y0"].copy()
    cert.values["Y0"][2, 2] -= 1e-3  # breaks PSD of the block matrix
    with pytest.raises(CertificateRejected):
        sdpsolve.verify_diamond_certificate(phi, cert)
    cert2 = sdpsolve.max_eig_certificate(phi)
    cert2.values["Y"] = cert2.values["Y"].copy()
    cert2.values["Y"][1, 1] -= 1e-3  # drives an eigenvalue of Y negative
    with pytest.raises(CertificateRejected):
        sdpsolve.verify_max_eig_certificate(phi, cert2)


def test_max_eig_certificate_dominates_sampled_witnesses():
    rng = bipartite.rng_stream(4)
    duals = [
        posmaps.dual_map(posmaps.choi_map()),
        posmaps.dual_map(posmaps.generalized_choi_map(6.0 / 5.0, 6.0 / 5.0)),
        posmaps.dual_map(posmaps.generalized_choi_map(0.5, 0.9)),
    ]
    for phi in duals:
        bound = sdpsolve.verify_max_eig_certificate(phi, sdpsolve.max_eig_certificate(phi))
        for _ in range(1000):
            v = rng.standard_normal(9) + 1j * rng.standard_normal(9)
            v /= np.linalg.norm(v)
            w = posmaps.witness_from_map(phi, v)
            assert matcore.eigvalsh(w)[0] <= bound + 1e-8


def test_solver_newton_budget():
    from abssep.errors import MaxIterations

    with pytest.raises(MaxIterations):
        sdpsolve.solve(_ordering_problem(6), tol=1e-9, max_newton=2)


def test_min_eig_lb_from_diamond():
    assert np.isclose(sdpsolve.min_eig_lb_from_diamond(4.0 / 3.0), -1.0 / 6.0)
    for b, c in ((0.3, 0.9), (1.2, 0.1)):
        lb = sdpsolve.min_eig_lb_from_diamond((3.0 + b + c) / 3.0)
        assert np.isclose(lb, -(b + c) / 6.0, atol=1e-14)
    for n in (4, 6):
        assert np.isclose(sdpsolve.min_eig_lb_from_diamond((n + 2.0) / n), -1.0 / n)
    with pytest.raises(ValueError):
        sdpsolve.min_eig_lb_from_diamond(0.5)


def test_diamond_norm_solver_path():
    phi = posmaps.dual_map(posmaps.choi_map())
    value = sdpsolve.diamond_norm_ub(phi, tol=1e-7)
    assert abs(value - 4.0 / 3.0) <= 1e-6


def test_max_eig_solver_path():
    phi = posmaps.dual_map(posmaps.choi_map())
    value = sdpsolve.max_eig_ub(phi, tol=1e-7)
    assert abs(value - 2.0 / 3.0) <= 1e-6
    # solver bracket dominates the certificate value
    cert_value = sdpsolve.verify_max_eig_certificate(phi, sdpsolve.max_eig_certificate(phi))
    assert value >= cert_value - 1e-6


def test_problem_json_dump():
    prob = _ordering_problem(4)
    dump = prob.to_json()
    assert dump["n_vars"] == 4
    assert dump["equalities"] == 1
    assert len(dump["blocks"]) == 4
