"""Command-line surface.

Commands: check-spectrum, witness-analyze, verify-certificates, fig-data,
orbit-scan, family. All file I/O uses the shared matrix/spectrum JSON
formats; CSV output is byte-stable (%.12g, LF line endings).

Exit codes: 0 success, 2 verdict-negative (failed check, rejected
certificate, violation found), 3 input error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import absppt, bipartite, families, matcore, posmaps, sdpsolve, witness
from .errors import CertificateRejected, ToolkitError

EXIT_OK = 0
EXIT_NEGATIVE = 2
EXIT_INPUT = 3

HULL_POINTS = (
    (0.0, 0.0),
    (3.0 * (math.sqrt(2.0) - 1.0), 0.0),
    (6.0 / 5.0, 6.0 / 5.0),
    (0.0, 3.0 * (math.sqrt(2.0) - 1.0)),
)  # counterclockwise


@dataclass
class RunConfig:
    seed: int = 2024
    samples: int | None = None  # commands pick their own default
    tolerances: dict = field(default_factory=dict)
    out: str | None = None
    fmt: str = "csv"
    workers: int = 1

    def tol(self, name: str, default: float) -> float:
        return float(self.tolerances.get(name, default))

    def sample_count(self, default: int) -> int:
        return default if self.samples is None else self.samples


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "%.12g" % float(value)


def _write_text(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


def _csv(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _json_report(obj) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


def _load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _parse_config_file(path: str) -> dict:
    """key=value lines; '#' starts a comment."""
    out: dict = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"malformed config line {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            out[key] = value
    return out


def _build_config(args) -> RunConfig:
    cfg = RunConfig()
    raw = _parse_config_file(args.config) if getattr(args, "config", None) else {}
    if "seed" in raw:
        cfg.seed = int(raw["seed"])
    if "samples" in raw:
        cfg.samples = int(raw["samples"])
    if "out" in raw:
        cfg.out = raw["out"]
    if "format" in raw:
        cfg.fmt = raw["format"]
    if "workers" in raw:
        cfg.workers = int(raw["workers"])
    for key, value in raw.items():
        if key.startswith("tol."):
            cfg.tolerances[key[4:]] = float(value)
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    if getattr(args, "samples", None) is not None:
        cfg.samples = args.samples
    if getattr(args, "out", None) is not None:
        cfg.out = args.out
    if getattr(args, "format", None) is not None:
        cfg.fmt = args.format
    if getattr(args, "workers", None) is not None:
        cfg.workers = args.workers
    for item in getattr(args, "tol", None) or []:
        if "=" not in item:
            raise ValueError(f"--tol expects name=value, got {item!r}")
        name, value = item.split("=", 1)
        cfg.tolerances[name.strip()] = float(value)
    return cfg


# ----------------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------------


def cmd_check_spectrum(args) -> int:
    cfg = _build_config(args)
    spec = absppt.Spectrum.from_json(_load_json(args.file))
    verdict = absppt.is_abs_ppt(spec, tol=cfg.tol("lmi", absppt.LMI_PSD_TOL))
    mins = absppt.lmi_min_eigenvalues(spec)
    report = {
        "verdict": verdict.value,
        "lmi_min_eigenvalue": float(np.min(mins)) if mins.size else None,
        "dims": [spec.m, spec.n],
    }
    _write_text(_json_report(report), cfg.out)
    return EXIT_OK if verdict is not absppt.AbsPptVerdict.NO else EXIT_NEGATIVE


def cmd_witness_analyze(args) -> int:
    cfg = _build_config(args)
    w = matcore.matrix_from_json(_load_json(args.file))
    summary = witness.summarize(w)
    verdict = witness.cannot_detect_abs_ppt(summary)
    threshold = (
        witness.detection_threshold(summary.ell) if summary.ell >= -0.5 else None
    )
    report = {
        "mu1": summary.mu1,
        "ell": summary.ell,
        "neg_count": summary.neg_count,
        "threshold": threshold,
        "verdict": verdict.value,
    }
    _write_text(_json_report(report), cfg.out)
    return EXIT_OK if verdict is witness.DetectionVerdict.GUARANTEED else EXIT_NEGATIVE


def _certificate_jobs(bh_dims, grid):
    """(name, callable) pairs covering every analytic certificate."""
    jobs = []
    ell_specials = [-0.5, -2.0 / 5.0, witness.SPLIT_LOW, -0.3, witness.SPLIT_HIGH,
                    -1.0 / 6.0, -1.0 / 5.0, 0.0]

    def witness_job(ell):
        def run():
            mu1 = witness.detection_threshold(ell)
            cert = witness.detection_dual_certificate(ell, mu1, 9)
            witness.verify_detection_certificate(cert, 9)
            return 0.0, 0.0  # certified optimum lower bound, expected
        return run

    for ell in ell_specials:
        jobs.append((f"witness-dual ell={ell:.6g}", witness_job(ell)))

    def diamond_job(phi, expected):
        def run():
            value = sdpsolve.verify_diamond_certificate(phi, sdpsolve.diamond_certificate(phi))
            return value, expected
        return run

    def maxeig_job(phi):
        def run():
            cert = sdpsolve.max_eig_certificate(phi)
            value = sdpsolve.verify_max_eig_certificate(phi, cert)
            return value, cert.expected_value
        return run

    choi_dual = posmaps.dual_map(posmaps.choi_map())
    jobs.append(("diamond choi-dual", diamond_job(choi_dual, 4.0 / 3.0)))
    jobs.append(("max-eig choi-dual", maxeig_job(choi_dual)))
    for b, c in grid:
        if b + c > 3.0:
            continue
        phi = posmaps.dual_map(posmaps.generalized_choi_map(b, c))
        jobs.append(
            (f"diamond gen-choi({b:.6g},{c:.6g})", diamond_job(phi, (3.0 + b + c) / 3.0))
        )
        jobs.append((f"max-eig gen-choi({b:.6g},{c:.6g})", maxeig_job(phi)))
    for n in bh_dims:
        phi = posmaps.dual_map(posmaps.breuer_hall_map(n))
        jobs.append((f"diamond breuer-hall n={n}", diamond_job(phi, (n + 2.0) / n)))
        jobs.append((f"max-eig breuer-hall n={n}", maxeig_job(phi)))
    return jobs


def cmd_verify_certificates(args) -> int:
    cfg = _build_config(args)
    grid_n = args.grid if args.grid is not None else 21
    axis = np.linspace(0.0, 4.0 / 3.0, grid_n)
    grid = [(float(b), float(c)) for b in axis for c in axis]
    rows = []
    failures = 0
    for name, job in _certificate_jobs(args.bh_dims or [4, 6], grid):
        try:
            value, expected = job()
            status = "ok" if abs(value - expected) <= cfg.tol("certificate", 1e-12) else "mismatch"
        except CertificateRejected as exc:
            value, expected, status = math.nan, math.nan, f"rejected: {exc}"
        if status != "ok":
            failures += 1
        rows.append([name, value, expected, status])
    if cfg.fmt == "json":
        text = _json_report(
            [
                {"name": r[0], "value": None if math.isnan(r[1]) else r[1],
                 "expected": None if math.isnan(r[2]) else r[2], "status": r[3]}
                for r in rows
            ]
        )
    else:
        text = _csv(["name", "value", "expected", "status"], rows)
    _write_text(text, cfg.out)
    return EXIT_NEGATIVE if failures else EXIT_OK


def _point_in_hull(b: float, c: float, slack: float = 1e-12) -> bool:
    pts = HULL_POINTS
    for i in range(len(pts)):
        x0, y0 = pts[i]
        x1, y1 = pts[(i + 1) % len(pts)]
        cross = (x1 - x0) * (c - y0) - (y1 - y0) * (b - x0)
        if cross < -slack:
            return False
    return True


def _fig_f_curve() -> str:
    rows = []
    for ell in np.linspace(-0.5, 0.0, 1001):
        rows.append([float(ell), witness.detection_threshold(float(ell)), ""])
    r2 = math.sqrt(2.0)
    labeled = [
        (-0.5, 0.5, "i"),
        (-0.4, 0.6, "ii"),
        (witness.SPLIT_LOW, (1.0 + r2) / 4.0, "iii"),
        (witness.SPLIT_HIGH, (1.0 + r2) / 4.0, "iv"),   # left limit at the jump
        (witness.SPLIT_HIGH, (2.0 + r2) / 4.0, "v"),
        (-0.2, 0.9, "vi"),
        (0.0, 1.0, "vii"),
    ]
    rows.extend([ell, mu, label] for ell, mu, label in labeled)
    return _csv(["ell", "mu1_bound", "label"], rows)


def _fig_phi_bc_region(grid_n: int) -> str:
    axis = np.linspace(0.0, 4.0 / 3.0, grid_n)
    rows = []
    for b in axis:
        for c in axis:
            b, c = float(b), float(c)
            rows.append(
                [
                    b,
                    c,
                    posmaps.is_positive_bc(b, c),
                    posmaps.is_indecomposable_bc(b, c),
                    posmaps.is_exposed_bc(b, c),
                    _point_in_hull(b, c),
                ]
            )
    return _csv(["b", "c", "positive", "indecomposable", "exposed", "hull_member"], rows)


def _fig_gen_choi_ub(grid_n: int) -> str:
    axis = np.linspace(0.0, 4.0 / 3.0, grid_n)
    rows = []
    for b in axis:
        for c in axis:
            b, c = float(b), float(c)
            if 2.0 * b + c >= 3.0 or b + 2.0 * c >= 3.0:
                case, bound = 1, max(b, c) / 2.0
            elif b + c >= 2.0 / 3.0:
                case = 2
                bound = (b * b + c * c - 6.0 * (b + c) + b * c + 9.0) / (6.0 * (2.0 - b - c))
            else:
                case, bound = 0, math.nan
            rows.append([b, c, case, bound])
    return _csv(["b", "c", "case", "mu1_bound"], rows)


def _fig_upb_interval(samples: int) -> str:
    rows = []
    for p in np.linspace(0.5, 0.8, samples):
        p = float(p)
        lam = float(matcore.eigvalsh(families.upb_lmi_matrix(p))[-1])
        verdict = families.upb_classify(p)
        rows.append([p, lam, lam >= -absppt.LMI_PSD_TOL, verdict.value])
    return _csv(["p", "lmi_min_eig", "abs_ppt", "classification"], rows)


def cmd_fig_data(args) -> int:
    cfg = _build_config(args)
    if args.figure == "f_curve":
        text = _fig_f_curve()
    elif args.figure == "phi_bc_region":
        text = _fig_phi_bc_region(args.grid if args.grid is not None else 121)
    elif args.figure == "gen_choi_ub":
        text = _fig_gen_choi_ub(args.grid if args.grid is not None else 121)
    elif args.figure == "upb_interval":
        text = _fig_upb_interval(cfg.sample_count(301))
    else:
        raise ValueError(f"unknown figure {args.figure!r}")
    _write_text(text, cfg.out)
    return EXIT_OK


def _orbit_violation(values, m, n, criterion, b, c, seed, index) -> float:
    rng = bipartite.rng_stream(seed, stream=index)
    u = bipartite.haar_unitary(m * n, rng)
    rho = (u * values) @ u.conj().T
    if criterion == "realignment":
        return bipartite.realign_trace_norm(rho, m, n) - 1.0
    if criterion == "choi":
        phi = posmaps.choi_map()
    elif criterion == "gen_choi":
        phi = posmaps.generalized_choi_map(b, c)
    elif criterion == "breuer_hall":
        phi = posmaps.breuer_hall_map(n)
    else:
        raise ValueError(f"unknown criterion {criterion!r}")
    mapped = posmaps.apply_id_tensor(phi, rho, m)
    return -float(matcore.eigvalsh(mapped)[-1])


def _orbit_args(spec, criterion, b, c, seed, count):
    return [
        (spec.values, spec.m, spec.n, criterion, b, c, seed, i) for i in range(count)
    ]


def _orbit_worker(packed):
    return _orbit_violation(*packed)


def cmd_orbit_scan(args) -> int:
    cfg = _build_config(args)
    spec = absppt.Spectrum.from_json(_load_json(args.file))
    if args.criterion in {"choi", "gen_choi"} and (spec.m, spec.n) != (3, 3):
        raise ValueError("Choi-family criteria need a (3, 3) spectrum")
    if args.criterion == "breuer_hall":
        if spec.m != spec.n or spec.n % 2 != 0 or spec.n < 4:
            raise ValueError("Breuer-Hall criterion needs (n, n) dims with even n >= 4")
    count = cfg.sample_count(200)
    jobs = _orbit_args(spec, args.criterion, args.b, args.c, cfg.seed, count)
    if cfg.workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            violations = list(pool.map(_orbit_worker, jobs, chunksize=16))
    else:
        violations = [_orbit_worker(job) for job in jobs]
    tol = cfg.tol("violation", 1e-8)
    max_violation = float(np.max(violations))
    report = {
        "criterion": args.criterion,
        "samples": count,
        "seed": cfg.seed,
        "max_violation": max_violation,
        "tolerance": tol,
        "violated": bool(max_violation > tol),
        "verdict": absppt.is_abs_ppt(spec).value,
    }
    _write_text(_json_report(report), cfg.out)
    return EXIT_NEGATIVE if max_violation > tol else EXIT_OK


def cmd_family(args) -> int:
    cfg = _build_config(args)
    if args.kind == "werner":
        if args.n is None or args.alpha is None:
            raise ValueError("werner needs --n and --alpha")
        spec = families.werner_spectrum(args.n, args.alpha)
        case1, case2 = families.werner_lmi_min_eigs(args.n, args.alpha)
        report = {
            "family": "werner",
            "n": args.n,
            "alpha": args.alpha,
            "classification": families.werner_classify(args.n, args.alpha).value,
            "lmi_min_eigs": [case1, case2],
            "spectrum": [float(v) for v in spec.values],
        }
    elif args.kind == "isotropic":
        if args.n is None or args.alpha is None:
            raise ValueError("isotropic needs --n and --alpha")
        spec = families.isotropic_spectrum(args.n, args.alpha)
        report = {
            "family": "isotropic",
            "n": args.n,
            "alpha": args.alpha,
            "classification": families.isotropic_classify(args.n, args.alpha).value,
            "threshold": 2.0 / (2.0 + args.n**2),
            "spectrum": [float(v) for v in spec.values],
        }
    elif args.kind == "upb":
        if args.p is None:
            raise ValueError("upb needs --p")
        spec = families.upb_spectrum(args.p)
        report = {
            "family": "upb",
            "p": args.p,
            "classification": families.upb_classify(args.p).value,
            "abs_ppt_threshold": families.UPB_ABS_PPT_THRESHOLD,
            "abs_sep_threshold": families.UPB_ABS_SEP_THRESHOLD,
            "lmi_min_eig": float(matcore.eigvalsh(families.upb_lmi_matrix(args.p))[-1]),
            "spectrum": [float(v) for v in spec.values],
        }
    else:
        raise ValueError(f"unknown family {args.kind!r}")
    _write_text(_json_report(report), cfg.out)
    return EXIT_OK


# ----------------------------------------------------------------------------
# argument parsing
# ----------------------------------------------------------------------------


def _add_common(sub):
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--samples", type=int, default=None)
    sub.add_argument("--tol", action="append", metavar="NAME=VALUE")
    sub.add_argument("--out", default=None)
    sub.add_argument("--format", choices=["csv", "json"], default=None)
    sub.add_argument("--config", default=None, help="key=value config file")
    sub.add_argument("--workers", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abssep",
        description="Spectral separability toolkit: absolute-PPT checks, "
        "witness analysis, SDP certificates and parametric families.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("check-spectrum", help="absolute-PPT verdict for a spectrum file")
    p.add_argument("file")
    _add_common(p)
    p.set_defaults(func=cmd_check_spectrum)

    p = subs.add_parser("witness-analyze", help="eigenvalue summary and detection verdict")
    p.add_argument("file")
    _add_common(p)
    p.set_defaults(func=cmd_witness_analyze)

    p = subs.add_parser("verify-certificates", help="verify all analytic SDP certificates")
    p.add_argument("--bh-dims", type=int, nargs="*", default=None)
    p.add_argument("--grid", type=int, default=None, help="grid points per (b, c) axis")
    _add_common(p)
    p.set_defaults(func=cmd_verify_certificates)

    p = subs.add_parser("fig-data", help="emit figure data as CSV")
    p.add_argument(
        "figure", choices=["f_curve", "phi_bc_region", "gen_choi_ub", "upb_interval"]
    )
    p.add_argument("--grid", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_fig_data)

    p = subs.add_parser("orbit-scan", help="test a criterion over Haar orbits of a spectrum")
    p.add_argument("file")
    p.add_argument(
        "--criterion",
        choices=["realignment", "choi", "gen_choi", "breuer_hall"],
        required=True,
    )
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--c", type=float, default=0.0)
    _add_common(p)
    p.set_defaults(func=cmd_orbit_scan)

    p = subs.add_parser("family", help="parametric family reports")
    p.add_argument("kind", choices=["werner", "isotropic", "upb"])
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--p", type=float, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_family)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ToolkitError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
