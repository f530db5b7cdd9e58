"""``wcospec <task> --config path.json [--out dir] [--threads n]``.

Exit codes: 0 success, 2 refused (finite-order or non-elliptic map),
3 invalid configuration, 4 failed acceptance gate in ``verify-all``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .bergman import wco_matrix
from .classifier import classify
from .config import TASKS, ConfigError, JobConfig, load_config
from .dynamics import WeightCocycle, birkhoff_sums_grid
from .exceptions import FiniteOrderError, NonEllipticError, WcoError
from .radius import DEFAULT_SCHEDULE, r_estimate, rho_estimate
from .verification import polar_grid, pseudospectrum, residual_scan

LOGGER = logging.getLogger("wcospec")

EXIT_OK, EXIT_REFUSED, EXIT_CONFIG, EXIT_GATE = 0, 2, 3, 4
RESIDUAL_GATE = 0.25


def atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: str, header, rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
    atomic_write(path, buf.getvalue())


def _jsonable(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def write_report(out: str, task: str, body: dict) -> None:
    report = {
        "schema": 1,
        "task": task,
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    report.update(body)
    atomic_write(os.path.join(out, "report.json"), json.dumps(report, indent=2, sort_keys=True, default=_jsonable) + "\n")


def _schedule(job: JobConfig):
    return tuple(int(n) for n in job.knobs.get("schedule", DEFAULT_SCHEDULE))


def _cw(job: JobConfig) -> WeightCocycle:
    return WeightCocycle(job.weight, job.map)


def _grid(job: JobConfig):
    return job.knobs.get("M")


def task_factor(job: JobConfig, out: str, threads: int) -> tuple[int, dict]:
    w = job.weight
    g = w.outer_log_modulus
    body = {
        "blaschke_zeros": [[r.real, r.imag, m] for r, m in w.blaschke],
        "singular_atoms": [[t, s] for t, s in w.singular],
        "constant": [w.constant.real, w.constant.imag],
        "outer": {
            "grid_size": g.grid_size,
            "modulus_at_0": w.outer_modulus_at_zero,
            "mean_log_modulus": g.mean(),
            "ess_inf": w.ess_inf_boundary_modulus,
            "sup": w.sup_boundary_modulus,
            "identically_one": bool(np.allclose(g.samples, 0.0, atol=1e-9)),
        },
        "flags": {
            "zeros_in_disk": w.zeros_in_disk,
            "zeros_on_shilov": w.zeros_on_shilov,
            "singular_present": w.singular_present,
            "boundary_continuous": w.boundary_continuous,
        },
        "taylor": [[c.real, c.imag] for c in np.asarray(w.taylor_coefficients(15))[:16]],
    }
    return EXIT_OK, body


def task_radius(job: JobConfig, out: str, threads: int) -> tuple[int, dict]:
    cw = _cw(job)
    rho = rho_estimate(cw, _schedule(job), _grid(job))
    r = r_estimate(cw, _schedule(job), _grid(job))
    rows = [("rho", n, e) for n, e in rho.sequence] + [("r", n, e) for n, e in r.sequence]
    rows += [("r_disk", n, e) for n, e in r.disk_sequence]
    write_csv(os.path.join(out, "radius_sequence.csv"), ("quantity", "n", "value"), rows)
    return EXIT_OK, {
        "rho": dict(rho.to_dict(), citation="Prop. 4.8"),
        "r": dict(r.to_dict(), citation="Lemma 6.1"),
    }


def task_spectrum(job: JobConfig, out: str, threads: int) -> tuple[int, dict]:
    rep = classify(_cw(job), job.space, _schedule(job), _grid(job))
    code = EXIT_REFUSED if rep.case == "finite_order_refused" else EXIT_OK
    return code, rep.to_dict()


def task_residual(job: JobConfig, out: str, threads: int) -> tuple[int, dict]:
    k = job.knobs
    radii = tuple(float(r) for r in k.get("radii", [1.0]))
    ks = tuple(int(x) for x in k.get("ks", [8, 16, 32]))
    recs = residual_scan(_cw(job), job.space, radii, ks, phases=int(k.get("phases", 16)))
    write_csv(
        os.path.join(out, "residual.csv"),
        ("re", "im", "value", "k", "n_k"),
        [(r.lam.real, r.lam.imag, r.residual, r.k, r.n_k) for r in recs],
    )
    summary = {}
    for R in radii:
        seq = [r.residual for r in recs if abs(abs(r.lam) - R) < 1e-12]
        decreasing = bool(all(b <= a for a, b in zip(seq, seq[1:])))
        passed = decreasing and seq[-1] < RESIDUAL_GATE
        if passed:
            verdict = "pass"
        elif not job.weight.boundary_continuous:
            # grid peaks need not localize for discontinuous boundary data
            verdict = "inconclusive"
        else:
            verdict = "fail"
        summary[repr(R)] = {
            "final": seq[-1],
            "decreasing": decreasing,
            "gate_lt_0.25": bool(seq[-1] < RESIDUAL_GATE),
            "verdict": verdict,
        }
    return EXIT_OK, {"records": [r.to_dict() for r in recs], "summary": summary, "citation": "Thm 5.4 proof"}


def task_pseudospec(job: JobConfig, out: str, threads: int) -> tuple[int, dict]:
    cw = _cw(job).conjugated()
    cw.map.require_infinite_order()
    n = int(job.knobs.get("N", 200))
    M = wco_matrix(cw.weight, cw.map.eta, n, job.space.alpha)
    grid = job.knobs.get("grid", {})
    r_max = float(grid.get("r_max", 1.5 * max(np.linalg.norm(M, 2), 1e-12)))
    lam = polar_grid(r_max, int(grid.get("radii", 48)), int(grid.get("angles", 64)))
    field = pseudospectrum(M, lam, threads)
    write_csv(os.path.join(out, "pseudospectrum.csv"), ("re", "im", "value"), field.rows())
    diag = field.diagonal
    return EXIT_OK, {
        "N": n,
        "norm_2": float(np.linalg.norm(M, 2)),
        "sigma_min_range": [float(field.sigma_min.min()), float(field.sigma_min.max())],
        "finite_section_eigenvalue_moduli": sorted(set(np.round(np.abs(diag), 12).tolist())),
        "note": "finite-section eigenvalues are psi(0) eta^k and do not fill the spectrum",
    }


def task_birkhoff(job: JobConfig, out: str, threads: int) -> tuple[int, dict]:
    cw = _cw(job).conjugated()
    cw.map.require_infinite_order()
    g = cw.weight.outer_log_modulus
    if _grid(job):
        g = g.resample(int(_grid(job)))
    n = int(job.knobs.get("n", 10_000))
    avg = birkhoff_sums_grid(g.finite_surrogate(), cw.map.angle, n)
    z = np.exp(1j * g.theta)
    write_csv(os.path.join(out, "birkhoff.csv"), ("re", "im", "value"), zip(z.real, z.imag, avg))
    return EXIT_OK, {
        "n": n,
        "sup": float(avg.max()),
        "inf": float(avg.min()),
        "mean_log_modulus": g.mean(),
        "citation": "Thm 4.1",
    }


def task_verify_all(job: JobConfig, out: str, threads: int) -> tuple[int, dict]:
    from .gates import run_gates

    gates = run_gates(int(job.knobs["seed"]), int(job.knobs.get("M", 1 << 16)), threads)
    write_csv(
        os.path.join(out, "gates.csv"),
        ("gate", "passed", "value", "threshold"),
        [(g.name, g.passed, g.value, g.threshold) for g in gates],
    )
    for g in gates:
        print(f"{'PASS' if g.passed else 'FAIL'}  {g.name}: {g.value:.6g} ({g.threshold})")
    ok = all(g.passed for g in gates)
    return (EXIT_OK if ok else EXIT_GATE), {"gates": [g.to_dict() for g in gates], "all_passed": ok}


DISPATCH = {
    "factor": task_factor,
    "radius": task_radius,
    "spectrum": task_spectrum,
    "residual": task_residual,
    "pseudospec": task_pseudospec,
    "birkhoff": task_birkhoff,
    "verify-all": task_verify_all,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wcospec", description="Spectra of weighted composition operators with elliptic symbols.")
    ap.add_argument("task", help="one of: " + ", ".join(TASKS))
    ap.add_argument("--config", required=True, help="JSON job configuration")
    ap.add_argument("--out", default=".", help="output directory (default: current)")
    ap.add_argument("--threads", type=int, default=1, help="worker threads for grid loops")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    if args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return EXIT_CONFIG
    try:
        os.makedirs(args.out, exist_ok=True)
        job = load_config(args.config, args.task)
    except ConfigError as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonEllipticError as exc:
        write_report(args.out, args.task, {"refused": {"reason": exc.kind, "message": str(exc)}})
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    try:
        code, body = DISPATCH[job.task](job, args.out, args.threads)
    except FiniteOrderError as exc:
        write_report(args.out, args.task, {"refused": {"reason": "finite_order", "order": exc.order, "message": str(exc)}})
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except WcoError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    write_report(args.out, args.task, body)
    return code


if __name__ == "__main__":
    sys.exit(main())
