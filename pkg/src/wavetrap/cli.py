"""Command line entry point: ``wavetrap {coeffs,design,predict,sample,verify,relax}``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import bravais
from .dynamics import ParticleEnsemble, relax
from .exceptions import DivergenceError, WavetrapError
from .io import RunConfig, build_coefficients, build_run, ensure_dir, to_jsonable, write_csv, write_json
from .levelsets import classify, classify_amplitudes
from .sampling import level_tolerance, numeric_minima, point_minima_summary, sample, verify

EXIT_OK, EXIT_INVALID, EXIT_UNCONFIRMED = 0, 1, 2


def _classification(setup):
    if setup.group is not None and np.isrealobj(setup.u):
        return classify(setup.dec, setup.group, setup.u, setup.cfg)
    return classify_amplitudes(setup.dec, setup.u, setup.cfg)


def _spectrum(setup) -> dict:
    dec = setup.dec
    return {
        "eigenvalues": dec.values,
        "eigenvectors": dec.vectors.T,
        "groups": [list(g) for g in dec.groups],
        "h_labels": list(dec.labels),
        "lambda_min": dec.lambda_min,
        "lambda_max": dec.lambda_max,
    }


def cmd_coeffs(run: RunConfig, args) -> int:
    coef = build_coefficients(run.coefficients, run.wavenumber)
    print(json.dumps(to_jsonable(coef.as_dict()), indent=2))
    return EXIT_OK


def cmd_design(run: RunConfig, args) -> int:
    setup = build_run(run)
    meta = setup.wave_meta
    payload = {
        "class": meta.get("class"),
        "dimension": setup.cfg.d,
        "k": setup.cfg.k,
        "K": setup.cfg.K,
        "A": setup.cfg.A,
    }
    if meta["source"] == "bravais":
        payload.update(
            params=meta["params"],
            achievable=meta["achievable"],
            implied_class=meta["implied_class"],
            reciprocal_vectors=meta["reciprocal_vectors"],
        )
        if not meta["achievable"]:
            print(
                f"warning: {meta['class']} is not achievable with equal-length wavevectors; "
                f"the design has the symmetry of {meta['implied_class'].capitalize()}",
                file=sys.stderr,
            )
    write_json(Path(args.out) / "wave.json", payload)
    return EXIT_OK


def cmd_predict(run: RunConfig, args) -> int:
    setup = build_run(run)
    cl = _classification(setup)
    payload = {
        **_spectrum(setup),
        "amplitudes": setup.u.astype(complex),
        "amplitude_source": setup.amplitude_source,
        "classification": cl.to_dict(),
    }
    if cl.status == "not-canonical":
        payload["message"] = "NotCanonical: classification unsupported"
    write_json(Path(args.out) / "prediction.json", payload)
    return EXIT_OK


def _resolution(run: RunConfig, args):
    return args.resolution if args.resolution is not None else run.resolution


def cmd_sample(run: RunConfig, args) -> int:
    setup = build_run(run)
    grid = sample(setup.cfg, setup.coef, setup.u, _resolution(run, args))
    d = setup.cfg.d
    header = [f"alpha_{i + 1}" for i in range(d)] + [f"x_{i + 1}" for i in range(d)] + ["psi"]
    rows = np.hstack([grid.alpha, grid.x, grid.values.reshape(-1, 1)])
    write_csv(Path(args.out) / "field.csv", header, rows)

    power = float(np.vdot(setup.u, setup.u).real)
    tol = level_tolerance(setup.coef, setup.u)
    summary = grid.summary()
    lo, hi = setup.dec.lambda_min * power, setup.dec.lambda_max * power
    summary.update(
        lambda_min=setup.dec.lambda_min,
        lambda_max=setup.dec.lambda_max,
        power=power,
        bound_ok=bool(summary["min"] >= lo - tol and summary["max"] <= hi + tol),
        numeric_minima=point_minima_summary(numeric_minima(grid)),
    )
    write_json(Path(args.out) / "summary.json", summary)
    print(json.dumps(to_jsonable(summary), indent=2))
    return EXIT_OK


def cmd_verify(run: RunConfig, args) -> int:
    setup = build_run(run)
    cl = _classification(setup)
    grid = sample(setup.cfg, setup.coef, setup.u, _resolution(run, args))
    report = verify(cl, setup.cfg, setup.coef, setup.u, grid, seed=args.seed if args.seed is not None else run.seed)
    payload = {"classification": cl.to_dict(), **report.to_dict()}
    write_json(Path(args.out) / "report.json", payload)
    return EXIT_OK if report.all_confirmed else EXIT_UNCONFIRMED


def cmd_relax(run: RunConfig, args) -> int:
    setup = build_run(run)
    opts = run.relax
    seed = args.seed if args.seed is not None else run.seed
    rng = np.random.default_rng(seed)
    n = int(opts.get("particles", 100))
    start = setup.cfg.from_atomic(rng.random((n, setup.cfg.d)))
    ens = ParticleEnsemble(
        start,
        step=float(opts.get("step", 0.05)),
        max_iter=int(opts.get("max_iter", 5000)),
        grad_tol=float(opts.get("grad_tol", 1e-6)),
    )
    record = bool(opts.get("trajectory", False))
    result = relax(ens, setup.u, setup.coef, setup.cfg, record_trajectory=record)

    d = setup.cfg.d
    header = (["particle"] + [f"alpha_{i + 1}" for i in range(d)]
              + [f"x_{i + 1}" for i in range(d)]
              + ["psi", "grad_norm", "converged", "iterations"])
    rows = np.column_stack([
        np.arange(n), result.alpha, result.positions, result.psi,
        result.grad_norm, result.converged, result.iterations,
    ])
    out = Path(args.out)
    int_cols = {0, 2 * d + 3, 2 * d + 4}
    write_csv(out / "particles.csv", header, rows, int_columns=int_cols)
    if record:
        theader = ["iteration", "particle"] + [f"alpha_{i + 1}" for i in range(d)] + ["psi"]
        write_csv(out / "trajectory.csv", theader, np.array(result.trajectory), int_columns={0, 1})
    print(f"{int(result.converged.sum())}/{n} particles converged")
    return EXIT_OK


COMMANDS = {
    "coeffs": cmd_coeffs,
    "design": cmd_design,
    "predict": cmd_predict,
    "sample": cmd_sample,
    "verify": cmd_verify,
    "relax": cmd_relax,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavetrap",
        description="Predict and verify particle arrangements trapped by standing plane waves.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--resolution", type=int, default=None, help="grid points per axis")
        p.add_argument("--seed", type=int, default=None, help="random seed")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        run = RunConfig.load(args.config)
        if args.seed is not None:
            run.seed = args.seed
        ensure_dir(args.out)
        return COMMANDS[args.command](run, args)
    except bravais.UnknownClassError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (WavetrapError, DivergenceError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
