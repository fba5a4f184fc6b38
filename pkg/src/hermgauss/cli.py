"""Command-line front end.

Reads a JSON run configuration (file path argument or standard input),
dispatches to the library and writes a machine-readable report to standard
output.  Floats are serialized with shortest-round-trip precision, so
emitting a report and re-reading it preserves every numeric field exactly.

Exit codes: 0 success, 1 computational failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, replace

import numpy as np

from . import __version__
from .estimation import crb_experiment, sample
from .geometry import (
    crb_bound,
    curvature_finite_difference,
    geodesic_trace,
    metric_closed_form,
    metric_quadrature,
    metric_series_real,
    scalar_curvature_reduced,
)
from .models import (
    InvalidStateError,
    ModelPoint,
    PhysicalOscillator,
    StateSpec,
    from_physical,
    kernel,
    pdf,
)
from .quadrature import QuadConfig, QuadratureError, integrate_real_line

__all__ = ["ConfigError", "RunConfig", "parse_config", "run", "main"]

_COMMANDS = ("metric", "curvature", "crb", "geodesic", "sample", "verify")


class ConfigError(ValueError):
    """The run configuration is malformed; the message names the field."""


@dataclass(frozen=True)
class RunConfig:
    state: StateSpec
    point: ModelPoint
    command: str
    quad: QuadConfig
    output_format: str = "json"
    renormalize: bool = False
    estimation: dict = None
    geodesic: dict = None


def _need(obj, key, where):
    if key not in obj:
        raise ConfigError(f"missing field {key!r} in {where}")
    return obj[key]


def _parse_state(block, renormalize):
    if not isinstance(block, dict):
        raise ConfigError("'state' must be an object")
    kind = _need(block, "type", "'state'")
    try:
        if kind == "eigenstate":
            return StateSpec.eigenstate(_need(block, "n", "'state'"))
        if kind == "mixture":
            terms = _need(block, "terms", "'state'")
            weights = {t["n"]: t["weight"] for t in terms}
            return StateSpec.mixture(weights, renormalize=renormalize)
        if kind == "superposition":
            terms = _need(block, "terms", "'state'")
            coeffs = {t["n"]: complex(t.get("re", 0.0), t.get("im", 0.0))
                      for t in terms}
            return StateSpec.superposition(coeffs, renormalize=renormalize)
        if kind == "density":
            entries = _need(block, "entries", "'state'")
            table = {(e["n"], e["m"]): complex(e.get("re", 0.0), e.get("im", 0.0))
                     for e in entries}
            return StateSpec.density(table, renormalize=renormalize)
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed 'state' term: {exc}") from exc
    except InvalidStateError as exc:
        raise ConfigError(f"invalid 'state': {exc}") from exc
    raise ConfigError(f"unknown state type {kind!r}")


def parse_config(text: str) -> RunConfig:
    """Validate a JSON configuration string into a RunConfig."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("top-level config must be an object")
    renormalize = bool(raw.get("renormalize", False))
    state = _parse_state(_need(raw, "state", "config"), renormalize)

    has_point = "point" in raw
    has_phys = "physical" in raw
    if has_point == has_phys:
        raise ConfigError("exactly one of 'point' or 'physical' is required")
    try:
        if has_point:
            blk = raw["point"]
            point = ModelPoint(float(_need(blk, "mu", "'point'")),
                               float(_need(blk, "sigma", "'point'")))
        else:
            blk = raw["physical"]
            point = from_physical(PhysicalOscillator(
                mass=float(_need(blk, "mass", "'physical'")),
                omega0=float(_need(blk, "omega0", "'physical'")),
                x0=float(_need(blk, "x0", "'physical'")),
                hbar=float(blk.get("hbar", 1.0))))
    except ValueError as exc:
        raise ConfigError(f"invalid parameter point: {exc}") from exc

    command = _need(raw, "command", "config")
    if command not in _COMMANDS:
        raise ConfigError(f"unknown command {command!r}; expected one of {_COMMANDS}")

    qblk = raw.get("quad", {})
    try:
        quad = QuadConfig(
            rel_tol=float(qblk.get("rel_tol", 1e-10)),
            abs_tol=float(qblk.get("abs_tol", 1e-12)),
            max_evaluations=int(qblk.get("max_evaluations", 2_000_000)))
    except ValueError as exc:
        raise ConfigError(f"invalid 'quad' block: {exc}") from exc

    fmt = raw.get("output", {}).get("format", "json")
    if fmt not in ("json", "csv"):
        raise ConfigError(f"unknown output format {fmt!r}")

    return RunConfig(state=state, point=point, command=command, quad=quad,
                     output_format=fmt, renormalize=renormalize,
                     estimation=raw.get("estimation", {}),
                     geodesic=raw.get("geodesic", {}))


# -- report rendering -----------------------------------------------------


def _metric_entry(m):
    return {
        "path": m.path,
        "reduced": list(m.reduced),
        "i_mumu": m.i_mumu,
        "i_musigma": m.i_musigma,
        "i_sigmasigma": m.i_sigmasigma,
    }


def _emit(report, fmt, out):
    if fmt == "json":
        json.dump(report, out, indent=2)
        out.write("\n")
    else:
        _emit_csv(report, out, prefix="")


def _emit_csv(obj, out, prefix):
    if isinstance(obj, dict):
        for k in obj:
            _emit_csv(obj[k], out, f"{prefix}{k}." if prefix or True else k)
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            _emit_csv(v, out, f"{prefix}{i}.")
    else:
        out.write(f"{prefix.rstrip('.')},{obj!r}\n" if not isinstance(obj, str)
                  else f"{prefix.rstrip('.')},{obj}\n")


def _rows_csv(header, rows, out):
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(repr(float(v)) for v in row) + "\n")


# -- commands -------------------------------------------------------------


def _cmd_metric(cfg, out):
    paths = []
    if cfg.state.kind == "eigenstate":
        paths.append(_metric_entry(metric_closed_form(cfg.state, cfg.point)))
    paths.append(_metric_entry(metric_quadrature(cfg.state, cfg.point, cfg.quad)))
    coeffs = cfg.state.real_superposition_coeffs()
    if coeffs is not None:
        paths.append(_metric_entry(metric_series_real(coeffs, cfg.point)))
    report = {
        "command": "metric",
        "point": {"mu": cfg.point.mu, "sigma": cfg.point.sigma},
        "paths": paths,
    }
    _emit(report, cfg.output_format, out)
    return 0


def _cmd_curvature(cfg, out):
    metric = metric_quadrature(cfg.state, cfg.point, cfg.quad)
    reduced = scalar_curvature_reduced(metric)
    fd = curvature_finite_difference(cfg.state, cfg.point)
    report = {
        "command": "curvature",
        "point": {"mu": cfg.point.mu, "sigma": cfg.point.sigma},
        "reduced_formula": {"scalar_r": reduced.scalar_r,
                            "riemann_1212": reduced.riemann_1212},
        "finite_difference": {"scalar_r": fd.scalar_r,
                              "riemann_1212": fd.riemann_1212},
        "discrepancy": abs(reduced.scalar_r - fd.scalar_r),
    }
    _emit(report, cfg.output_format, out)
    return 0


def _cmd_crb(cfg, out):
    est = cfg.estimation or {}
    trials = int(est.get("trials", 50))
    spt = int(est.get("samples_per_trial", 1000))
    seed = int(est.get("seed", 0))
    rep = crb_experiment(cfg.state, cfg.point, trials, spt, seed)
    report = {
        "command": "crb",
        "point": {"mu": cfg.point.mu, "sigma": cfg.point.sigma},
        "trials": rep.trials,
        "samples_per_trial": rep.samples_per_trial,
        "bound": [list(map(float, r)) for r in rep.bound],
        "empirical_scaled_cov": [list(map(float, r)) for r in rep.empirical_cov],
        "violations": rep.violations,
        "failed_trials": list(rep.failed_trials),
    }
    _emit(report, cfg.output_format, out)
    return 0


def _cmd_geodesic(cfg, out):
    geo = cfg.geodesic or {}
    velocity = geo.get("velocity", [0.0, 1.0])
    tau_end = float(geo.get("tau_end", 1.0))
    steps = int(geo.get("steps", 1000))
    trace = geodesic_trace(cfg.state, cfg.point, velocity, tau_end, steps, cfg.quad)
    if cfg.output_format == "json":
        report = {
            "command": "geodesic",
            "boundary_hit": trace.boundary_hit,
            "samples": [list(map(float, r)) for r in trace.samples],
        }
        _emit(report, "json", out)
    else:
        _rows_csv(("tau", "mu", "sigma", "dmu_dtau", "dsigma_dtau"),
                  trace.samples, out)
    return 0


def _cmd_sample(cfg, out):
    est = cfg.estimation or {}
    count = int(est.get("count", 1000))
    seed = int(est.get("seed", 0))
    batch = sample(cfg.state, cfg.point, count, seed)
    if cfg.output_format == "json":
        report = {"command": "sample", "seed": seed, "count": count,
                  "draws": [float(v) for v in batch.draws]}
        _emit(report, "json", out)
    else:
        _rows_csv(("x",), [(v,) for v in batch.draws], out)
    return 0


def _cmd_verify(cfg, out):
    checks = []

    def check(name, passed, detail):
        checks.append({"name": name, "passed": bool(passed), "detail": detail})

    mq = metric_quadrature(cfg.state, cfg.point, cfg.quad)

    if cfg.state.kind == "eigenstate":
        mc = metric_closed_form(cfg.state, cfg.point)
        err = max(abs(q - c) / max(1.0, abs(c))
                  for q, c in zip(mq.reduced, mc.reduced))
        check("closed_form_vs_quadrature", err <= 1e-8, err)

    coeffs = cfg.state.real_superposition_coeffs()
    if coeffs is not None:
        ms = metric_series_real(coeffs, cfg.point)
        err = max(abs(q - s) / max(1.0, abs(s))
                  for q, s in zip(mq.reduced, ms.reduced))
        check("series_vs_quadrature", err <= 1e-8, err)

    if cfg.state.parity_even:
        forced = metric_quadrature(cfg.state, cfg.point, cfg.quad,
                                   force_offdiagonal=True)
        check("offdiagonal_vanishes", abs(forced.reduced[1]) <= 1e-10,
              forced.reduced[1])

    reduced = scalar_curvature_reduced(mq)
    fd = curvature_finite_difference(cfg.state, cfg.point)
    check("curvature_paths_agree",
          abs(reduced.scalar_r - fd.scalar_r) <= 1e-4,
          abs(reduced.scalar_r - fd.scalar_r))

    shifted = ModelPoint(cfg.point.mu + 7.3, cfg.point.sigma)
    mq2 = metric_quadrature(cfg.state, shifted, cfg.quad)
    err = max(abs(a - b) for a, b in zip(mq.reduced, mq2.reduced))
    check("mu_independence", err <= 1e-10, err)

    scaled = ModelPoint(cfg.point.mu, 3.0 * cfg.point.sigma)
    mq3 = metric_quadrature(cfg.state, scaled, cfg.quad)
    err = max(abs(scaled.sigma ** 2 * a - cfg.point.sigma ** 2 * b)
              for a, b in zip(mq3.matrix().ravel(), mq.matrix().ravel()))
    check("sigma_scaling", err <= 1e-10, err)

    kf = kernel(cfg.state)
    res = integrate_real_line(kf.f, cfg.quad, kf.degree_hint)
    check("kernel_normalization", abs(res.value - 1.0 / math.sqrt(2.0)) <= 1e-8,
          abs(res.value - 1.0 / math.sqrt(2.0)))

    trace = geodesic_trace(cfg.state, cfg.point, (0.3, 0.2), 5.0, 2000, cfg.quad)
    speeds = trace.metric_speeds()
    drift = float(np.max(np.abs(speeds - speeds[0])) / abs(speeds[0]))
    check("geodesic_speed_conservation", drift <= 1e-6, drift)

    seed = int((cfg.estimation or {}).get("seed", 0))
    b1 = sample(cfg.state, cfg.point, 256, seed)
    b2 = sample(cfg.state, cfg.point, 256, seed)
    check("sampler_determinism", bool(np.array_equal(b1.draws, b2.draws)), seed)

    mq_again = metric_quadrature(cfg.state, cfg.point, cfg.quad)
    check("metric_determinism", mq_again.reduced == mq.reduced, mq.reduced)

    all_passed = all(c["passed"] for c in checks)
    report = {"command": "verify", "all_passed": all_passed, "checks": checks}
    _emit(report, cfg.output_format, out)
    return 0 if all_passed else 1


_DISPATCH = {
    "metric": _cmd_metric,
    "curvature": _cmd_curvature,
    "crb": _cmd_crb,
    "geodesic": _cmd_geodesic,
    "sample": _cmd_sample,
    "verify": _cmd_verify,
}


def run(config: RunConfig, out=None) -> int:
    """Execute one configured command; returns the process exit status."""
    if out is None:
        out = sys.stdout
    try:
        return _DISPATCH[config.command](config, out)
    except (QuadratureError, InvalidStateError, ValueError, RuntimeError,
            OverflowError) as exc:
        json.dump({"error": {"type": type(exc).__name__, "message": str(exc)}},
                  sys.stderr)
        sys.stderr.write("\n")
        return 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hermgauss",
        description="Fisher-Rao geometry of oscillator-state position "
                    "distributions")
    parser.add_argument("config", nargs="?", default="-",
                        help="JSON config file path, or '-' for stdin")
    parser.add_argument("--mu", type=float, help="override point mu")
    parser.add_argument("--sigma", type=float, help="override point sigma")
    parser.add_argument("--tol", type=float, help="override quadrature rel_tol")
    parser.add_argument("--seed", type=int, help="override estimation seed")
    parser.add_argument("--format", choices=("json", "csv"),
                        help="override output format")
    parser.add_argument("--version", action="version", version=__version__)
    args = parser.parse_args(argv)

    try:
        if args.config == "-":
            text = sys.stdin.read()
        else:
            with open(args.config, "r", encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return 2

    try:
        cfg = parse_config(text)
        if args.mu is not None or args.sigma is not None:
            cfg = replace(cfg, point=ModelPoint(
                args.mu if args.mu is not None else cfg.point.mu,
                args.sigma if args.sigma is not None else cfg.point.sigma))
        if args.tol is not None:
            cfg = replace(cfg, quad=replace(cfg.quad, rel_tol=args.tol))
        if args.seed is not None:
            est = dict(cfg.estimation or {})
            est["seed"] = args.seed
            cfg = replace(cfg, estimation=est)
        if args.format is not None:
            cfg = replace(cfg, output_format=args.format)
    except ConfigError as exc:
        json.dump({"error": {"type": "ConfigError", "message": str(exc)}},
                  sys.stderr)
        sys.stderr.write("\n")
        return 2

    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
