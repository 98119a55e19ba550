"""Command-line front end: every computation as a subcommand.

    chkp profile     --k 1 --c 4 --out wave.csv
    chkp functionals --k 1 --c 4 --out report.json
    chkp symbol      --k 1 --c 4 --nu 0.1 --eta 0.01 --out curve.csv
    chkp figure1     --k 1 --c 4 --nu 0.1 --eta 0.01 --out fig1.svg
    chkp puiseux     --k 1 --c 4 --out split.json
    chkp eigs        --k 1 --c 3.5 --nu 0.13 --eta 0.005 --out spec.csv
    chkp track       --k 1 --c 3.5 --nu 0.13 --etas 0.002,0.004 --out track.csv
    chkp sweep puiseux --k 1 --c 3.1:6:30 --out sweep.csv

Exactly one of --c/--nu/--eta may be a start:stop:count range under
``sweep``. Outputs are written atomically; a one-line summary of the key
scalars goes to standard output. Without --out the payload itself goes
to standard output and the summary to standard error. Invalid inputs
exit with code 2 (single aggregated message); computation errors exit
with code 1. A flat key=value file passed as --config supplies defaults
for the flags; CHKP_JOBS sets the default worker count for sweeps.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import functionals as fn
from . import profile as pr
from . import puiseux as pz
from . import specdisc as sd
from . import symbol as sy
from .emit import fmt, csv_text, json_dumps, write_text_atomic
from .errors import ChkpError, ConfigError

__all__ = ["main", "RunConfig"]

SWEEP_TARGETS = {
    "puiseux": ("c",),
    "functionals": ("c",),
    "symbol": ("c", "nu", "eta"),
    "track": ("eta",),
}

DEFAULT_ETAS = (0.002, 0.004, 0.006, 0.008, 0.01)


@dataclass
class Numerics:
    x_max: float | None = None
    n_x: int = 4096
    n_modes: int = 1024
    domain_length: float | None = None
    xi_max: float | None = None
    n_xi: int = 4001


@dataclass
class RunConfig:
    subcommand: str
    k: float
    c: float
    nu: float = 0.0
    eta: float = 0.0
    numerics: Numerics = None
    format: str | None = None
    out: str | None = None
    jobs: int = 1
    method: str = "closed_form"
    etas: tuple = DEFAULT_ETAS
    target: str | None = None
    range_param: str | None = None
    range_values: tuple | None = None


def _parse_range(text: str):
    """start:stop:count -> tuple of floats (inclusive endpoints)."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"range must be start:stop:count, got {text!r}")
    start, stop = float(parts[0]), float(parts[1])
    count = int(parts[2])
    if count < 1:
        raise ValueError(f"range count must be >= 1, got {count}")
    return tuple(np.linspace(start, stop, count))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chkp",
        description="Solitary waves of the Camassa-Holm equation and their "
                    "transverse spectral stability diagnostics.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, nu_eta=True):
        p.add_argument("--k", type=str, required=True, help="background level k > 0")
        p.add_argument("--c", type=str, required=True, help="wave speed c > 3k")
        if nu_eta:
            p.add_argument("--nu", type=str, default="0",
                           help="exponential weight in [0, nu0)")
            p.add_argument("--eta", type=str, default="0",
                           help="transverse wavenumber")
        p.add_argument("--out", type=str, default=None, help="output path")
        p.add_argument("--format", choices=["csv", "json", "svg"], default=None)
        p.add_argument("--config", type=str, default=None,
                       help="flat key=value file supplying flag defaults")
        p.add_argument("--jobs", type=int,
                       default=int(os.environ.get("CHKP_JOBS",
                                                  os.cpu_count() or 1)),
                       help="worker processes for sweeps")

    p = sub.add_parser("profile", help="solitary wave samples and header")
    common(p, nu_eta=False)
    p.add_argument("--x-max", type=float, default=None)
    p.add_argument("--n-x", type=int, default=4096)

    p = sub.add_parser("functionals", help="conserved functionals report")
    common(p, nu_eta=False)
    p.add_argument("--method", choices=["closed", "quadrature"], default="closed")
    p.add_argument("--x-max", type=float, default=None)
    p.add_argument("--n-x", type=int, default=4096)

    for name in ("symbol", "figure1"):
        p = sub.add_parser(name, help="weighted continuous-spectrum curve")
        common(p)
        p.add_argument("--xi-max", type=float, default=None)
        p.add_argument("--n-xi", type=int, default=4001)

    p = sub.add_parser("puiseux", help="splitting coefficients of the double zero")
    common(p, nu_eta=False)

    p = sub.add_parser("eigs", help="full spectrum of the discretized operator")
    common(p)
    p.add_argument("--x-max", type=float, default=None)
    p.add_argument("--n-modes", type=int, default=1024)
    p.add_argument("--domain-length", type=float, default=None)

    p = sub.add_parser("track", help="resonance pair across transverse wavenumbers")
    common(p)
    p.add_argument("--etas", type=str,
                   default=",".join(str(e) for e in DEFAULT_ETAS))
    p.add_argument("--x-max", type=float, default=None)
    p.add_argument("--n-modes", type=int, default=1024)
    p.add_argument("--domain-length", type=float, default=None)

    p = sub.add_parser("sweep", help="CSV table over a parameter range")
    p.add_argument("target", choices=sorted(SWEEP_TARGETS))
    common(p)
    p.add_argument("--method", choices=["closed", "quadrature"], default="closed")
    p.add_argument("--x-max", type=float, default=None)
    p.add_argument("--n-x", type=int, default=4096)
    p.add_argument("--n-modes", type=int, default=1024)
    p.add_argument("--domain-length", type=float, default=None)
    p.add_argument("--xi-max", type=float, default=None)
    p.add_argument("--n-xi", type=int, default=4001)
    return parser


def _merge_config_file(argv: list) -> list:
    """Prepend key=value pairs from --config so explicit flags win."""
    path = None
    for i, token in enumerate(argv):
        if token == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif token.startswith("--config="):
            path = token.split("=", 1)[1]
    if path is None:
        return argv
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    injected = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"config line is not key=value: {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            injected += ["--" + key.replace("_", "-"), value]
    # insert after the leading positionals so explicit flags override
    cut = 1
    while cut < len(argv) and not argv[cut].startswith("-"):
        cut += 1
    return argv[:cut] + injected + argv[cut:]


def _to_config(ns: argparse.Namespace) -> RunConfig:
    errors = []

    def scalar_or_range(name, allow_range):
        raw = getattr(ns, name, None)
        if raw is None:
            return None, None
        raw = str(raw)
        if ":" in raw:
            if not allow_range:
                errors.append(f"--{name} does not accept a range here")
                return None, None
            try:
                return None, _parse_range(raw)
            except ValueError as exc:
                errors.append(str(exc))
                return None, None
        try:
            return float(raw), None
        except ValueError:
            errors.append(f"--{name} must be a number, got {raw!r}")
            return None, None

    is_sweep = ns.subcommand == "sweep"
    target = getattr(ns, "target", None)
    allowed = SWEEP_TARGETS.get(target, ()) if is_sweep else ()

    values = {}
    ranges = {}
    for name in ("k", "c", "nu", "eta"):
        value, rng = scalar_or_range(name, is_sweep and name in allowed)
        values[name] = value
        if rng is not None:
            ranges[name] = rng

    if len(ranges) > 1:
        errors.append("at most one of --c/--nu/--eta may be a range")
    range_param = next(iter(ranges), None)

    k = values.get("k")
    c = values.get("c")
    if k is not None and (not math.isfinite(k) or k <= 0):
        errors.append(f"k must be positive, got {k}")
    c_checkable = c if range_param != "c" else min(ranges.get("c", (0,)))
    if k is not None and c_checkable is not None and c_checkable <= 3 * k:
        errors.append(f"solitary waves require c > 3k (got c={c_checkable}, 3k={3 * k})")

    nu0 = None
    if k is not None and c is not None and c > 3 * k:
        nu0 = math.sqrt((c - 3 * k) / (c - k))
    nu = values.get("nu") or 0.0
    eta = values.get("eta") or 0.0
    if nu < 0 or (nu0 is not None and "nu" not in ranges and nu >= nu0):
        errors.append(f"weight nu={nu} outside [0, nu0)")
    if ns.subcommand in ("eigs", "track") and nu == 0 and (eta != 0 or ns.subcommand == "track"):
        errors.append("eigs/track with transverse wavenumbers need nu > 0")
    if range_param == "nu" and nu0 is not None:
        bad = [v for v in ranges["nu"] if not 0 < v < nu0]
        if bad:
            errors.append(f"swept nu values {bad} outside (0, nu0={nu0:.6g})")
    if range_param == "c" and k is not None and nu > 0:
        c_min = min(ranges["c"])
        if c_min > 3 * k and nu >= math.sqrt((c_min - 3 * k) / (c_min - k)):
            errors.append(f"nu={nu} not below nu0 of the smallest swept c")
    if is_sweep and target == "track" and nu == 0:
        errors.append("sweep track needs nu > 0")

    num = Numerics(
        x_max=getattr(ns, "x_max", None),
        n_x=getattr(ns, "n_x", 4096),
        n_modes=getattr(ns, "n_modes", 1024),
        domain_length=getattr(ns, "domain_length", None),
        xi_max=getattr(ns, "xi_max", None),
        n_xi=getattr(ns, "n_xi", 4001),
    )
    if num.x_max is not None and num.x_max <= 0:
        errors.append(f"x_max must be positive, got {num.x_max}")
    if num.n_x < 256:
        errors.append(f"n_x must be at least 256, got {num.n_x}")
    if num.n_modes < 16 or num.n_modes % 2:
        errors.append(f"n_modes must be even and >= 16, got {num.n_modes}")
    if num.n_xi < 1024:
        errors.append(f"n_xi must be at least 1024, got {num.n_xi}")
    if num.domain_length is not None and num.x_max is not None \
            and num.domain_length < 2 * num.x_max:
        errors.append("domain_length must be at least 2 * x_max")

    etas = DEFAULT_ETAS
    if hasattr(ns, "etas"):
        try:
            etas = tuple(float(tok) for tok in str(ns.etas).split(",") if tok)
            if not etas:
                raise ValueError
            if any(e < 0 for e in etas):
                errors.append("--etas entries must be nonnegative")
        except ValueError:
            errors.append(f"--etas must be a comma list of numbers, got {ns.etas!r}")

    jobs = getattr(ns, "jobs", 1)
    if jobs < 1:
        errors.append(f"jobs must be >= 1, got {jobs}")

    if is_sweep and not ranges:
        errors.append("sweep needs one of --c/--nu/--eta as start:stop:count")

    if errors:
        raise ConfigError("invalid configuration: " + "; ".join(errors))

    return RunConfig(
        subcommand=ns.subcommand,
        k=k, c=c, nu=nu, eta=eta,
        numerics=num,
        format=getattr(ns, "format", None),
        out=getattr(ns, "out", None),
        jobs=jobs,
        method={"closed": "closed_form", "quadrature": "quadrature"}.get(
            getattr(ns, "method", "closed"), "closed_form"),
        etas=etas,
        target=target,
        range_param=range_param,
        range_values=ranges.get(range_param),
    )


def _default_format(cfg: RunConfig) -> str:
    if cfg.format:
        return cfg.format
    if cfg.out:
        ext = cfg.out.rsplit(".", 1)[-1].lower()
        if ext in ("csv", "json", "svg"):
            return ext
    return {"profile": "csv", "functionals": "json", "symbol": "csv",
            "figure1": "svg", "puiseux": "json", "eigs": "csv",
            "track": "csv", "sweep": "csv"}[cfg.subcommand]


def _solve_profile(cfg: RunConfig) -> pr.Profile:
    return pr.solve_profile(pr.WaveParams(cfg.k, cfg.c),
                            x_max=cfg.numerics.x_max, n_x=cfg.numerics.n_x)


def _run_profile(cfg: RunConfig):
    prof = _solve_profile(cfg)
    r1, r2, r3 = prof.residuals
    summary = (f"psi(0)={fmt(prof.peak_value)} nu0={prof.params.nu0:.6g} "
               f"r1={r1:.3e} r2={r2:.3e} r3={r3:.3e}")
    extras = {}
    if cfg.out:
        extras[cfg.out.rsplit(".", 1)[0] + ".json"] = json_dumps(prof.header())
    return prof.to_csv(), summary, extras


def _run_functionals(cfg: RunConfig):
    if cfg.method == "quadrature":
        report = fn.functionals_quadrature(_solve_profile(cfg))
    else:
        report = fn.functionals_closed(pr.WaveParams(cfg.k, cfg.c))
    summary = (f"M={fmt(report.mass)} E={fmt(report.energy)} "
               f"norm2={fmt(report.norm2)} dM/dc={fmt(report.dmass_dc)} "
               f"dE/dc={fmt(report.denergy_dc)} ({report.method})")
    return json_dumps(report.to_dict()), summary, {}


def _run_symbol(cfg: RunConfig, as_svg: bool):
    params = pr.WaveParams(cfg.k, cfg.c)
    xi_max = cfg.numerics.xi_max
    if xi_max is None:
        xi_max = 20.0 if cfg.subcommand == "figure1" else sy.default_xi_max(params)
    curve = sy.figure1_curve(params, cfg.nu, cfg.eta, xi_max, cfg.numerics.n_xi)
    summary = f"max Re lambda = {fmt(curve.max_real)} over {curve.xi.size} samples"
    if 0 < cfg.nu < params.nu0:
        bound = sy.continuous_spectrum_bound(params, cfg.nu, cfg.eta,
                                             xi_max, cfg.numerics.n_xi)
        summary += f" (b={fmt(bound.b)} at xi={fmt(bound.xi_at_max)})"
    return curve.to_svg() if as_svg else curve.to_csv(), summary, {}


def _run_puiseux(cfg: RunConfig):
    coeffs = pz.puiseux_coefficients(pr.WaveParams(cfg.k, cfg.c))
    asym = pz.kdv_limit_coefficients(cfg.k, cfg.c)
    payload = coeffs.to_dict()
    payload["asym_lambda1_sq"], payload["asym_lambda2"] = asym
    summary = f"lambda1_sq={fmt(coeffs.lambda1_sq)} lambda2={fmt(coeffs.lambda2)}"
    return json_dumps(payload), summary, {}


def _run_eigs(cfg: RunConfig, fmt_name: str):
    prof = _solve_profile(cfg)
    a = sd.build_operator(prof, cfg.nu, cfg.eta, cfg.numerics.n_modes,
                          cfg.numerics.domain_length)
    report = sd.full_spectrum(a)
    summary = (f"n={report.eigenvalues.size} cluster={report.cluster.size} "
               f"band={fmt(report.continuous_band_estimate)} "
               f"conj_defect={report.conjugation_defect:.3e}")
    payload = json_dumps(report.to_dict()) if fmt_name == "json" else report.to_csv()
    return payload, summary, {}


def _run_track(cfg: RunConfig):
    prof = _solve_profile(cfg)
    track = sd.track_resonances(prof, cfg.nu, cfg.etas, cfg.numerics.n_modes,
                                cfg.numerics.domain_length)
    summary = (f"im_slope={fmt(track.im_slope)} "
               f"(ref {fmt(track.reference_im_slope)}) "
               f"re_curvature={fmt(track.re_curvature)} "
               f"(ref {fmt(track.reference_re_curvature)})")
    return track.to_csv(), summary, {}


def _sweep_task(cfg: RunConfig, value: float) -> dict:
    task = {
        "target": cfg.target, "k": cfg.k, "c": cfg.c, "nu": cfg.nu,
        "eta": cfg.eta, "method": cfg.method,
        "x_max": cfg.numerics.x_max, "n_x": cfg.numerics.n_x,
        "n_modes": cfg.numerics.n_modes,
        "domain_length": cfg.numerics.domain_length,
        "xi_max": cfg.numerics.xi_max, "n_xi": cfg.numerics.n_xi,
    }
    task[cfg.range_param] = value
    return task


def _sweep_row(task: dict) -> tuple:
    params = pr.WaveParams(task["k"], task["c"])
    target = task["target"]
    if target == "puiseux":
        coeffs = pz.puiseux_coefficients(params)
        asym1, asym2 = pz.kdv_limit_coefficients(task["k"], task["c"])
        return (task["c"], coeffs.lambda1_sq, coeffs.lambda2, asym1, 2 * asym2)
    if target == "functionals":
        if task["method"] == "quadrature":
            report = fn.functionals_quadrature(
                pr.solve_profile(params, task["x_max"], task["n_x"]))
        else:
            report = fn.functionals_closed(params)
        return (task["c"], report.mass, report.dmass_dc, report.energy,
                report.denergy_dc, report.norm2, report.method)
    if target == "symbol":
        xi_max = task["xi_max"] or sy.default_xi_max(params)
        bound = sy.continuous_spectrum_bound(params, task["nu"], task["eta"],
                                             xi_max, task["n_xi"])
        return (task["c"], task["nu"], task["eta"], bound.b, bound.xi_at_max,
                bound.tail_limit)
    if target == "track":
        prof = pr.solve_profile(params, task["x_max"], task["n_x"])
        track = sd.track_resonances(prof, task["nu"], [task["eta"]],
                                    task["n_modes"], task["domain_length"])
        p = track.points[0]
        return (p.eta, p.measured[0].real, p.measured[0].imag,
                p.predicted[0].real, p.predicted[0].imag, p.distance)
    raise ConfigError(f"unknown sweep target {target!r}")


SWEEP_HEADERS = {
    "puiseux": ["c", "lambda1_sq", "lambda2", "asym_lambda1_sq", "asym_2lambda2"],
    "functionals": ["c", "M", "dM/dc", "E", "dE/dc", "norm2", "method"],
    "symbol": ["c", "nu", "eta", "b", "xi_at_max", "tail_limit"],
    "track": ["eta", "re_meas", "im_meas", "re_pred", "im_pred", "dist"],
}


def _run_sweep(cfg: RunConfig):
    tasks = [_sweep_task(cfg, v) for v in cfg.range_values]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(_sweep_row, tasks))
    else:
        rows = [_sweep_row(t) for t in tasks]
    payload = csv_text(SWEEP_HEADERS[cfg.target], rows)
    return payload, f"{len(rows)} rows ({cfg.target} over {cfg.range_param})", {}


def run(cfg: RunConfig) -> int:
    """Dispatch a validated configuration; returns the exit status."""
    fmt_name = _default_format(cfg)
    if cfg.subcommand == "profile":
        payload, summary, extras = _run_profile(cfg)
    elif cfg.subcommand == "functionals":
        payload, summary, extras = _run_functionals(cfg)
    elif cfg.subcommand in ("symbol", "figure1"):
        payload, summary, extras = _run_symbol(cfg, fmt_name == "svg")
    elif cfg.subcommand == "puiseux":
        payload, summary, extras = _run_puiseux(cfg)
    elif cfg.subcommand == "eigs":
        payload, summary, extras = _run_eigs(cfg, fmt_name)
    elif cfg.subcommand == "track":
        payload, summary, extras = _run_track(cfg)
    elif cfg.subcommand == "sweep":
        payload, summary, extras = _run_sweep(cfg)
    else:  # pragma: no cover - argparse restricts choices
        raise ConfigError(f"unknown subcommand {cfg.subcommand!r}")

    if cfg.out:
        write_text_atomic(cfg.out, payload)
        for path, text in extras.items():
            write_text_atomic(path, text)
        print(f"{summary} -> {cfg.out}")
    else:
        sys.stdout.write(payload)
        print(summary, file=sys.stderr)
    return 0


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        argv = _merge_config_file(["<prog>"] + argv)[1:]
        ns = parser.parse_args(argv)
        cfg = _to_config(ns)
        return run(cfg)
    except ConfigError as exc:
        print(f"chkp: {exc}", file=sys.stderr)
        return 2
    except ChkpError as exc:
        print(f"chkp: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
