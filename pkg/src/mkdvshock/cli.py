"""Command-line front end: ``mkdvshock <command> [options]``.

Commands
--------
eval              one asymptotic sample q(x, t)
profile           q(x, t) on a uniform x grid (CSV, optional SVG)
modulation-table  d, mu, m, tau, e0, B_g, B_Omega, Delta over a xi grid
sigtable          sign table of Im theta, Im g_c or Im g
simulate          direct MKdV run writing slices and a JSON manifest
compare           envelope and wavelength checks of slices against the asymptotics

Exit codes: 0 ok, 2 domain or configuration error, 3 convergence failure or
unstable run, 4 comparison failure.  Options may also come from a JSON file
given by ``--config``; explicit flags win over the file, the file over
built-in defaults.
"""

import argparse
from dataclasses import dataclass, field
import json
import math
import os
import sys
import time

import numpy as np

from . import oracle, wavefield
from .errors import (
    ComparisonError,
    ConsistencyError,
    ContractError,
    ConvergenceError,
    DomainError,
    UnstableRunError,
)
from .modulation import modulation_table, write_modulation_table
from .phase import signature_grid
from .scattering import ShockParams

EXIT_OK, EXIT_DOMAIN, EXIT_CONVERGENCE, EXIT_COMPARISON = 0, 2, 3, 4

DEFAULT_THRESHOLDS = {
    "envelope_median": 0.10,
    "envelope_max": 0.25,
    "wavelength_median": 0.15,
    "plateau_mean": 0.05,
    "vanishing_max": 0.30,
}

DEFAULTS = {
    "common": {"c": 1.0, "format": "csv", "output": None, "edge_width": wavefield.DEFAULT_EDGE_WIDTH},
    "eval": {},
    "profile": {"xmin": -100.0, "xmax": 100.0, "n": 201, "svg": None},
    "modulation-table": {"xi_min": -0.45, "xi_max": 0.3, "n": 16},
    "sigtable": {"phase": "theta", "re_min": -2.0, "re_max": 2.0, "im_min": -2.0,
                 "im_max": 2.0, "nx": 81, "ny": 81},
    "simulate": {"half_length": 512.0, "n_points": 8192, "dt": None, "t_end": 40.0, "eps": 0.5,
                 "dealias_fraction": 2.0 / 3.0, "snapshots": None, "out_dir": "slices",
                 "binary": False, "absorber": False},
    "compare": {"manifest": None, "window_limit": 0.6, **DEFAULT_THRESHOLDS},
}


@dataclass
class RunConfig:
    """Merged options for one command (flag > config file > default)."""

    command: str
    c: float = 1.0
    format: str = "csv"
    output: str | None = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.c >= 0 or (self.c == 0 and self.command != "simulate"):
            raise DomainError(f"c must be positive, got {self.c}")
        if self.format not in ("csv", "json"):
            raise DomainError(f"format must be csv or json, got {self.format!r}")

    def __getattr__(self, name):
        try:
            return self.__dict__["options"][name]
        except KeyError:
            raise AttributeError(name) from None



def build_parser():
    parser = argparse.ArgumentParser(prog="mkdvshock", description=__doc__.split("\n")[0])
    common = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    common.add_argument("--c", type=float, default=S, help="step height c")
    common.add_argument("--config", default=S, help="JSON file with option defaults")
    common.add_argument("--format", choices=("csv", "json"), default=S)
    common.add_argument("-o", "--output", default=S, help="output path (default stdout)")
    common.add_argument("--edge-width", dest="edge_width", type=float, default=S,
                        help="boundary-layer half-width in xi, units of c^2")
    common.add_argument("--cache-dir", dest="cache_dir", default=S,
                        help="sets MKDV_CACHE_DIR for the modulation memo")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="one asymptotic sample")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--t", type=float, required=True)

    p = sub.add_parser("profile", parents=[common], help="asymptotic profile CSV")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--xmin", type=float, default=S)
    p.add_argument("--xmax", type=float, default=S)
    p.add_argument("--n", type=int, default=S)
    p.add_argument("--svg", default=S, help="also write an SVG plot to this path")

    p = sub.add_parser("modulation-table", parents=[common], help="modulation constants over xi")
    p.add_argument("--xi-min", dest="xi_min", type=float, default=S)
    p.add_argument("--xi-max", dest="xi_max", type=float, default=S)
    p.add_argument("--n", type=int, default=S)

    p = sub.add_parser("sigtable", parents=[common], help="sign table of Im phase")
    p.add_argument("--xi", type=float, required=True)
    p.add_argument("--phase", choices=("theta", "gc", "g"), default=S)
    for name in ("re_min", "re_max", "im_min", "im_max"):
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=float, default=S)
    p.add_argument("--nx", type=int, default=S)
    p.add_argument("--ny", type=int, default=S)

    p = sub.add_parser("simulate", parents=[common], help="direct MKdV run")
    p.add_argument("--half-length", dest="half_length", type=float, default=S)
    p.add_argument("--n-points", dest="n_points", type=int, default=S)
    p.add_argument("--dt", type=float, default=S)
    p.add_argument("--t-end", dest="t_end", type=float, default=S)
    p.add_argument("--eps", type=float, default=S)
    p.add_argument("--dealias-fraction", dest="dealias_fraction", type=float, default=S)
    p.add_argument("--snapshots", default=S, help="comma-separated output times")
    p.add_argument("--out-dir", dest="out_dir", default=S)
    p.add_argument("--binary", action="store_true", default=S, help="write MKDV1 binary slices")
    p.add_argument("--absorber", action="store_true", default=S,
                   help="damp short waves near the periodic seam (recommended for compare)")

    p = sub.add_parser("compare", parents=[common], help="compare slices with the asymptotics")
    p.add_argument("--slices", nargs="+", required=True)
    p.add_argument("--manifest", default=S, help="run manifest to check c against")
    p.add_argument("--window-limit", dest="window_limit", type=float, default=S,
                   help="compare only |x| <= limit * L")
    for name in DEFAULT_THRESHOLDS:
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=float, default=S)
    return parser


def resolve_config(args):
    """Merge defaults, the optional JSON config file and explicit flags."""
    given = vars(args).copy()
    command = given.pop("command")
    merged = dict(DEFAULTS["common"])
    merged.update(DEFAULTS[command])
    path = given.pop("config", None)
    if path:
        with open(path) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise DomainError("config file must hold a JSON object")
        section = data.get(command, {})
        flat = {k: v for k, v in data.items() if not isinstance(v, dict)}
        for src in (flat, section):
            merged.update({k.replace("-", "_"): v for k, v in src.items()})
    merged.update(given)
    if merged.get("cache_dir"):
        os.environ["MKDV_CACHE_DIR"] = str(merged["cache_dir"])
    c = float(merged.pop("c"))
    fmt = merged.pop("format")
    out = merged.pop("output")
    return RunConfig(command, c, fmt, out, merged)


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _emit(text, cfg):
    fh, close = _open_out(cfg.output)
    try:
        fh.write(text)
    finally:
        if close:
            fh.close()


def _sample_dict(s):
    return {
        "x": s.x, "t": s.t, "xi": s.xi, "region": s.region.tag.value, "q": s.q,
        "env_lo": s.envelope_lo, "env_hi": s.envelope_hi, "wavelength": s.wavelength,
        "boundary_distance": s.region.boundary_distance, "low_confidence": s.low_confidence,
        "error_order": s.error_order,
    }


def _json(obj):
    def fix(v):
        if isinstance(v, float) and not math.isfinite(v):
            return None
        if isinstance(v, dict):
            return {k: fix(x) for k, x in v.items()}
        if isinstance(v, (list, tuple)):
            return [fix(x) for x in v]
        return v

    return json.dumps(fix(obj), indent=2, sort_keys=True) + "\n"


def _csv_samples(samples):
    import io

    buf = io.StringIO()
    wavefield.write_profile(samples, buf)
    return buf.getvalue()


def cmd_eval(cfg):
    s = wavefield.q_asymptotic(cfg.x, cfg.t, ShockParams(cfg.c), cfg.edge_width)
    _emit(_json(_sample_dict(s)) if cfg.format == "json" else _csv_samples([s]), cfg)
    return EXIT_OK


def cmd_profile(cfg):
    if cfg.n < 2:
        raise DomainError("profile needs n >= 2")
    p = ShockParams(cfg.c)
    xs = np.linspace(cfg.xmin, cfg.xmax, cfg.n)
    samples = [wavefield.q_asymptotic(float(x), cfg.t, p, cfg.edge_width) for x in xs]
    if cfg.format == "json":
        _emit(_json([_sample_dict(s) for s in samples]), cfg)
    else:
        _emit(_csv_samples(samples), cfg)
    if cfg.svg:
        with open(cfg.svg, "w") as fh:
            wavefield.write_profile_svg(samples, fh)
    return EXIT_OK


def cmd_modulation_table(cfg):
    c2 = cfg.c ** 2
    lo, hi = cfg.xi_min, cfg.xi_max
    if not (-0.5 * c2 < lo <= hi < c2 / 3.0):
        raise DomainError("xi range must lie inside (-c^2/2, c^2/3)")
    if cfg.n < 1:
        raise DomainError("n must be positive")
    xs = np.linspace(lo, hi, cfg.n) if cfg.n > 1 else np.array([lo])
    states = modulation_table(xs, ShockParams(cfg.c))
    if cfg.format == "json":
        _emit(_json([{**{k: getattr(s, k) for k in ("xi", "d", "mu", "m", "tau", "e0", "B_g",
                                                    "B_Omega", "Delta")},
                      "flags": s.sign_violations()} for s in states]), cfg)
    else:
        import io

        buf = io.StringIO()
        write_modulation_table(states, buf)
        _emit(buf.getvalue(), cfg)
    return EXIT_OK


def cmd_sigtable(cfg):
    grid = signature_grid(cfg.phase, cfg.xi, ShockParams(cfg.c), (cfg.re_min, cfg.re_max),
                          (cfg.im_min, cfg.im_max), (cfg.nx, cfg.ny))
    if cfg.format == "json":
        _emit(_json({"phase": cfg.phase, "xi": cfg.xi, "re_range": list(grid.re_range),
                     "im_range": list(grid.im_range), "values": grid.values.tolist()}), cfg)
    else:
        _emit(grid.to_csv(), cfg)
    return EXIT_OK


def _parse_times(spec, t_end):
    if spec is None:
        return [t_end]
    if isinstance(spec, (list, tuple)):
        return [float(v) for v in spec]
    return [float(v) for v in str(spec).split(",") if v.strip()]


def cmd_simulate(cfg):
    grid = oracle.GridSpec(cfg.half_length, int(cfg.n_points), cfg.dt, cfg.t_end,
                           cfg.dealias_fraction, absorber=bool(cfg.absorber))
    times = _parse_times(cfg.snapshots, cfg.t_end)
    os.makedirs(cfg.out_dir, exist_ok=True)
    manifest = {
        "config": {"c": cfg.c, "half_length": grid.half_length, "n_points": grid.n_points,
                   "dt": grid.step, "t_end": grid.t_end, "eps": cfg.eps,
                   "dealias_fraction": grid.dealias_fraction, "absorber": grid.absorber},
        "snapshots": times,
        "files": [],
        "conservation_drift": {},
        "status": "ok",
        "blowup_t": None,
    }
    params = cfg.c if cfg.c == 0 else ShockParams(cfg.c)
    start = time.perf_counter()
    base = None
    code = EXIT_OK
    try:
        x0 = grid.x
        q0 = oracle.initial_profile(x0, cfg.c, cfg.eps, grid.half_length)
        base = oracle.conservation(oracle.FieldSlice(0.0, x0, q0))
        drift = [0.0, 0.0]
        for s in oracle.solve_mkdv(params, grid, cfg.eps, times):
            ext = "bin" if cfg.binary else "csv"
            name = f"slice_t{s.t:.6g}.{ext}"
            path = os.path.join(cfg.out_dir, name)
            if cfg.binary:
                with open(path, "wb") as fh:
                    oracle.write_slice_binary(s, fh)
            else:
                with open(path, "w") as fh:
                    oracle.write_slice_csv(s, fh)
            manifest["files"].append(name)
            cur = oracle.conservation(s)
            for i in range(2):
                scale = abs(base[i]) if base[i] != 0 else 1.0
                drift[i] = max(drift[i], abs(cur[i] - base[i]) / scale)
        manifest["conservation_drift"] = {"mass": drift[0], "l2": drift[1]}
    except UnstableRunError as exc:
        manifest["status"] = "unstable"
        manifest["blowup_t"] = exc.t
        code = EXIT_CONVERGENCE
    manifest["wall_time"] = time.perf_counter() - start
    with open(os.path.join(cfg.out_dir, "manifest.json"), "w") as fh:
        fh.write(_json(manifest))
    if code:
        print(f"error: unstable run, blow-up at t={manifest['blowup_t']}", file=sys.stderr)
    return code


def _read_slice(path):
    with open(path, "rb") as fh:
        head = fh.read(len(oracle.MAGIC))
    if head == oracle.MAGIC:
        with open(path, "rb") as fh:
            return oracle.read_slice_binary(fh)
    with open(path) as fh:
        return oracle.read_slice_csv(fh)


def compare_slices(slices, params, thresholds=None, window_limit=0.6, edge_width=None):
    """Reports for each slice and an overall verdict (a plain dict)."""
    th = dict(DEFAULT_THRESHOLDS, **(thresholds or {}))
    edge_width = wavefield.DEFAULT_EDGE_WIDTH if edge_width is None else edge_width
    c = params.c
    out = {"slices": [], "thresholds": th, "passed": True}
    vanishing = []
    for s in slices:
        L = max(abs(s.x[0]), abs(s.x[-1]))
        limit = window_limit * L
        env = oracle.compare_envelope(s, params, edge_width=edge_width, limit=limit)
        wav = oracle.compare_wavelength(s, params, edge_width=edge_width, limit=limit)
        entry = {"t": s.t, "envelope": env.as_dict(), "wavelength": wav.as_dict(), "checks": {}}
        checks = entry["checks"]
        edge_lo = -6.0 * c * c * s.t
        plateau = (max(edge_lo - 40.0, s.x[0], -limit), edge_lo - 10.0)
        if plateau[1] - plateau[0] > 2 * s.dx:
            mean = oracle.window_mean(s, plateau)
            entry["plateau_mean"] = mean
            checks["plateau_mean"] = abs(mean - c) <= th["plateau_mean"] * c
        van = (4.0 * c * c * s.t + 10.0, limit)
        if van[1] - van[0] > 2 * s.dx:
            vmax = oracle.window_max_abs(s, van)
            entry["vanishing_max"] = vmax
            vanishing.append((s.t, vmax))
            checks["vanishing_max"] = vmax <= th["vanishing_max"] * c
        if not env.empty:
            checks["envelope_median"] = env.median <= th["envelope_median"]
            checks["envelope_max"] = env.max <= th["envelope_max"]
        if not wav.insufficient:
            checks["wavelength_median"] = wav.median <= th["wavelength_median"]
        entry["passed"] = all(checks.values())
        out["passed"] = out["passed"] and entry["passed"]
        out["slices"].append(entry)
    vanishing.sort()
    if len(vanishing) >= 2:
        # strictly decreasing, or already identically zero
        decay = all(b[1] < a[1] or a[1] == b[1] == 0.0 for a, b in zip(vanishing, vanishing[1:]))
        out["vanishing_decay"] = decay
        out["passed"] = out["passed"] and decay
    return out


def cmd_compare(cfg):
    if cfg.manifest:
        with open(cfg.manifest) as fh:
            man = json.load(fh)
        mc = float(man.get("config", {}).get("c", cfg.c))
        if mc != cfg.c:
            raise DomainError(f"manifest c={mc} does not match --c {cfg.c}")
    slices = sorted((_read_slice(p) for p in cfg.slices), key=lambda s: s.t)
    th = {k: cfg.options[k] for k in DEFAULT_THRESHOLDS}
    report = compare_slices(slices, ShockParams(cfg.c), th, cfg.window_limit, cfg.edge_width)
    _emit(_json(report), cfg)
    for e in report["slices"]:
        env, wav = e["envelope"], e["wavelength"]
        print(f"t={e['t']:g}: envelope median={env['median']:.4g} max={env['max']:.4g} "
              f"(n={env['count']}), wavelength median={wav['median']:.4g} (n={wav['count']}), "
              f"{'pass' if e['passed'] else 'FAIL'}", file=sys.stderr)
        extra = [f"{k}={e[k]:.4g}" for k in ("plateau_mean", "vanishing_max") if k in e]
        if extra:
            print("    " + " ".join(extra), file=sys.stderr)
    if "vanishing_decay" in report:
        print("vanishing window decays: " + ("yes" if report["vanishing_decay"] else "NO"),
              file=sys.stderr)
    print("overall: " + ("pass" if report["passed"] else "FAIL"), file=sys.stderr)
    if not report["passed"]:
        raise ComparisonError("comparison thresholds not met")
    return EXIT_OK


COMMANDS = {
    "eval": cmd_eval,
    "profile": cmd_profile,
    "modulation-table": cmd_modulation_table,
    "sigtable": cmd_sigtable,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        return COMMANDS[cfg.command](cfg)
    except (DomainError, ContractError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ConvergenceError, ConsistencyError, UnstableRunError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except ComparisonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPARISON


if __name__ == "__main__":
    sys.exit(main())
