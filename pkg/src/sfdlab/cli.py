"""Command-line front end.

Subcommands: ml, gle-msd, models, calibrate, regimes, simulate, fpe.
Every option can also come from a config file of ``key = value`` lines
(``#`` comments allowed; unknown keys are rejected); explicit flags win over
the file.  Every output embeds the fully resolved configuration, so a run
can be reproduced from its own header.  Numeric output uses 12 significant
digits with a locale-independent decimal point; identical configurations
(including the seed) give byte-identical files.

Exit codes: 0 success, 2 parameter/validation error, 3 numerical-accuracy
error.  Partially written output files are removed on failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import fokker_planck, gle, msd_models, simulate
from .errors import AccuracyError, ParameterError, SfdLabError
from .mittag_leffler import ml_eval

__all__ = ["main", "run"]

_REQUIRED = object()

# name -> (type, default, help); None defaults mean "optional"
_COMMON_GRID = {
    "t-min": (float, 1e-4, "first grid time"),
    "t-max": (float, 1e6, "last grid time"),
    "points-per-decade": (int, 20, "log-uniform grid density"),
}

_OPTIONS = {
    "ml": {
        "alpha": (float, _REQUIRED, "Mittag-Leffler order alpha"),
        "beta": (float, _REQUIRED, "Mittag-Leffler order beta"),
        "z": (float, None, "single argument (overrides the grid)"),
        "z-min": (float, None, "grid start"),
        "z-max": (float, None, "grid end"),
        "points": (int, 201, "grid size"),
    },
    "gle-msd": {
        "alpha": (float, 0.5, "fractional order of the velocity derivative"),
        "gamma": (float, 0.5, "memory-kernel exponent"),
        "lambda1": (float, 0.0, "delta-kernel weight"),
        "lambda2": (float, 1.0, "power-kernel weight"),
        "kappa": (float, 1.0, "external-force decay exponent"),
        "force-amp": (float, None, "force amplitude (default sqrt(kT))"),
        "v0": (float, None, "initial velocity (default sqrt(kT))"),
        "kT": (float, 1.0, "thermal energy"),
        "x0": (float, 0.0, "initial position"),
        "overdamped": (bool, False, "drop the fractional acceleration"),
        "case": (str, "", "law-catalog tag (default inferred from parameters)"),
        "t-min": (float, 1e-3, "first grid time"),
        "t-max": (float, 1e3, "last grid time"),
        "points-per-decade": (int, 10, "log-uniform grid density"),
    },
    "models": {
        "model": (str, "all", "brandani | lin | ml-family | three-regime | all"),
        "figure": (int, None, "emit a figure-reproduction curve (1, 2 or 3)"),
        "l": (float, 1.0, "jump length"),
        "theta": (float, 0.5, "fractional occupancy"),
        "tau": (float, 1.0, "mean jump time"),
        "kT": (float, 1.0, "thermal energy"),
        "beta": (float, 2.0, "Mittag-Leffler family order"),
        "lambda2": (float, 1.0, "three-regime kernel weight"),
        "paper-literal": (bool, False, "use the literal family calibration"),
        **_COMMON_GRID,
    },
    "calibrate": {
        "l": (float, _REQUIRED, "jump length"),
        "theta": (float, _REQUIRED, "fractional occupancy"),
        "tau": (float, _REQUIRED, "mean jump time"),
        "kT": (float, 1.0, "thermal energy"),
        "beta": (float, 2.0, "Mittag-Leffler family order"),
    },
    "regimes": {
        "input": (str, _REQUIRED, "MSD curve CSV (column 1 t, column 2 value)"),
        "targets": (str, "2,1,0.5", "comma-separated target exponents"),
        "tol": (float, 0.15, "exponent tolerance"),
    },
    "simulate": {
        "alpha": (float, 1.0, "fractional order"),
        "gamma": (float, 0.5, "memory-kernel exponent"),
        "lambda1": (float, 1.0, "delta-kernel weight"),
        "lambda2": (float, 1.0, "power-kernel weight"),
        "kT": (float, 1.0, "thermal energy"),
        "x0": (float, 0.0, "initial position"),
        "v0": (float, None, "initial velocity (default sqrt(kT))"),
        "force-amp": (float, 0.0, "force amplitude"),
        "kappa": (float, 1.0, "force decay exponent"),
        "overdamped": (bool, True, "overdamped dynamics"),
        "dt": (float, 1e-2, "time step"),
        "n-steps": (int, 1000, "steps per path"),
        "n-paths": (int, 10000, "ensemble size"),
        "seed": (int, 20090217, "master RNG seed"),
        "analytic-points": (int, 64, "log-spaced analytic reference points"),
    },
    "fpe": {
        "d0": (float, 1.0, "short-time diffusion coefficient"),
        "f": (float, 1.0, "single-file mobility"),
        "half-width": (float, 80.0, "spatial half width"),
        "nx": (int, 6401, "grid points"),
        "sigma0": (float, 0.6, "initial Gaussian width"),
        "variant": (str, "matched", "matched | paper"),
        "snapshots": (str, "", "comma-separated times for density snapshots"),
        "t-min": (float, 1e-2, "first output time"),
        "t-max": (float, 2500.0, "last output time"),
        "points-per-decade": (int, 8, "log-uniform output density"),
    },
}


def _parse_config_file(path: str) -> dict[str, str]:
    out = {}
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{lineno}: expected key = value")
            key, val = (part.strip() for part in line.split("=", 1))
            out[key] = val
    return out


def _coerce(name: str, typ, raw):
    if typ is bool:
        if isinstance(raw, bool):
            return raw
        if str(raw).lower() in ("1", "true", "yes", "on"):
            return True
        if str(raw).lower() in ("0", "false", "no", "off"):
            return False
        raise ParameterError(f"{name}: expected a boolean, got {raw!r}")
    try:
        return typ(raw)
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"{name}: {exc}") from exc


def _resolve(command: str, ns: argparse.Namespace) -> dict:
    """Merge CLI flags over config-file values over declared defaults."""
    table = _OPTIONS[command]
    config = _parse_config_file(ns.config) if ns.config else {}
    unknown = set(config) - set(table) - {"format", "command"}
    if unknown:
        raise ParameterError(
            f"unknown config keys for {command}: {', '.join(sorted(unknown))}"
        )
    if config.get("command", command) != command:
        raise ParameterError(
            f"config file is for {config['command']!r}, not {command!r}"
        )
    resolved = {}
    for name, (typ, default, _help) in table.items():
        attr = name.replace("-", "_")
        cli_val = getattr(ns, attr)
        if cli_val is not None:
            resolved[name] = cli_val
        elif name in config:
            resolved[name] = _coerce(name, typ, config[name])
        elif default is _REQUIRED:
            raise ParameterError(f"missing required option --{name}")
        else:
            resolved[name] = default
    resolved["command"] = command
    if ns.format is not None:
        resolved["format"] = ns.format
    elif "format" in config:
        resolved["format"] = _coerce("format", str, config["format"])
    else:
        resolved["format"] = "json" if command in ("calibrate", "regimes") else "csv"
    if resolved["format"] not in ("csv", "json"):
        raise ParameterError(f"format must be csv or json, got {resolved['format']!r}")
    return resolved


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.12g}"
    return str(x)


def _config_header(resolved: dict) -> list[str]:
    lines = [f"# sfdlab {resolved['command']}"]
    for key in sorted(resolved):
        lines.append(f"# {key} = {_fmt(resolved[key])}")
    return lines


def _emit_csv(resolved: dict, columns: dict[str, np.ndarray], out: str | None,
              written: list[str]) -> None:
    lines = _config_header(resolved)
    names = list(columns)
    lines.append(",".join(names))
    arrays = [np.asarray(columns[n]) for n in names]
    for i in range(arrays[0].size):
        lines.append(",".join(_fmt(a[i]) for a in arrays))
    _write_text(out, "\n".join(lines) + "\n", written)


def _emit_json(resolved: dict, payload: dict, out: str | None,
               written: list[str]) -> None:
    doc = {k: resolved[k] for k in sorted(resolved)}
    doc.update(payload)

    def default(obj):
        if isinstance(obj, (np.floating, np.integer)):
            return obj.item()
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        raise TypeError(f"not JSON serializable: {type(obj)}")

    _write_text(out, json.dumps(doc, indent=1, sort_keys=True, default=default)
                + "\n", written)


def _write_text(out: str | None, text: str, written: list[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    tmp = out + ".part"
    with open(tmp, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, out)
    written.append(out)


def _time_grid(resolved: dict) -> np.ndarray:
    return msd_models.log_time_grid(
        resolved["t-min"], resolved["t-max"], resolved["points-per-decade"]
    )


# ---------------------------------------------------------------------------
# subcommands


def _cmd_ml(resolved: dict, out: str | None, written: list[str]) -> None:
    alpha, beta = resolved["alpha"], resolved["beta"]
    if resolved["z"] is not None:
        value = ml_eval(alpha, beta, resolved["z"])
        if resolved["format"] == "json":
            _emit_json(resolved, {"value": value}, out, written)
        else:
            _write_text(out, _fmt(value) + "\n", written)
        return
    if resolved["z-min"] is None or resolved["z-max"] is None:
        raise ParameterError("ml needs either --z or both --z-min and --z-max")
    zs = np.linspace(resolved["z-min"], resolved["z-max"], resolved["points"])
    vals = np.array([ml_eval(alpha, beta, float(z)) for z in zs])
    if resolved["format"] == "json":
        _emit_json(resolved, {"z": zs, "value": vals}, out, written)
    else:
        _emit_csv(resolved, {"z": zs, "value": vals}, out, written)


def _gle_params(resolved: dict) -> gle.GleParams:
    return gle.GleParams(
        alpha=resolved["alpha"],
        gamma=resolved["gamma"],
        lambda1=resolved["lambda1"],
        lambda2=resolved["lambda2"],
        kappa=resolved.get("kappa", 1.0),
        force_amp=resolved.get("force-amp"),
        kT=resolved["kT"],
        x0=resolved.get("x0", 0.0),
        v0=resolved.get("v0"),
    )


def _cmd_gle_msd(resolved: dict, out: str | None, written: list[str]) -> None:
    p = _gle_params(resolved)
    overdamped = resolved["overdamped"]
    case = resolved["case"]
    if not case:
        if overdamped:
            case = "case3a"
        elif p.lambda1 == 0.0 and p.lambda2 > 0.0:
            case = "case3b"
        elif p.lambda2 > 0.0:
            case = "case3"
        else:
            case = "case1"
    laws = gle.asymptotic_laws(p, case)
    tt = _time_grid(resolved)
    mean = np.empty_like(tt)
    var = np.empty_like(tt)
    for i, t in enumerate(tt):
        mean[i] = gle.mean_displacement(p, float(t), overdamped=overdamped) - p.x0
        var[i] = gle.variance(p, float(t), overdamped=overdamped)
    r2 = mean * mean + var
    resolved["case"] = case
    if resolved["format"] == "json":
        _emit_json(
            resolved,
            {
                "t": tt,
                "msd": r2,
                "mean_minus_x0": mean,
                "variance": var,
                "laws": [vars(law) for law in laws],
            },
            resolved["out"],
            written,
        )
        return
    header = _config_header(resolved)
    for law in laws:
        header.append(
            f"# law: regime={law.regime} exponent={_fmt(law.exponent)} "
            f"prefactor={_fmt(law.prefactor)} condition={law.condition}"
        )
    body = ["t,msd,mean_minus_x0,variance"]
    for i in range(tt.size):
        body.append(
            ",".join(_fmt(v) for v in (tt[i], r2[i], mean[i], var[i]))
        )
    _write_text(out, "\n".join(header + body) + "\n", written)


def _cmd_models(resolved: dict, out: str | None, written: list[str]) -> None:
    tt = _time_grid(resolved)
    fig = resolved["figure"]
    if fig is not None:
        if fig == 1:
            vals = np.array(
                [2.0 * t * ml_eval(0.5, 2.0, -math.sqrt(t)) for t in tt]
            )
            _emit_csv(resolved, {"t": tt, "msd": vals}, out, written)
            return
        if fig in (2, 3):
            vals = np.array(
                [2.0 * t * t * ml_eval(1.5, 3.0, -t ** 1.5) for t in tt]
            )
            cols = {"t": tt, "msd": vals}
            if fig == 3:
                curve = msd_models.MsdCurve(tt, vals)
                t_in, slope = msd_models.local_exponent(curve)
                expo = np.full(tt.size, np.nan)
                expo[1:-1] = slope
                cols["exponent"] = expo
            _emit_csv(resolved, cols, out, written)
            return
        raise ParameterError(f"figure must be 1, 2 or 3, got {fig}")
    ch = msd_models.PhysicalChannel(resolved["l"], resolved["theta"], resolved["tau"])
    kT, beta = resolved["kT"], resolved["beta"]
    names = (
        ["brandani", "lin", "ml-family", "three-regime"]
        if resolved["model"] == "all"
        else [resolved["model"]]
    )
    cols: dict[str, np.ndarray] = {"t": tt}
    for name in names:
        if name == "brandani":
            cols["brandani"] = np.array([msd_models.brandani_msd(ch, t) for t in tt])
        elif name == "lin":
            cols["lin"] = np.array(
                [msd_models.lin_msd(ch.d0, ch.sfd_mobility, t) for t in tt]
            )
        elif name == "ml-family":
            cols["ml_family"] = np.array(
                [
                    msd_models.ml_family_msd(
                        ch, beta, kT, t, paper_literal=resolved["paper-literal"]
                    )
                    for t in tt
                ]
            )
        elif name == "three-regime":
            cols["three_regime"] = np.array(
                [msd_models.three_regime_msd(kT, resolved["lambda2"], t) for t in tt]
            )
        else:
            raise ParameterError(f"unknown model {name!r}")
    if resolved["format"] == "json":
        _emit_json(resolved, {k: v for k, v in cols.items()}, out, written)
    else:
        _emit_csv(resolved, cols, out, written)


def _cmd_calibrate(resolved: dict, out: str | None, written: list[str]) -> None:
    ch = msd_models.PhysicalChannel(resolved["l"], resolved["theta"], resolved["tau"])
    cal = msd_models.calibrate_family(ch, resolved["beta"], resolved["kT"])
    payload = {
        "D0": ch.d0,
        "F": ch.sfd_mobility,
        "zeta": cal.zeta_prime,
        "lambda": cal.lambda_prime,
        "lambda_paper_literal": cal.lambda_prime_paper,
    }
    _emit_json(resolved, payload, out, written)


def _read_curve_csv(path: str) -> msd_models.MsdCurve:
    tt, vals = [], []
    with open(path, "r", encoding="ascii") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            try:
                t = float(parts[0])
            except ValueError:
                continue  # header row
            tt.append(t)
            vals.append(float(parts[1]))
    if len(tt) < 3:
        raise ParameterError(f"{path}: no usable curve data")
    return msd_models.MsdCurve(np.array(tt), np.array(vals))


def _cmd_regimes(resolved: dict, out: str | None, written: list[str]) -> None:
    curve = _read_curve_csv(resolved["input"])
    targets = [float(s) for s in str(resolved["targets"]).split(",") if s.strip()]
    t_in, slope = msd_models.local_exponent(curve)
    intervals = msd_models.regime_boundaries(curve, targets, resolved["tol"])
    payload = {
        "t": t_in,
        "exponent": slope,
        "intervals": [
            {"target": tg, "t_enter": a, "t_exit": b} for tg, a, b in intervals
        ],
    }
    if resolved["format"] == "csv":
        _emit_csv(resolved, {"t": t_in, "exponent": slope}, out, written)
    else:
        _emit_json(resolved, payload, out, written)


def _cmd_simulate(resolved: dict, out: str | None, written: list[str]) -> None:
    p = _gle_params(resolved)
    overdamped = resolved["overdamped"]
    ens = simulate.simulate_paths(
        p,
        resolved["dt"],
        resolved["n-steps"],
        resolved["n-paths"],
        resolved["seed"],
        overdamped=overdamped,
    )
    curve = simulate.ensemble_msd(ens)
    analytic = np.full(curve.times.size, np.nan)
    n_ref = min(resolved["analytic-points"], curve.times.size)
    ref_idx = np.unique(
        np.round(np.geomspace(1, curve.times.size, n_ref)).astype(int) - 1
    )
    for i in ref_idx:
        analytic[i] = gle.msd(p, float(curve.times[i]), overdamped=overdamped)
    cols = {
        "t": curve.times,
        "msd": curve.values,
        "stderr": curve.stderr,
        "analytic": analytic,
    }
    if resolved["format"] == "json":
        _emit_json(resolved, cols, out, written)
    else:
        _emit_csv(resolved, cols, out, written)


def _cmd_fpe(resolved: dict, out: str | None, written: list[str]) -> None:
    tt = _time_grid(resolved)
    sol = fokker_planck.solve_fpe(
        resolved["d0"],
        resolved["f"],
        resolved["half-width"],
        resolved["nx"],
        tt,
        variant=resolved["variant"],
        sigma0=resolved["sigma0"],
    )
    curve = fokker_planck.solution_variance(sol)
    cols = {"t": tt, "variance": curve.values, "mass": sol.mass}
    if resolved["format"] == "json":
        _emit_json(resolved, cols, out, written)
    else:
        _emit_csv(resolved, cols, out, written)
    snaps = [float(s) for s in str(resolved["snapshots"]).split(",") if s.strip()]
    if snaps:
        if out is None:
            raise ParameterError("density snapshots need --out to derive file names")
        stem, ext = os.path.splitext(out)
        for j, t_snap in enumerate(snaps):
            k = int(np.argmin(np.abs(tt - t_snap)))
            _emit_csv(
                dict(resolved, **{"snapshot-time": float(tt[k])}),
                {"x": sol.x_grid, "W": sol.density[k]},
                f"{stem}_density_{j}{ext or '.csv'}",
                written,
            )


_HANDLERS = {
    "ml": _cmd_ml,
    "gle-msd": _cmd_gle_msd,
    "models": _cmd_models,
    "calibrate": _cmd_calibrate,
    "regimes": _cmd_regimes,
    "simulate": _cmd_simulate,
    "fpe": _cmd_fpe,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sfdlab",
        description="Single-file diffusion models from the fractional Langevin equation",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for command, table in _OPTIONS.items():
        sp = sub.add_parser(command)
        for name, (typ, default, help_text) in table.items():
            flag = f"--{name}"
            if typ is bool:
                sp.add_argument(flag, dest=name.replace("-", "_"),
                                action=argparse.BooleanOptionalAction,
                                default=None, help=help_text)
            else:
                sp.add_argument(flag, dest=name.replace("-", "_"), type=typ,
                                default=None, help=help_text)
        sp.add_argument("--out", type=str, default=None,
                        help="output path (default: stdout)")
        sp.add_argument("--format", type=str, choices=("csv", "json"), default=None)
        sp.add_argument("--config", type=str, default=None,
                        help="key = value config file")
    return parser


def run(argv) -> int:
    """Parse arguments, dispatch, and map failures to exit codes."""
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    written: list[str] = []
    try:
        resolved = _resolve(ns.command, ns)
        _HANDLERS[ns.command](resolved, ns.out, written)
    except AccuracyError as exc:
        for path in written:
            _try_unlink(path)
        print(f"sfdlab: accuracy error: {exc}", file=sys.stderr)
        return 3
    except (SfdLabError, OSError, ValueError) as exc:
        for path in written:
            _try_unlink(path)
        print(f"sfdlab: error: {exc}", file=sys.stderr)
        return 2
    return 0


def _try_unlink(path: str) -> None:
    try:
        os.unlink(path)
    except OSError:
        pass


def main() -> int:
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
