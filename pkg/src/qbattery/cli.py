"""Command-line front end.

``qbattery <command> [--config path] [--seed u64] [--out path] [--format csv|json] [flags]``

Commands: ``advantage``, ``thermalize``, ``syk``, ``wtable``, ``verify``.
Values come from built-in defaults, then the JSON config file, then
explicit flags. Exit codes: 0 success, 1 runtime failure, 2 usage or
parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import advantage, checks
from .errors import QBatteryError
from .linalg import HilbertSpec
from .lindblad import LindbladConfig, integrate
from .observables import battery_hamiltonian, hamiltonian_from_direction
from .states import (
    ame5_fixture,
    ghz_two_qudit,
    product_state,
    qutrit_final,
    qutrit_initial,
    random_density,
    random_pure,
    random_separable,
    w_state,
)
from .syk import DEFAULT_SEED, SykConfig, evolve

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SEED_MASK = 2**64 - 1


class UsageError(Exception):
    """Bad flags, config file or state description (exit code 2)."""


# --- state and Hamiltonian descriptions ------------------------------------

def _parse_kv(text: str, allowed: set) -> dict:
    out = {}
    for item in filter(None, text.split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"expected key=value, got {item!r}")
        if key not in allowed:
            raise UsageError(f"unknown field {key!r}; allowed: {', '.join(sorted(allowed))}")
        out[key] = value
    return out


def _parse_dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(x) for x in text.split("x"))
    except ValueError:
        raise UsageError(f"dims must look like 2x3x2, got {text!r}") from None
    return dims


def _int_field(fields: dict, key: str, default=None) -> int:
    if key not in fields:
        if default is None:
            raise UsageError(f"missing field {key!r}")
        return default
    try:
        return int(fields[key])
    except ValueError:
        raise UsageError(f"field {key!r} must be an integer, got {fields[key]!r}") from None


def parse_state(text: str, seed: int | None = None):
    """Build a state from a description such as ``w:5`` or ``random-sep:seed=7``.

    Forms: ``w:N``, ``ghz:D``, ``product:LEVELS[:DIMS]`` (e.g. ``product:010``),
    ``qutrit-initial``, ``qutrit-final``, ``ame5``,
    ``random-pure:dims=2x2,seed=S``, ``random-mixed:dims=2x2,rank=R,seed=S``,
    ``random-sep:dims=2x2,terms=T,seed=S``. A missing ``seed`` falls back
    to ``--seed``.
    """
    kind, _, rest = text.partition(":")
    if kind in ("w", "ghz"):
        try:
            n = int(rest)
        except ValueError:
            raise UsageError(f"{kind} state needs an integer size, got {rest!r}") from None
        return w_state(n) if kind == "w" else ghz_two_qudit(n)
    if kind == "product":
        levels, _, dims = rest.partition(":")
        if not levels.isdigit():
            raise UsageError(f"product state needs digit levels, got {levels!r}")
        return product_state([int(c) for c in levels], _parse_dims(dims) if dims else None)
    if kind in ("qutrit-initial", "qutrit-final", "ame5"):
        if rest:
            raise UsageError(f"{kind} takes no parameters")
        return {"qutrit-initial": qutrit_initial, "qutrit-final": qutrit_final,
                "ame5": ame5_fixture}[kind]()
    allowed = {"random-pure": {"dims", "seed"},
               "random-mixed": {"dims", "rank", "seed"},
               "random-sep": {"dims", "terms", "seed"}}
    if kind not in allowed:
        raise UsageError(f"unknown state kind {kind!r}")
    fields = _parse_kv(rest, allowed[kind])
    spec = HilbertSpec(_parse_dims(fields.get("dims", "2x2")))
    s = _int_field(fields, "seed", seed if seed is not None else 0)
    if kind == "random-pure":
        return random_pure(spec, s)
    if kind == "random-mixed":
        return random_density(spec, _int_field(fields, "rank", 2), s)
    return random_separable(spec, _int_field(fields, "terms", 3), s)


_SIGMA = {
    "sigma-x": np.array([[0, 1], [1, 0]], dtype=complex),
    "sigma-y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "sigma-z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def parse_hamiltonian(text: str, state):
    """``ladder`` (levels ``1..n`` per cell), ``sigma-x|y|z`` (qubits) or ``aligned``.

    ``aligned`` points the local Hamiltonian along the top eigenvector of
    the state's commutation matrix.
    """
    spec = state.spec
    if text == "ladder":
        terms = [np.diag(np.arange(1, n + 1, dtype=float)) for n in spec.cell_dims]
        return battery_hamiltonian(spec, terms)
    if text in _SIGMA:
        if any(n != 2 for n in spec.cell_dims):
            raise UsageError(f"{text} needs qubit cells, got dims {spec.cell_dims}")
        return battery_hamiltonian(spec, [_SIGMA[text]] * spec.n_cells)
    if text == "aligned":
        return hamiltonian_from_direction(spec, advantage.state_commutation_matrix(state).top_vector)
    raise UsageError(f"unknown Hamiltonian {text!r}; use ladder, sigma-x, sigma-y, sigma-z or aligned")


# --- config resolution ------------------------------------------------------

# command -> {key: (type, default)}
PARAMS = {
    "advantage": {"state": (str, None), "hamiltonian": (str, None)},
    "thermalize": {"D": (int, 5), "omega0": (float, 1.0), "g": (float, 1.0), "kT": (float, 0.1),
                   "t_final": (float, 30.0), "dt": (float, 1e-3), "record_every": (int, 100)},
    "syk": {"N": (int, 8), "jbar": (float, 1.0), "h": (float, 1.0),
            "tau_max": (float, 10.0), "n_tau": (int, 201)},
    "wtable": {"n_max": (int, 8)},
    "verify": {},
}
COMMON = {"seed": (int, None), "out": (str, None), "format": (str, "csv")}


def load_config(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise UsageError(f"{path}: top level must be a JSON object")
    return data


def resolve(command: str, config: dict, flags: dict) -> dict:
    """Merge defaults, config file and flags; check field names and types."""
    schema = {**PARAMS[command], **COMMON}
    out = {k: default for k, (_, default) in schema.items()}
    for key, value in config.items():
        if key == "command":
            if value != command:
                raise UsageError(f"config is for command {value!r}, not {command!r}")
            continue
        if key not in schema:
            raise UsageError(f"config field {key!r} is not valid for {command}")
        typ = schema[key][0]
        if typ is float and isinstance(value, int) and not isinstance(value, bool):
            value = float(value)
        if not isinstance(value, typ) or isinstance(value, bool):
            raise UsageError(f"config field {key!r} must be {typ.__name__}, got {value!r}")
        out[key] = value
    out.update({k: v for k, v in flags.items() if k in schema and v is not None})
    if out["format"] not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {out['format']!r}")
    if out["seed"] is not None:
        if out["seed"] < 0 or out["seed"] > SEED_MASK:
            raise UsageError(f"seed must be an unsigned 64-bit integer, got {out['seed']}")
    return out


# --- output -----------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _columns_json(header, rows, config) -> str:
    cols = {h: [float(r[i]) if isinstance(r[i], (float, np.floating)) else r[i] for r in rows]
            for i, h in enumerate(header)}
    return _json({"config": config, "columns": cols})


def _emit(text: str, out: str | None, sidecar: dict | None = None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    Path(out).write_text(text)
    if sidecar is not None:
        Path(out + ".config.json").write_text(_json(sidecar))


# --- commands ---------------------------------------------------------------

def run_advantage(opts: dict) -> int:
    if opts["state"] is None:
        raise UsageError("advantage needs --state")
    try:
        state = parse_state(opts["state"], opts["seed"])
        H = parse_hamiltonian(opts["hamiltonian"], state) if opts["hamiltonian"] else None
    except QBatteryError as exc:
        raise UsageError(f"state {opts['state']!r}: {exc}") from None
    result = {"state": opts["state"], "n_cells": state.spec.n_cells,
              "gamma_c": advantage.gamma_c(state)}
    if H is not None:
        V = advantage.optimal_driving(state, H)
        r = advantage.power_bound(state, H, V)
        result.update({"hamiltonian": opts["hamiltonian"], "power": r.power, "bound": r.bound,
                       "ratio": r.ratio, "kappa": r.kappa, "cos_theta_V": r.cos_theta_V,
                       "cos_theta_H": r.cos_theta_H, "driving_variance": r.driving_variance,
                       "gap_norm": r.gap_norm})
    if opts["format"] == "json":
        text = _json(result)
    else:
        text = _csv(["key", "value"], result.items())
    _emit(text, opts["out"])
    return EXIT_OK


def run_thermalize(opts: dict) -> int:
    try:
        cfg = LindbladConfig(**{k: opts[k] for k in PARAMS["thermalize"]})
    except QBatteryError as exc:
        raise UsageError(str(exc)) from None
    trace = integrate(cfg)
    sidecar = {"command": "thermalize", **cfg.to_dict(), "seed": opts["seed"]}
    header = ["t", "gamma_c", "negativity", "trace_error"]
    if opts["format"] == "json":
        rows = list(zip(trace.times, trace.gamma_c, trace.negativity, trace.trace_error))
        text = _columns_json(header, rows, sidecar)
    else:
        text = trace.to_csv()
    _emit(text, opts["out"], sidecar)
    return EXIT_OK


def run_syk(opts: dict) -> int:
    seed = opts["seed"] if opts["seed"] is not None else DEFAULT_SEED
    try:
        cfg = SykConfig.with_grid(opts["tau_max"], opts["n_tau"], N=opts["N"], jbar=opts["jbar"],
                                  h=opts["h"], seed=seed)
    except QBatteryError as exc:
        raise UsageError(str(exc)) from None
    trace = evolve(cfg)
    sidecar = {"command": "syk", "N": cfg.N, "jbar": cfg.jbar, "h": cfg.h, "seed": cfg.seed,
               "tau_max": opts["tau_max"], "n_tau": opts["n_tau"]}
    header = ["tau", "p_tilde", "sqrt_gamma_c", "bound_ratio", "energy"]
    if opts["format"] == "json":
        rows = list(zip(trace.tau, trace.p_tilde, trace.sqrt_gamma_c, trace.bound_ratio,
                        trace.energy))
        text = _columns_json(header, rows, sidecar)
    else:
        text = trace.to_csv()
    _emit(text, opts["out"], sidecar)
    return EXIT_OK


def run_wtable(opts: dict) -> int:
    n_max = opts["n_max"]
    if not 2 <= n_max <= 12:
        raise UsageError(f"n_max must be in [2, 12], got {n_max}")
    rows = checks.w_table(n_max)
    header = ["N", "gamma_c", "formula", "abs_diff"]
    text = _columns_json(header, rows, {"n_max": n_max}) if opts["format"] == "json" else _csv(header, rows)
    _emit(text, opts["out"])
    return EXIT_OK


def run_verify(opts: dict) -> int:
    results = checks.run_all()
    report = "\n".join(r.line() for r in results) + "\n"
    ok = all(r.passed for r in results)
    report += ("all suites passed\n" if ok else "some suites FAILED\n")
    _emit(report, opts["out"])
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "advantage": run_advantage,
    "thermalize": run_thermalize,
    "syk": run_syk,
    "wtable": run_wtable,
    "verify": run_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with one top-level object")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"))

    parser = argparse.ArgumentParser(prog="qbattery", description="Quantum battery charging advantage.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("advantage", parents=[common], help="Gamma_C of a state, optional power report")
    p.add_argument("--state", help="e.g. w:5, ghz:4, ame5, random-sep:seed=7")
    p.add_argument("--hamiltonian", help="ladder, sigma-x, sigma-y, sigma-z or aligned")

    p = sub.add_parser("thermalize", parents=[common], help="two-qudit Lindblad thermalization")
    p.add_argument("--D", type=int)
    p.add_argument("--omega0", type=float)
    p.add_argument("--g", type=float)
    p.add_argument("--kT", type=float)
    p.add_argument("--t-final", dest="t_final", type=float)
    p.add_argument("--dt", type=float)
    p.add_argument("--record-every", dest="record_every", type=int)

    p = sub.add_parser("syk", parents=[common], help="SYK charging of a spin battery")
    p.add_argument("--N", type=int)
    p.add_argument("--jbar", type=float)
    p.add_argument("--h", type=float)
    p.add_argument("--tau-max", dest="tau_max", type=float)
    p.add_argument("--n-tau", dest="n_tau", type=int)

    p = sub.add_parser("wtable", parents=[common], help="W-state advantage table")
    p.add_argument("--n-max", dest="n_max", type=int)

    sub.add_parser("verify", parents=[common], help="run the property suites")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    flags = vars(args)
    command = flags.pop("command")
    config_path = flags.pop("config")
    try:
        config = load_config(config_path) if config_path else {}
        opts = resolve(command, config, flags)
        return COMMANDS[command](opts)
    except UsageError as exc:
        print(f"qbattery {command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QBatteryError as exc:
        print(f"qbattery {command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
