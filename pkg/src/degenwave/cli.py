"""Batch command-line front end: JSON config in, CSV/JSON reports out.

Each experiment is a subcommand.  Options resolve in the order defaults <
JSON config file (--config) < environment (DEGENWAVE_<KEY>) < command-line
flags; unknown config keys are rejected.  Exit codes: 0 success, 1
numerical failure, 2 configuration error.  Errors are emitted as a JSON
object on stderr so harnesses can parse them.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import hardy, observability, reports
from .carleman import (
    SmoothModalSolution,
    bessel_mode,
    carleman_component_integrals,
    carleman_constant_scan,
    conjugation_residual,
)
from .errors import ConfigError, DegenWaveError
from .params import DomainSpec, carleman_params_to_json, validate_carleman_params
from .radial import build_graded_mesh, solve_radial_basis
from .waves import (
    boundary_trace_norm,
    energy_series,
    interior_observation_norm,
    random_state,
)

ENV_PREFIX = "DEGENWAVE_"

# subcommand schemas: key -> (type, default); None defaults are filled later
_SCHEMAS = {
    "spectrum": {
        "alpha": (float, 0.5),
        "n": (int, 2048),
        "grading": (float, 2.0),
        "kmax": (int, 8),
    },
    "simulate": {
        "alpha": (float, 0.5),
        "delta0": (float, 0.01),
        "n": (int, 1024),
        "grading": (float, 2.0),
        "n_max": (int, 8),
        "k_max": (int, 8),
        "t_horizon": (float, 0.0),
        "samples": (int, 1000),
    },
    "hardy": {
        "critical": (bool, False),
        "alpha": (float, 0.5),
        "delta": (float, 0.01),
        "bc": (str, "mixed"),
        "method": (str, "direct"),
        "n": (int, 4096),
        "grading": (float, 3.0),
        "scan": (str, ""),
    },
    "carleman-check": {
        "alpha": (float, 0.5),
        "delta0": (float, 0.03),
        "beta": (float, 0.0149),
        "t_horizon": (float, 40.0),
        "lam": (float, 0.5),
        "s": (float, 2.0),
        "n_theta": (int, 864),
        "n_r": (int, 24),
        "n_t": (int, 96),
        "r_min": (float, 0.1),
        "mode_n": (int, 1),
        "mode_k": (int, 1),
        "s_scan": (str, ""),
    },
    "observability": {
        "mode": (str, "obstruction"),
        "alpha": (float, 0.5),
        "delta0": (float, 0.01),
        "t_horizon": (float, 0.0),
        "n_values": (str, "8,16,32,64"),
        "size": (int, 100),
        "n_max": (int, 16),
        "k_max": (int, 16),
    },
    "validate-params": {
        "alpha": (float, 0.5),
        "delta0": (float, 0.01),
        "beta": (float, 0.004),
        "t_horizon": (float, 50.0),
        "lam": (float, 1.0),
        "s": (float, 2.0),
    },
}

_COMMON = {"out": (str, "runs"), "seed": (int, 20250810)}


def _coerce(key: str, kind, raw):
    try:
        if kind is bool and isinstance(raw, str):
            if raw.lower() in ("1", "true", "yes"):
                return True
            if raw.lower() in ("0", "false", "no"):
                return False
            raise ValueError(raw)
        return kind(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid value for key '{key}': {raw!r}") from exc


def _resolve_config(command: str, args: argparse.Namespace) -> dict:
    schema = dict(_COMMON)
    schema.update(_SCHEMAS[command])
    config = {k: default for k, (_, default) in schema.items()}

    if args.config:
        try:
            doc = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError("config document must be a JSON object")
        for key, raw in doc.items():
            if key not in schema:
                raise ConfigError(f"unknown config key: '{key}'")
            config[key] = _coerce(key, schema[key][0], raw)

    for key, (kind, _) in schema.items():
        env = os.environ.get(ENV_PREFIX + key.upper())
        if env is not None:
            config[key] = _coerce(key, kind, env)

    for key, (kind, _) in schema.items():
        val = getattr(args, key.replace("-", "_"), None)
        if val is not None:
            config[key] = _coerce(key, kind, val)
    return config


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


# ---------------------------------------------------------------------------
# Subcommand bodies
# ---------------------------------------------------------------------------


def _run_spectrum(cfg: dict, out: Path) -> None:
    basis = solve_radial_basis(cfg["alpha"], N=cfg["n"], g=cfg["grading"], k_max=cfg["kmax"])
    rows = [
        (
            k + 1,
            float(basis.rho[k]),
            float(basis.flux[k]),
            float(basis.weighted_energy[k]),
            basis.mesh.n_cells,
            basis.mesh.grading,
            basis.alpha,
        )
        for k in range(basis.k_max)
    ]
    reports.write_csv(
        out / "spectrum.csv",
        ["k", "rho", "flux_at_1", "weighted_energy", "mesh_N", "grading", "alpha"],
        rows,
        cfg,
    )


def _run_simulate(cfg: dict, out: Path) -> None:
    T = cfg["t_horizon"] or observability.default_horizon(cfg["delta0"])
    basis = solve_radial_basis(
        cfg["alpha"], N=cfg["n"], g=cfg["grading"], k_max=cfg["k_max"]
    )
    state = random_state(basis, cfg["n_max"], cfg["k_max"], cfg["seed"])
    times = np.linspace(0.0, T, cfg["samples"] + 1)
    series = energy_series(state, times)
    reports.write_csv(
        out / "energy.csv",
        ["t", "E", "kinetic", "potential"],
        zip(
            (float(x) for x in series.times),
            (float(x) for x in series.total),
            (float(x) for x in series.kinetic),
            (float(x) for x in series.potential),
        ),
        cfg,
    )
    trace = boundary_trace_norm(state, T, cfg["delta0"])
    interior = interior_observation_norm(state, cfg["delta0"], T)
    trace = dataclasses.replace(trace, interior_norm_sq=interior)
    reports.write_json(out / "trace.json", trace, cfg)


def _run_hardy(cfg: dict, out: Path) -> None:
    if cfg["critical"]:
        deltas = _float_list(cfg["scan"]) or [cfg["delta"]]
        rows = []
        last = None
        for d in deltas:
            rep = hardy.critical_truncated_constant(
                d, bc=cfg["bc"], method=cfg["method"], N=cfg["n"]
            )
            rows.append(
                (
                    d,
                    rep.numerical_best_constant,
                    rep.reference_constant,
                    abs(rep.numerical_best_constant - rep.reference_constant)
                    / rep.reference_constant,
                    rep.bc,
                    rep.mesh_n,
                )
            )
            last = rep
        reports.write_csv(
            out / "hardy_scan.csv",
            ["delta", "C_numerical", "C_exact", "relative_error", "bc", "N"],
            rows,
            cfg,
        )
        payload = {"report": last}
        if len(deltas) >= 4:
            fit = hardy.blowup_rate_fit(deltas, bc=cfg["bc"], method=cfg["method"], N=cfg["n"])
            payload["blowup_fit"] = fit
        reports.write_json(out / "hardy.json", payload, cfg)
    else:
        mesh = build_graded_mesh(cfg["n"], cfg["grading"])
        rep = hardy.best_subcritical_constant(cfg["alpha"], mesh=mesh)
        reports.write_json(out / "hardy.json", rep, cfg)


def _run_carleman_check(cfg: dict, out: Path) -> None:
    domain = DomainSpec(cfg["delta0"])
    params = validate_carleman_params(
        cfg["alpha"], domain, beta=cfg["beta"], T=cfg["t_horizon"],
        lam=cfg["lam"], s=cfg["s"],
    )
    solution = SmoothModalSolution(
        cfg["alpha"], (bessel_mode(cfg["alpha"], cfg["mode_n"], cfg["mode_k"], a=1.0, b=0.3),)
    )
    residual = conjugation_residual(
        solution, params,
        shape=(cfg["n_theta"], cfg["n_r"], cfg["n_t"]),
        r_min=cfg["r_min"],
    )
    integrals = carleman_component_integrals(solution, params)
    reports.write_json(
        out / "carleman.json", {"residual": residual, "integrals": integrals}, cfg
    )
    s_values = _float_list(cfg["s_scan"])
    if s_values:
        scan = carleman_constant_scan(solution, params, s_values)
        reports.write_csv(
            out / "carleman_scan.csv",
            ["s", "lambda", "chat", "lhs_gradient", "lhs_zero_order",
             "rhs_trace", "rhs_interior", "rhs_commutator"],
            [
                (c.s, c.lam, c.chat, c.lhs_gradient, c.lhs_zero_order,
                 c.rhs_trace, c.rhs_interior, c.rhs_commutator)
                for c in scan
            ],
            cfg,
        )


def _run_observability(cfg: dict, out: Path) -> None:
    domain = DomainSpec(cfg["delta0"])
    T = cfg["t_horizon"] or observability.default_horizon(cfg["delta0"])
    basis = solve_radial_basis(cfg["alpha"], N=2048, g=2.0, k_max=2 * cfg["k_max"])
    mode = cfg["mode"]
    if mode == "obstruction":
        scan = observability.high_mode_obstruction_scan(
            _int_list(cfg["n_values"]), T, domain, alpha=cfg["alpha"], basis=basis
        )
        reports.write_csv(
            out / "obstruction.csv",
            ["n", "pure_ratio", "remedied_ratio"],
            zip(scan.n_values, scan.pure_ratios, scan.remedied_ratios),
            cfg,
        )
        reports.write_json(out / "obstruction.json", scan, cfg)
    elif mode == "ensemble":
        base, doubled, increase = observability.hidden_trace_stability(
            basis, cfg["seed"], cfg["size"], (cfg["n_max"], cfg["k_max"]), T
        )
        reports.write_csv(
            out / "ensemble.csv",
            ["member", "ratio_base", "ratio_doubled"],
            [(i, base.ratios[i], doubled.ratios[i]) for i in range(cfg["size"])],
            cfg,
        )
        reports.write_json(
            out / "ensemble.json",
            {"base": base, "doubled": doubled, "max_increase": increase},
            cfg,
        )
    elif mode == "ratio":
        state = random_state(basis, cfg["n_max"], cfg["k_max"], cfg["seed"])
        record = observability.observability_ratio(state, domain, T)
        reports.write_json(out / "ratio.json", record, cfg)
    else:
        raise ConfigError(f"unknown observability mode: '{mode}'")


def _run_validate_params(cfg: dict, out: Path) -> None:
    params = validate_carleman_params(
        cfg["alpha"], DomainSpec(cfg["delta0"]), beta=cfg["beta"],
        T=cfg["t_horizon"], lam=cfg["lam"], s=cfg["s"],
    )
    doc = json.loads(carleman_params_to_json(params))
    reports.write_json(out / "params.json", doc, cfg)


_RUNNERS = {
    "spectrum": _run_spectrum,
    "simulate": _run_simulate,
    "hardy": _run_hardy,
    "carleman-check": _run_carleman_check,
    "observability": _run_observability,
    "validate-params": _run_validate_params,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="degenwave",
        description="Experiments for the boundary-degenerate wave laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, schema in _SCHEMAS.items():
        p = sub.add_parser(name)
        p.add_argument("--config", type=str, default=None, help="JSON config file")
        p.add_argument("--out", type=str, default=None, help="output directory")
        p.add_argument("--seed", type=int, default=None)
        for key, (kind, _) in schema.items():
            flag = "--" + key.replace("_", "-")
            if kind is bool:
                p.add_argument(flag, action="store_const", const=True, default=None)
            else:
                p.add_argument(flag, type=str, default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _resolve_config(args.command, args)
        out = Path(cfg["out"])
        _RUNNERS[args.command](cfg, out)
        return 0
    except ConfigError as exc:
        json.dump({"error": str(exc), "kind": "config"}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    except DegenWaveError as exc:
        json.dump(
            {"error": str(exc), "kind": type(exc).__name__}, sys.stderr
        )
        sys.stderr.write("\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
