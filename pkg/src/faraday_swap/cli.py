"""Batch command line: ``faraday-swap {reflection,case1,case2,sweep,sample}``.

Settings come from an optional JSON config file, then from flags, with
flags winning.  ``--set section.key=value`` overrides any config key.
Exit status is 0 on success, 2 for invalid configuration, 1 otherwise.
"""
from __future__ import annotations

import argparse
import copy
import csv
import io
import json
import logging
import sys
from pathlib import Path

from .analysis import AXIS_NAMES, Axis, SweepSpec, sampling_check, sweep
from .cavity import (
    CavityParams,
    PhasePair,
    empty_reflection,
    faraday_angles,
    phase_shifts,
    reflection_coefficient,
)
from .errors import FaradaySwapError
from .protocols import run_case

log = logging.getLogger("faraday_swap")

DEFAULTS = {
    "cavity": {
        "omega_c": 0.0,
        "omega_0": 0.0,
        "omega_p": -0.5,
        "kappa": 1.0,
        "gamma": 0.0,
        "g": 0.5,
    },
    "phases": None,
    "sweep": {"case": 1, "axes": []},
    "sample": {"case": 1, "n": 100000, "alarm": 5.0},
    "mode": "ideal",
    "seed": 0,
    "sample_run": False,
    "format": None,
    "out": None,
}

CAVITY_FLAGS = ("omega_c", "omega_0", "omega_p", "kappa", "gamma", "g")
PHASE_FLAGS = ("phi", "phi0", "mag_r", "mag_r0")


class ConfigError(ValueError):
    pass


def _num(x) -> str:
    """Shortest round-trip text for a float."""
    return repr(float(x))


def _merge(base: dict, extra: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in extra.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def _set_dotted(cfg: dict, dotted: str, value) -> None:
    keys = dotted.split(".")
    node = cfg
    for key in keys[:-1]:
        if not isinstance(node.get(key), dict):
            node[key] = {}
        node = node[key]
    node[keys[-1]] = value


def _parse_override(text: str) -> tuple[str, object]:
    if "=" not in text:
        raise ConfigError(f"--set expects KEY=VALUE, got {text!r}")
    key, raw = text.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key.strip(), value


def _parse_axis(text: str) -> dict:
    parts = text.split(":")
    if len(parts) != 4:
        raise ConfigError(f"--axis expects NAME:START:STOP:STEPS, got {text!r}")
    name, start, stop, steps = parts
    try:
        return {"name": name, "start": float(start), "stop": float(stop), "steps": int(steps)}
    except ValueError:
        raise ConfigError(f"--axis has non-numeric bounds in {text!r}") from None


def load_config(args: argparse.Namespace) -> dict:
    cfg = copy.deepcopy(DEFAULTS)
    if args.config is not None:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {args.config} is not valid JSON: {exc}") from None
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a JSON object")
        cfg = _merge(cfg, loaded)

    for name in CAVITY_FLAGS:
        value = getattr(args, name, None)
        if value is not None:
            cfg["cavity"][name] = value
    for name in PHASE_FLAGS:
        value = getattr(args, name, None)
        if value is not None:
            if not isinstance(cfg.get("phases"), dict):
                cfg["phases"] = {}
            cfg["phases"][name] = value
    for key in ("mode", "seed", "format", "out"):
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    if getattr(args, "sample_run", False):
        cfg["sample_run"] = True
    if getattr(args, "case", None) is not None:
        cfg[args.command]["case"] = args.case
    if getattr(args, "axis", None):
        cfg["sweep"]["axes"] = [_parse_axis(a) for a in args.axis]
    if getattr(args, "n", None) is not None:
        cfg["sample"]["n"] = args.n
    if getattr(args, "alarm", None) is not None:
        cfg["sample"]["alarm"] = args.alarm
    for item in args.set or []:
        _set_dotted(cfg, *_parse_override(item))
    return cfg


def _cavity(cfg: dict) -> CavityParams:
    section = cfg.get("cavity") or {}
    unknown = set(section) - set(CAVITY_FLAGS)
    if unknown:
        raise ConfigError(f"unknown cavity keys {sorted(unknown)}")
    return CavityParams(**{k: _as_float(v, f"cavity.{k}") for k, v in section.items()})


def _as_float(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number, got {value!r}")
    return float(value)


def _phases(cfg: dict) -> PhasePair:
    """Explicit phases win over cavity parameters when both are given."""
    section = cfg.get("phases")
    if not section:
        return phase_shifts(_cavity(cfg))
    unknown = set(section) - set(PHASE_FLAGS)
    if unknown:
        raise ConfigError(f"unknown phases keys {sorted(unknown)}")
    if "phi" not in section or "phi0" not in section:
        raise ConfigError("phases section needs both phi and phi0")
    return PhasePair(**{k: _as_float(v, f"phases.{k}") for k, v in section.items()})


def _mode(cfg: dict) -> str:
    if cfg["mode"] not in ("ideal", "lossy"):
        raise ConfigError(f"mode must be ideal or lossy, got {cfg['mode']!r}")
    return cfg["mode"]


def _seed(cfg: dict) -> int:
    seed = cfg["seed"]
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise ConfigError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return seed


def _case(section: dict) -> int:
    if section.get("case") not in (1, 2):
        raise ConfigError(f"case must be 1 or 2, got {section.get('case')!r}")
    return section["case"]


def _format(cfg: dict, default: str, allowed=("csv", "json")) -> str:
    fmt = cfg["format"] or default
    if fmt not in allowed:
        raise ConfigError(f"format must be one of {allowed}, got {fmt!r}")
    return fmt


def _csv_text(header: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _phase_dict(pp: PhasePair) -> dict:
    return {"phi": pp.phi, "phi0": pp.phi0, "mag_r": pp.mag_r, "mag_r0": pp.mag_r0}


def cmd_reflection(cfg: dict) -> str:
    p = _cavity(cfg)
    r, r0 = reflection_coefficient(p), empty_reflection(p)
    pp = phase_shifts(p)
    angles = faraday_angles(pp)
    fields = {
        "r_real": r.real,
        "r_imag": r.imag,
        "r0_real": r0.real,
        "r0_imag": r0.imag,
        "phi": pp.phi,
        "phi0": pp.phi0,
        "mag_r": abs(r),
        "mag_r0": abs(r0),
        "theta_minus": angles.theta_minus,
        "theta_plus": angles.theta_plus,
    }
    fmt = _format(cfg, "text", ("text", "csv", "json"))
    if fmt == "json":
        return _json_text({"params": p.__dict__, **fields})
    if fmt == "csv":
        return _csv_text(list(fields), [[_num(v) for v in fields.values()]])
    return ", ".join(f"{k}={_num(v)}" for k, v in fields.items()) + "\n"


def cmd_case(cfg: dict, case: int) -> str:
    pp = _phases(cfg)
    mode = _mode(cfg)
    run_mode = _seed(cfg) if cfg.get("sample_run") else "enumerate"
    report = run_case(case, pp, run_mode, lossy=(mode == "lossy"))
    if _format(cfg, "csv") == "json":
        return _json_text(
            {
                "case": case,
                "mode": mode,
                "sampled": run_mode != "enumerate",
                "phases": _phase_dict(pp),
                "branches": [
                    {
                        "outcome": b.outcome,
                        "probability": b.probability,
                        "correction": b.correction,
                        "fidelity": b.fidelity,
                    }
                    for b in report.branches
                ],
                "success_probability": report.success_probability,
            }
        )
    rows = [
        [b.outcome, _num(b.probability), b.correction, "" if b.fidelity is None else _num(b.fidelity)]
        for b in report.branches
    ]
    rows.append(["success_probability", _num(report.success_probability), "", ""])
    return _csv_text(["outcome", "probability", "correction", "fidelity"], rows)


def _sweep_spec(cfg: dict) -> SweepSpec:
    section = cfg.get("sweep") or {}
    axes = []
    for raw in section.get("axes", []):
        if not isinstance(raw, dict) or set(raw) != {"name", "start", "stop", "steps"}:
            raise ConfigError(f"each sweep axis needs name, start, stop, steps; got {raw!r}")
        if raw["name"] not in AXIS_NAMES:
            raise ConfigError(f"unknown sweep axis {raw['name']!r}; expected one of {AXIS_NAMES}")
        axes.append(
            Axis(raw["name"], _as_float(raw["start"], "axis start"), _as_float(raw["stop"], "axis stop"), raw["steps"])
        )
    return SweepSpec(tuple(axes), case=_case(section), mode=_mode(cfg), base=_cavity(cfg))


def cmd_sweep(cfg: dict) -> str:
    spec = _sweep_spec(cfg)
    fmt = _format(cfg, "csv")
    rows = sweep(spec)
    header = list(spec.names) + ["phi", "phi0", "mag_r", "mean_fidelity", "worst_fidelity", "success_prob"]
    table = [
        [row.params[k] for k in spec.names]
        + [row.phases.phi, row.phases.phi0, row.phases.mag_r, row.mean_fidelity, row.worst_fidelity, row.success_probability]
        for row in rows
    ]
    if fmt == "json":
        return _json_text(
            {"case": spec.case, "mode": spec.mode, "rows": [dict(zip(header, vals)) for vals in table]}
        )
    return _csv_text(header, [[_num(v) for v in vals] for vals in table])


def cmd_sample(cfg: dict) -> str:
    section = cfg.get("sample") or {}
    case = _case(section)
    n = section.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ConfigError(f"sample.n must be a positive integer, got {n!r}")
    alarm = _as_float(section.get("alarm", 5.0), "sample.alarm")
    rows = sampling_check(case, _phases(cfg), n, _seed(cfg), lossy=(_mode(cfg) == "lossy"))
    flagged = [r.outcome for r in rows if abs(r.z) >= alarm]
    if flagged:
        log.warning("|z| >= %s for outcomes %s", alarm, ", ".join(flagged))
    if _format(cfg, "csv") == "json":
        return _json_text(
            {
                "case": case,
                "n": n,
                "seed": cfg["seed"],
                "alarm": alarm,
                "rows": [
                    {"outcome": r.outcome, "expected": r.expected, "observed": r.observed, "z": r.z}
                    for r in rows
                ],
            }
        )
    return _csv_text(
        ["outcome", "expected", "observed", "z"],
        [[r.outcome, _num(r.expected), _num(r.observed), _num(r.z)] for r in rows],
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON run manifest")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json", "text"))
    common.add_argument("--seed", type=int)
    common.add_argument("--mode", choices=("ideal", "lossy"))
    common.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key")
    for name in CAVITY_FLAGS:
        common.add_argument(f"--{name.replace('_', '-')}", dest=name, type=float)

    phases = argparse.ArgumentParser(add_help=False)
    for name in PHASE_FLAGS:
        phases.add_argument(f"--{name.replace('_', '-')}", dest=name, type=float)

    parser = argparse.ArgumentParser(prog="faraday-swap", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("reflection", parents=[common], help="reflection coefficients and Faraday angles")
    for case in ("case1", "case2"):
        p = sub.add_parser(case, parents=[common, phases], help=f"run swapping protocol {case[-1]}")
        p.add_argument("--sample", dest="sample_run", action="store_true", help="one seeded run instead of all branches")
    p = sub.add_parser("sweep", parents=[common], help="fidelity over a parameter grid")
    p.add_argument("--case", type=int, choices=(1, 2))
    p.add_argument("--axis", action="append", metavar="NAME:START:STOP:STEPS")
    p = sub.add_parser("sample", parents=[common, phases], help="seeded sampling vs Born probabilities")
    p.add_argument("--case", type=int, choices=(1, 2))
    p.add_argument("--n", type=int)
    p.add_argument("--alarm", type=float, help="|z| threshold for warnings (default 5)")
    return parser


COMMANDS = {
    "reflection": cmd_reflection,
    "case1": lambda cfg: cmd_case(cfg, 1),
    "case2": lambda cfg: cmd_case(cfg, 2),
    "sweep": cmd_sweep,
    "sample": cmd_sample,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = load_config(args)
        text = COMMANDS[args.command](cfg)
    except (ConfigError, FaradaySwapError, ValueError, TypeError) as exc:
        print(f"faraday-swap: invalid configuration: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"faraday-swap: internal error: {exc!r}", file=sys.stderr)
        return 1
    if cfg["out"]:
        try:
            Path(cfg["out"]).write_text(text)
        except OSError as exc:
            print(f"faraday-swap: cannot write {cfg['out']}: {exc}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
