"""Experiment runner: config parsing, per-command validation, deterministic
orchestration of the library modules, atomic CSV/JSON emission.

Config files are flat `key = value` text with '#' comments and one
`[command]` section per command; keys before any section are global
(out, seed, jobs).  Command-line flags override file values.  Unknown or
out-of-range keys fail before any computation starts, and no output file is
created on failure.  Reports carry an echo of the fully resolved config and
a `timestamp` field, which is the only field excluded from the determinism
contract (identical config + seed reproduce every other byte).

Commands: zeros-compute, zeros-fetch, zeros-verify, clt, explicit, fujii,
density-synth, density-windows, cue.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import re
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import density, explicit, rmt, stats, testfn, zeros

__all__ = ["RunConfig", "parse_config", "run", "main", "ConfigError", "parse_eta", "parse_weight"]


class ConfigError(ValueError):
    pass


def default_cache_dir() -> Path:
    env = os.environ.get("MESOZETA_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "mesozeta"


# ----------------------------------------------------------------------
# literal grammars
# ----------------------------------------------------------------------

_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"


def parse_eta(text: str) -> testfn.TestFunction:
    """eta literals: indicator(a,b) | triangle(a,b) | piecewise[(a,b,c0,c1),...]."""
    text = text.strip()
    m = re.fullmatch(rf"indicator\(\s*({_NUM})\s*,\s*({_NUM})\s*\)", text)
    if m:
        return testfn.indicator(float(m.group(1)), float(m.group(2)))
    m = re.fullmatch(rf"triangle\(\s*({_NUM})\s*,\s*({_NUM})\s*\)", text)
    if m:
        return testfn.triangle(float(m.group(1)), float(m.group(2)))
    m = re.fullmatch(r"piecewise\[(.*)\]", text)
    if m:
        body = m.group(1)
        tuples = re.findall(rf"\(\s*({_NUM})\s*,\s*({_NUM})\s*,\s*({_NUM})\s*,\s*({_NUM})\s*\)", body)
        if not tuples:
            raise ConfigError(f"empty piecewise eta literal: {text!r}")
        pieces = [(float(a), float(b), float(c0), float(c1)) for a, b, c0, c1 in tuples]
        return testfn.piecewise_linear(pieces)
    raise ConfigError(f"unparseable eta literal: {text!r}")


def parse_weight(text: str):
    """weight literals: uniform | fejer(center,scale) | fejer_mixture(lo,hi,scale,count)."""
    text = text.strip()
    if text == "uniform":
        return "uniform"
    m = re.fullmatch(rf"fejer\(\s*({_NUM})\s*,\s*({_NUM})\s*\)", text)
    if m:
        return testfn.fejer_squared(float(m.group(1)), float(m.group(2)))
    m = re.fullmatch(rf"fejer_mixture\(\s*({_NUM})\s*,\s*({_NUM})\s*,\s*({_NUM})\s*,\s*(\d+)\s*\)", text)
    if m:
        return testfn.fejer_mixture(float(m.group(1)), float(m.group(2)), float(m.group(3)), int(m.group(4)))
    raise ConfigError(f"unparseable weight literal: {text!r}")


def parse_periodic(text: str) -> rmt.PeriodicFunction:
    """f literals for cue: cos2 | arc(length[,start]) | fourier[(k,c),...]."""
    text = text.strip()
    if text == "cos2":
        return rmt.cosine_statistic()
    m = re.fullmatch(rf"arc\(\s*({_NUM})\s*(?:,\s*({_NUM})\s*)?\)", text)
    if m:
        start = float(m.group(2)) if m.group(2) else 0.0
        return rmt.arc_indicator(float(m.group(1)), start)
    m = re.fullmatch(r"fourier\[(.*)\]", text)
    if m:
        pairs = re.findall(rf"\(\s*([-+]?\d+)\s*,\s*({_NUM})\s*\)", m.group(1))
        if not pairs:
            raise ConfigError(f"empty fourier literal: {text!r}")
        return rmt.PeriodicFunction(coefficients=tuple((int(k), float(c)) for k, c in pairs))
    raise ConfigError(f"unparseable periodic function literal: {text!r}")


def _float_list(text: str):
    return [float(v) for v in str(text).split(",") if v.strip()]


def _int_list(text: str):
    return [int(v) for v in str(text).split(",") if v.strip()]


# ----------------------------------------------------------------------
# schemas
# ----------------------------------------------------------------------


def _positive(x):
    return x > 0


def _nonneg(x):
    return x >= 0


# key -> (converter, required, default, validator or None)
SCHEMAS = {
    "zeros-compute": {
        "t_min": (float, False, 0.0, _nonneg),
        "t_max": (float, True, None, _positive),
        "table_out": (str, True, None, None),
        "tol": (float, False, 1e-8, _positive),
        "certify_at": (float, False, None, _positive),
    },
    "zeros-fetch": {
        "source": (str, True, None, None),
        "cache_dir": (str, False, None, None),
        "registry": (str, False, None, None),
        "base": (float, False, 0.0, _nonneg),
    },
    "zeros-verify": {
        "table": (str, True, None, None),
        "source": (str, False, None, None),
        "cache_dir": (str, False, None, None),
        "registry": (str, False, None, None),
    },
    "clt": {
        "T": (float, True, None, lambda v: v >= 100),
        "n": (float, True, None, lambda v: v >= 1),
        "eta": (parse_eta, True, None, None),
        "samples": (int, True, None, _positive),
        "table": (str, True, None, None),
        "kernel_order": (int, False, 1, _positive),
        "weight": (parse_weight, False, "uniform", None),
        "dump": (str, False, None, None),
    },
    "explicit": {
        "table": (str, True, None, None),
        "V": (float, True, None, _positive),
        "half_width": (float, False, 3.0, _positive),
        "taper": (float, False, 1.0, _positive),
    },
    "fujii": {
        "table": (str, True, None, None),
        "T": (float, True, None, _positive),
        "H": (float, True, None, _positive),
        "h_values": (_float_list, True, None, lambda v: len(v) > 0),
        "k": (int, False, 1, _positive),
    },
    "density-synth": {
        "T": (float, True, None, lambda v: v >= 100),
        "c": (float, True, None, lambda v: 0 < v < 1),
        "offaxis_fraction": (float, False, 1.0, lambda v: 0 <= v <= 1),
        "ensemble_out": (str, True, None, None),
    },
    "density-windows": {
        "ensemble": (str, True, None, None),
        "sigma_offsets": (_float_list, True, None, lambda v: len(v) > 0),
        "H_values": (_float_list, True, None, lambda v: len(v) > 0),
        "k_values": (_int_list, False, [1, 2], lambda v: len(v) > 0),
        "c": (float, False, 0.5, lambda v: 0 < v < 1),
        "mode": (str, False, "windowed", lambda v: v in ("windowed", "smoothed")),
        "alpha": (float, False, 1.0, _nonneg),
        "weight": (parse_weight, False, None, None),
    },
    "cue": {
        "N": (int, True, None, lambda v: 1 <= v <= 1024),
        "f": (parse_periodic, True, None, None),
        "samples": (int, True, None, _positive),
    },
}

COMMANDS = tuple(SCHEMAS)


@dataclass
class RunConfig:
    command: str
    parameters: dict
    output_path: Path
    master_seed: int = 1
    jobs: int = 1
    echo: dict = field(default_factory=dict)


def _read_config_file(path: Path):
    """Returns (globals_dict, {section: {key: raw string}})."""
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    sections: dict = {}
    globals_: dict = {}
    current = None
    for ln, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            sections.setdefault(current, {})
            continue
        if "=" not in line:
            raise ConfigError(f"line {ln}: expected key = value, got {line!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if current is None:
            globals_[key] = val
        else:
            sections[current][key] = val
    return globals_, sections


def parse_config(command: str, file=None, flags=None, out=None, seed=None, jobs=None) -> RunConfig:
    """Resolve a RunConfig from an optional config file plus override flags.

    Every key is validated against the command schema (unknown keys,
    missing required keys, type errors and range errors all name the
    offending key and abort before any computation).
    """
    if command not in SCHEMAS:
        raise ConfigError(f"unknown command {command!r}")
    schema = SCHEMAS[command]
    raw: dict = {}
    g: dict = {}
    if file is not None:
        g, sections = _read_config_file(Path(file))
        raw.update(sections.get(command, {}))
        for k in g:
            if k not in ("out", "seed", "jobs"):
                raise ConfigError(f"unknown global key {k!r} (only out, seed, jobs)")
    if flags:
        raw.update({k: v for k, v in flags.items() if v is not None})
    params = {}
    for key, value in raw.items():
        if key not in schema:
            raise ConfigError(f"unknown key {key!r} for command {command}")
        conv = schema[key][0]
        try:
            params[key] = conv(value) if isinstance(value, str) else value
        except (ValueError, ConfigError) as exc:
            raise ConfigError(f"type-error for key {key!r}: {exc}") from exc
    for key, (conv, required, default, validator) in schema.items():
        if key not in params:
            if required:
                raise ConfigError(f"missing required key {key!r} for command {command}")
            params[key] = default
        if params[key] is not None and validator is not None and not validator(params[key]):
            raise ConfigError(f"range-error for key {key!r}: value {params[key]!r}")
    if command == "clt":
        if not params["n"] <= math.log(params["T"]) / 2:
            raise ConfigError("range-error for key 'n': need n <= log(T)/2")
    out = out if out is not None else g.get("out")
    if out is None:
        raise ConfigError("missing output path (--out or global 'out')")
    seed = seed if seed is not None else int(g.get("seed", 1))
    jobs = jobs if jobs is not None else int(g.get("jobs", 1))
    echo = {k: _echo_value(v) for k, v in params.items()}
    echo.update({"command": command, "seed": int(seed), "jobs": int(jobs)})
    return RunConfig(command, params, Path(out), int(seed), int(jobs), echo)


def _echo_value(v):
    if isinstance(v, (int, float, str, bool)) or v is None:
        return v
    if isinstance(v, list):
        return v
    return str(v)


# ----------------------------------------------------------------------
# command implementations
# ----------------------------------------------------------------------


def _atomic_write_text(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = Path(str(path) + ".tmp")
    tmp.write_text(text)
    tmp.replace(path)


def _emit_json(cfg: RunConfig, payload: dict):
    payload = dict(payload)
    payload["config"] = cfg.echo
    payload["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    _atomic_write_text(cfg.output_path, json.dumps(payload, sort_keys=True) + "\n")


def _load_table(path: str) -> zeros.ZeroTable:
    return zeros.read_table_cache(path)


def _run_zeros_compute(cfg: RunConfig):
    p = cfg.parameters
    table = zeros.find_zeros(p["t_min"], p["t_max"], zeros.EvaluationPrecision(p["tol"]), jobs=cfg.jobs)
    certified_n = None
    if p["certify_at"] is not None:
        certified_n = zeros.turing_certify(table, p["certify_at"])
    out_tab = Path(p["table_out"])
    out_tab.parent.mkdir(parents=True, exist_ok=True)
    zeros.write_table_cache(table, out_tab)
    _emit_json(
        cfg,
        {
            "count": len(table),
            "t_min": table.t_lo,
            "t_max": table.t_max,
            "certified": table.certified,
            "certified_count": certified_n,
            "first_zeros": [float(v) for v in table.ordinates[:3]],
            "table_path": str(out_tab),
        },
    )


def _run_zeros_fetch(cfg: RunConfig):
    p = cfg.parameters
    cache = Path(p["cache_dir"]) if p["cache_dir"] else default_cache_dir()
    table = zeros.fetch_zero_table(p["source"], cache, registry=p["registry"], base=p["base"])
    _emit_json(
        cfg,
        {
            "source": p["source"],
            "count": len(table),
            "t_max": table.t_max,
            "cache_dir": str(cache),
        },
    )


def _run_zeros_verify(cfg: RunConfig):
    p = cfg.parameters
    table = zeros.read_table_cache(p["table"])  # CRC checked here
    result = {"table": p["table"], "count": len(table), "crc": "ok", "monotone": True}
    if p["source"]:
        cache = Path(p["cache_dir"]) if p["cache_dir"] else default_cache_dir()
        import hashlib

        registry = p["registry"] or (cache / "sources.conf")
        reg = zeros._load_registry(registry) if not isinstance(registry, dict) else registry
        if p["source"] not in reg:
            raise zeros.UnknownSourceError(p["source"])
        url, digest = reg[p["source"]]
        raw = (cache / "raw" / f"{p['source']}.txt").read_bytes()
        got = hashlib.sha256(raw).hexdigest()
        if digest is not None and got != digest:
            raise zeros.ChecksumMismatchError(f"sha256 {got} != {digest}")
        result["sha256"] = "ok"
    _emit_json(cfg, result)


def _run_clt(cfg: RunConfig):
    p = cfg.parameters
    table = _load_table(p["table"])
    config = stats.ExperimentConfig(
        T=p["T"],
        n=p["n"],
        eta=p["eta"],
        kernel=testfn.BumpKernel(p["kernel_order"]),
        weight=p["weight"],
        samples=p["samples"],
        master_seed=cfg.master_seed,
    )
    report = stats.sample_clt(table, config, dump_path=p["dump"])
    _emit_json(cfg, report.to_json_dict())


def _run_explicit(cfg: RunConfig):
    p = cfg.parameters
    table = _load_table(p["table"])
    g = explicit.mollified_bump(p["half_width"], p["taper"])
    rep = explicit.explicit_formula_discrepancy(g, table, p["V"])
    _emit_json(
        cfg,
        {
            "zero_side": rep.zero_side,
            "prime_side": rep.prime_side,
            "discrepancy": rep.discrepancy,
            "tail_estimate": rep.tail_estimate,
            "V": rep.V,
            "support": list(rep.support),
        },
    )


def _run_fujii(cfg: RunConfig):
    p = cfg.parameters
    table = _load_table(p["table"])
    rows = []
    for h in p["h_values"]:
        m = density.fujii_moment(table, p["T"], p["H"], h, p["k"])
        rows.append(
            {
                "h": h,
                "moment": m,
                "main_term_logk": density.fujii_main_term(h, p["T"], p["k"], "k"),
                "main_term_log2k": density.fujii_main_term(h, p["T"], p["k"], "2k"),
            }
        )
    _emit_json(cfg, {"T": p["T"], "H": p["H"], "k": p["k"], "rows": rows})


def _write_ensemble_csv(path: Path, ens: density.SyntheticEnsemble, seed: int):
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = Path(str(path) + ".tmp")
    with open(tmp, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["ordinate", "off_axis"])
        for g, a in zip(ens.table.ordinates, ens.table.off_axis):
            w.writerow([repr(float(g)), repr(float(a))])
    tmp.replace(path)
    side = {
        "T": ens.target_height,
        "c": ens.density_constant,
        "count": len(ens.table),
        "seed": seed,
    }
    _atomic_write_text(Path(str(path) + ".json"), json.dumps(side, sort_keys=True) + "\n")


def read_ensemble_csv(path) -> density.SyntheticEnsemble:
    side = json.loads(Path(str(path) + ".json").read_text())
    ords, offs = [], []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            ords.append(float(row["ordinate"]))
            offs.append(float(row["off_axis"]))
    table = zeros.ZeroTable(
        ordinates=np.array(ords),
        t_max=float(side["T"]),
        source="synthetic",
        certified=False,
        t_lo=0.0,
        base_count=0,
        off_axis=np.array(offs),
        reference_height=float(side["T"]),
    )
    return density.SyntheticEnsemble(table, float(side["c"]), float(side["T"]))


def _run_density_synth(cfg: RunConfig):
    p = cfg.parameters
    ens = density.synthesize_off_axis_zeros(p["T"], p["c"], p["offaxis_fraction"], cfg.master_seed)
    out = Path(p["ensemble_out"])
    _write_ensemble_csv(out, ens, cfg.master_seed)
    _emit_json(cfg, {"ensemble": str(out), "count": len(ens.table), "T": p["T"], "c": p["c"]})


def _run_density_windows(cfg: RunConfig):
    p = cfg.parameters
    ens = read_ensemble_csv(p["ensemble"])
    T = ens.target_height
    rows = []
    for off in p["sigma_offsets"]:
        sigma_level = 0.5 + off / math.log(T)
        for H in p["H_values"]:
            for k in p["k_values"]:
                if p["mode"] == "windowed":
                    rep = density.windowed_lk(ens, sigma_level, H, k, T, c=p["c"])
                else:
                    weight = p["weight"] if p["weight"] is not None else testfn.fejer_squared(0.75, 2.0)
                    rep = density.cauchy_smoothed_lk(
                        ens, density.above_threshold(p["alpha"]), H, k, T, weight, c=p["c"]
                    )
                rows.append(
                    {
                        "param_set": f"sigma+{off}/logT,H={H:g},k={k}",
                        "lhs": rep.lhs,
                        "rhs_shape": rep.rhs_bound,
                        "fitted_constant": rep.fitted_constant,
                    }
                )
    csv_path = cfg.output_path.with_suffix(".csv")
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    tmp = Path(str(csv_path) + ".tmp")
    with open(tmp, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=["param_set", "lhs", "rhs_shape", "fitted_constant"], lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
    tmp.replace(csv_path)
    _emit_json(cfg, {"rows": rows, "csv": str(csv_path), "mode": p["mode"]})


def _run_cue(cfg: RunConfig):
    p = cfg.parameters
    rep = rmt.cue_clt(p["N"], p["f"], p["samples"], cfg.master_seed, jobs=cfg.jobs)
    _emit_json(cfg, rep.to_json_dict())


_RUNNERS = {
    "zeros-compute": _run_zeros_compute,
    "zeros-fetch": _run_zeros_fetch,
    "zeros-verify": _run_zeros_verify,
    "clt": _run_clt,
    "explicit": _run_explicit,
    "fujii": _run_fujii,
    "density-synth": _run_density_synth,
    "density-windows": _run_density_windows,
    "cue": _run_cue,
}


def run(config: RunConfig) -> int:
    """Execute a validated RunConfig; returns the process exit status."""
    try:
        _RUNNERS[config.command](config)
        return 0
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        record = {
            "error": type(exc).__name__,
            "message": str(exc),
            "command": config.command,
        }
        sys.stderr.write(json.dumps(record, sort_keys=True) + "\n")
        return 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="mesozeta", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd, schema in SCHEMAS.items():
        sp = sub.add_parser(cmd)
        sp.add_argument("--config", default=None)
        sp.add_argument("--out", default=None)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--jobs", type=int, default=None)
        for key in schema:
            sp.add_argument(f"--{key}", default=None, dest=key)
    ns = parser.parse_args(argv)
    flags = {k: getattr(ns, k) for k in SCHEMAS[ns.command] if getattr(ns, k) is not None}
    try:
        cfg = parse_config(
            ns.command, file=ns.config, flags=flags, out=ns.out, seed=ns.seed, jobs=ns.jobs
        )
    except ConfigError as exc:
        sys.stderr.write(json.dumps({"error": "ConfigError", "message": str(exc)}, sort_keys=True) + "\n")
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
