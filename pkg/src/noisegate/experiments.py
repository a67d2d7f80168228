"""Declarative experiments: parameter sweeps and tetrahedron grids.

An experiment file is a JSON object::

    {
      "name": "depolarizing-qubit",
      "noise": {"family": "depolarizing", "d": 2, "eps": 0.0},
      "protocol": "auto",
      "optimizer": {"restarts": 5},
      "sweep": {"param": "eps", "from": 0.0, "to": 1.0, "steps": 21},
      "output": {"path": "out.csv", "format": "csv"}
    }

``sweep`` may instead be ``{"grid": "tetrahedron", "resolution": 0.1}``,
which needs a ``canonical`` noise family. ``optimizer`` and ``sweep`` are
optional; ``protocol`` defaults to ``"auto"`` (the predicted optimum).
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .channels import CPMap, is_unital
from .fidelity import protocol_fidelity
from .geometry import canonical_form, classify, in_tetrahedron, predict_optimum
from .noise_models import noise_from_spec
from .optimizer import OptimizerConfig, certify_upper_bound, optimize
from .protocols import Protocol, discriminate_reprepare, do_nothing, no_measurement, protocol_from_dict
from .separability import is_qcq

FORMATS = ("csv", "jsonl")
FIXED_COLUMNS = ("fbar_do_nothing", "fbar_no_measurement", "fbar_dr", "fbar_predicted")


class ConfigError(ValueError):
    """The experiment description is malformed or names an impossible noise."""


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    noise: dict
    protocol: str | dict = "auto"
    optimizer: OptimizerConfig | None = None
    sweep: dict | None = None
    output_path: str | None = None
    output_format: str = "csv"

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentSpec":
        if not isinstance(data, dict):
            raise ConfigError("experiment must be a JSON object")
        allowed = {"name", "noise", "protocol", "optimizer", "sweep", "output"}
        extra = set(data) - allowed
        if extra:
            raise ConfigError(f"unknown experiment fields: {sorted(extra)}")
        for key in ("name", "noise"):
            if key not in data:
                raise ConfigError(f"missing required field {key!r}")
        if not isinstance(data["name"], str):
            raise ConfigError("name must be a string")
        noise = data["noise"]
        if not isinstance(noise, dict) or "family" not in noise:
            raise ConfigError("noise must be an object with a 'family'")

        protocol = data.get("protocol", "auto")
        if protocol != "auto" and not isinstance(protocol, dict):
            raise ConfigError("protocol must be 'auto' or a protocol object")

        opt = data.get("optimizer")
        if opt is not None:
            if not isinstance(opt, dict):
                raise ConfigError("optimizer must be an object")
            try:
                opt = OptimizerConfig.from_dict(opt)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad optimizer config: {exc}") from exc

        sweep = data.get("sweep")
        if sweep is not None:
            _validate_sweep(sweep, noise)

        out = data.get("output", {})
        if not isinstance(out, dict):
            raise ConfigError("output must be an object")
        fmt = out.get("format", "csv")
        if fmt not in FORMATS:
            raise ConfigError(f"output format must be one of {FORMATS}")

        spec = cls(data["name"], noise, protocol, opt, sweep, out.get("path"), fmt)
        spec.points()  # surfaces invalid noise parameters as config errors
        if protocol != "auto":
            spec.explicit_protocol()
        return spec

    @classmethod
    def load(cls, path) -> "ExperimentSpec":
        try:
            data = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
        return cls.from_dict(data)

    def explicit_protocol(self) -> Protocol | None:
        if self.protocol == "auto":
            return None
        try:
            return protocol_from_dict(self.protocol)
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad protocol: {exc}") from exc

    def param_names(self) -> tuple[str, ...]:
        if self.sweep is None:
            return ()
        if "grid" in self.sweep:
            return ("d1", "d2", "d3")
        return (self.sweep["param"],)

    def points(self) -> list[tuple[tuple[float, ...], dict]]:
        """``(parameter values, noise spec)`` for every sweep point, in order."""
        if self.sweep is None:
            pts = [((), dict(self.noise))]
        elif "grid" in self.sweep:
            pts = [(tuple(p), {**self.noise, "family": "canonical", "dvec": list(p)})
                   for p in tetrahedron_grid(float(self.sweep["resolution"]))]
            for _, n in pts:
                n.pop("d1", None), n.pop("d2", None), n.pop("d3", None)
        else:
            s = self.sweep
            values = np.linspace(float(s["from"]), float(s["to"]), int(s["steps"]))
            pts = [((float(v),), {**self.noise, s["param"]: float(v)}) for v in values]
        for _, n in pts:
            try:
                noise_from_spec(n)
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"invalid noise {n}: {exc}") from exc
        return pts


def _validate_sweep(sweep, noise: dict) -> None:
    if not isinstance(sweep, dict):
        raise ConfigError("sweep must be an object")
    if "grid" in sweep:
        if sweep["grid"] != "tetrahedron":
            raise ConfigError("the only supported grid is 'tetrahedron'")
        if noise.get("family") != "canonical":
            raise ConfigError("a tetrahedron grid needs the 'canonical' noise family")
        res = sweep.get("resolution")
        if not isinstance(res, (int, float)) or not 0 < res <= 2:
            raise ConfigError("grid resolution must be a number in (0, 2]")
        return
    for key in ("param", "from", "to", "steps"):
        if key not in sweep:
            raise ConfigError(f"sweep is missing {key!r}")
    param = sweep["param"]
    if param == "family" or not isinstance(noise.get(param), (int, float)) or isinstance(noise.get(param), bool):
        raise ConfigError(f"sweep parameter {param!r} is not a real field of the noise spec")
    if not isinstance(sweep["steps"], int) or sweep["steps"] < 1:
        raise ConfigError("sweep steps must be a positive integer")


def tetrahedron_grid(resolution: float) -> list[tuple[float, float, float]]:
    """Points of a cubic grid with the given spacing that lie in ``T``."""
    n = int(round(2.0 / resolution))
    axis = np.linspace(-1.0, 1.0, n + 1)
    pts = []
    for d1 in axis:
        for d2 in axis:
            for d3 in axis:
                p = (float(d1), float(d2), float(d3))
                if in_tetrahedron(p, 1e-12):
                    pts.append(p)
    return pts


def _region_and_eb(noise: CPMap) -> tuple[str | None, str]:
    region = None
    if noise.dim_in == 2 and noise.is_square and is_unital(noise):
        region = str(classify(canonical_form(noise).dvec))
    return region, is_qcq(noise).status.value


def evaluate_point(noise_spec: dict, protocol: Protocol | None, cfg: OptimizerConfig | None) -> dict:
    """All table columns except the sweep parameters for one noise."""
    noise = noise_from_spec(noise_spec)
    d = noise.dim_in
    row = {
        "fbar_do_nothing": protocol_fidelity(do_nothing(d), noise).value,
        "fbar_no_measurement": (max(protocol_fidelity(no_measurement(mu), noise).value for mu in range(4))
                                if d == 2 else None),
        "fbar_dr": protocol_fidelity(discriminate_reprepare(d=d), noise).value,
    }
    try:
        predicted_protocol, predicted = predict_optimum(noise)
    except ValueError:
        predicted_protocol, predicted = None, None
    row["fbar_predicted"] = predicted
    if cfg is not None:
        res = optimize(noise, cfg, workers=1)
        row["fbar_optimizer"] = res.best_fbar
        row["optimizer_status"] = certify_upper_bound(noise, res).status
    chosen = protocol if protocol is not None else predicted_protocol
    row["fbar_protocol"] = None if chosen is None else protocol_fidelity(chosen, noise).value
    row["region"], row["eb"] = _region_and_eb(noise)
    return row


def _evaluate(args):
    return evaluate_point(*args)


def run_sweep(spec: ExperimentSpec, seed: int | None = None, workers: int = 1) -> list[dict]:
    """Evaluate every sweep point; rows come back in sweep order."""
    cfg = spec.optimizer
    if cfg is not None and seed is not None:
        cfg = replace(cfg, seed=seed)
    protocol = spec.explicit_protocol()
    points = spec.points()
    jobs = [(n, protocol, cfg) for _, n in points]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_evaluate, jobs))
        # map() yields in submission order, whatever the completion order
    else:
        results = [_evaluate(j) for j in jobs]
    names = spec.param_names()
    return [{**dict(zip(names, params)), **row} for (params, _), row in zip(points, results)]


def columns(spec: ExperimentSpec) -> list[str]:
    cols = list(spec.param_names()) + list(FIXED_COLUMNS)
    if spec.optimizer is not None:
        cols += ["fbar_optimizer", "optimizer_status"]
    return cols + ["fbar_protocol", "region", "eb"]


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return "nan" if math.isnan(value) else "%.17g" % value
    return str(value)


def format_table(spec: ExperimentSpec, rows: list[dict], fmt: str | None = None) -> str:
    fmt = fmt or spec.output_format
    cols = columns(spec)
    if fmt == "jsonl":
        return "".join(json.dumps({c: r.get(c) for c in cols}) + "\n" for r in rows)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for r in rows:
        writer.writerow([_cell(r.get(c)) for c in cols])
    return buf.getvalue()


def write_table(spec: ExperimentSpec, rows: list[dict], path=None) -> str:
    """Write the table to ``path`` (or the spec's output path); return the text."""
    text = format_table(spec, rows)
    target = path or spec.output_path
    if target:
        Path(target).parent.mkdir(parents=True, exist_ok=True)
        Path(target).write_text(text)
    return text
