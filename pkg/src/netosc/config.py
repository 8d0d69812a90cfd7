"""Scenario configuration: one JSON document, overridable by CLI flags."""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from .echo import DEFAULT_THETA0
from .errors import ParseError, ValidationError

SCENARIOS = ("wave", "fundamental", "echo", "compare", "verify", "sweep")
REPS = ("A", "B", "both")
DEFAULT_TOLERANCES = {
    "algebra": 1e-12,
    "operator_square": 1e-10,
    "block_eigenvalues": 1e-10,
    "block_assembly": 1e-9,
    "energy_drift": 1e-6,
    "wave_consistency": 1e-3,
    "wave_rmse": 1e-6,
    "roundtrip": 1e-12,
    "imag": 1e-8,
    "amp": 1e-8,
    "phase": 1e-8,
    "lock_time": 1e-3,
    "lock_phase": 0.05,
    "lock_window": 1.0,
    "growth": 1e-3,
    "psi_duality": 1e-6,
    "psi_floor": 1e-3,
}
_KNOWN_KEYS = {"scenario", "graph", "rep", "x0", "v0", "theta0", "psi0", "dt", "T",
               "tolerances", "out", "sweep", "plot_data", "figures"}


@dataclass
class ScenarioConfig:
    scenario: str
    complete: Optional[tuple[int, float]] = None
    edge_list: Optional[Path] = None
    rep: str = "both"
    x0: Optional[list[float]] = None
    v0: Optional[list[float]] = None
    theta0: tuple = DEFAULT_THETA0
    dt: float = 1e-3
    T: float = 10.0
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    out: Path = Path("out")
    sweep_n: list = field(default_factory=list)
    sweep_w: list = field(default_factory=list)
    plot_data: bool = False
    figures: bool = False

    @property
    def reps(self) -> tuple[str, ...]:
        return ("A", "B") if self.rep == "both" else (self.rep,)

    def echo(self) -> dict:
        """Inputs as plain JSON values, for run summaries."""
        graph = ({"complete": {"n": self.complete[0], "w": self.complete[1]}}
                 if self.complete else {"edge_list": str(self.edge_list)})
        return {"scenario": self.scenario, "graph": graph, "rep": self.rep,
                "x0": self.x0, "v0": self.v0, "theta0": list(self.theta0),
                "dt": self.dt, "T": self.T, "tolerances": self.tolerances,
                "out": str(self.out), "sweep": {"n": self.sweep_n, "w": self.sweep_w},
                "plot_data": self.plot_data, "figures": self.figures}


def _number(raw, name, positive=False):
    if isinstance(raw, bool) or not isinstance(raw, (int, float)) or not math.isfinite(raw):
        raise ValidationError(name, "must be a finite number")
    if positive and not raw > 0:
        raise ValidationError(name, "must be > 0")
    return float(raw)


def _vector(raw, name, length=None):
    if raw is None:
        return None
    if not isinstance(raw, list):
        raise ValidationError(name, "must be a list of numbers")
    vals = [_number(v, f"{name}[{i}]") for i, v in enumerate(raw)]
    if length is not None and len(vals) != length:
        raise ValidationError(name, f"must have length {length}")
    return vals


def _theta_from_psi0(raw) -> tuple:
    # psi0 given as [[re, im], [re, im]]
    if not (isinstance(raw, list) and len(raw) == 2):
        raise ValidationError("psi0", "must be [[re, im], [re, im]]")
    plus, minus = (complex(*_vector(c, f"psi0[{k}]", 2)) for k, c in enumerate(raw))
    if plus == 0 or minus == 0:
        raise ValidationError("psi0", "components must be nonzero")
    return (-cmath.phase(plus), math.log(abs(plus)), cmath.phase(minus), -math.log(abs(minus)))


def validate(doc: dict, base_dir: Path = Path("."), scenario: Optional[str] = None) -> ScenarioConfig:
    """``scenario`` (the CLI subcommand) takes precedence over the document's field."""
    if not isinstance(doc, dict):
        raise ValidationError("<root>", "config must be a JSON object")
    unknown = set(doc) - _KNOWN_KEYS
    if unknown:
        raise ValidationError(sorted(unknown)[0], "unknown field")

    scenario = scenario or doc.get("scenario")
    if scenario not in SCENARIOS:
        raise ValidationError("scenario", f"must be one of {', '.join(SCENARIOS)}")

    graph = doc.get("graph")
    if graph is None and scenario == "sweep":
        graph = {"complete": {"n": 2, "w": 1.0}}  # placeholder; sweep builds its own graphs
    if not isinstance(graph, dict):
        raise ValidationError("graph", "required object with 'complete' or 'edge_list'")
    sources = [k for k in ("complete", "edge_list") if k in graph]
    if len(sources) != 1 or set(graph) - {"complete", "edge_list"}:
        raise ValidationError("graph", "exactly one source: 'complete' or 'edge_list'")
    complete = edge_list = None
    if "complete" in graph:
        params = graph["complete"]
        if not isinstance(params, dict) or set(params) != {"n", "w"}:
            raise ValidationError("graph.complete", "must be {\"n\": int, \"w\": number}")
        n = params["n"]
        if isinstance(n, bool) or not isinstance(n, int) or n < 2:
            raise ValidationError("graph.complete.n", "must be an integer >= 2")
        complete = (n, _number(params["w"], "graph.complete.w", positive=True))
    else:
        if not isinstance(graph["edge_list"], str):
            raise ValidationError("graph.edge_list", "must be a path string")
        edge_list = Path(graph["edge_list"])
        if not edge_list.is_absolute():
            edge_list = base_dir / edge_list

    rep = str(doc.get("rep", "both"))
    rep = rep if rep == "both" else rep.upper()
    if rep not in REPS:
        raise ValidationError("rep", "must be A, B or both")

    dt = _number(doc.get("dt", 1e-3), "dt", positive=True)
    T = _number(doc.get("T", 10.0), "T")
    if T < dt:
        raise ValidationError("T", "must be >= dt")

    if "theta0" in doc and "psi0" in doc:
        raise ValidationError("theta0", "give theta0 or psi0, not both")
    if "psi0" in doc:
        theta0 = _theta_from_psi0(doc["psi0"])
    else:
        theta0 = tuple(_vector(doc.get("theta0", list(DEFAULT_THETA0)), "theta0", 4))

    tolerances = dict(DEFAULT_TOLERANCES)
    tol_doc = doc.get("tolerances", {})
    if not isinstance(tol_doc, dict):
        raise ValidationError("tolerances", "must be an object")
    for key, val in tol_doc.items():
        if key not in DEFAULT_TOLERANCES:
            raise ValidationError(f"tolerances.{key}", "unknown tolerance")
        tolerances[key] = _number(val, f"tolerances.{key}", positive=True)

    sweep_n, sweep_w = [], []
    if "sweep" in doc:
        sw = doc["sweep"]
        if not isinstance(sw, dict) or set(sw) != {"n", "w"}:
            raise ValidationError("sweep", "must be {\"n\": [...], \"w\": [...]}")
        sweep_n = sw["n"]
        if not isinstance(sweep_n, list) or not sweep_n or any(
                isinstance(v, bool) or not isinstance(v, int) or v < 2 for v in sweep_n):
            raise ValidationError("sweep.n", "must be a non-empty list of integers >= 2")
        sweep_w = _vector(sw["w"], "sweep.w")
        if not sweep_w or any(v <= 0 for v in sweep_w):
            raise ValidationError("sweep.w", "must be a non-empty list of positive numbers")
    elif scenario == "sweep":
        raise ValidationError("sweep", "required for the sweep scenario")

    out = Path(doc.get("out", "out"))
    return ScenarioConfig(
        scenario=scenario, complete=complete, edge_list=edge_list, rep=rep,
        x0=_vector(doc.get("x0"), "x0"), v0=_vector(doc.get("v0"), "v0"),
        theta0=theta0, dt=dt, T=T, tolerances=tolerances, out=out,
        sweep_n=sweep_n, sweep_w=sweep_w,
        plot_data=bool(doc.get("plot_data", False)), figures=bool(doc.get("figures", False)),
    )


def parse_config(path, scenario: Optional[str] = None) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return validate(doc, path.parent, scenario)


def apply_overrides(cfg: ScenarioConfig, **flags) -> ScenarioConfig:
    """CLI flags win over the file; ``None`` means not given."""
    changes = {k: v for k, v in flags.items() if v is not None}
    if "rep" in changes:
        rep = changes["rep"] if changes["rep"] == "both" else changes["rep"].upper()
        if rep not in REPS:
            raise ValidationError("rep", "must be A, B or both")
        changes["rep"] = rep
    if "out" in changes:
        changes["out"] = Path(changes["out"])
    cfg = replace(cfg, **changes)
    if not cfg.dt > 0:
        raise ValidationError("dt", "must be > 0")
    if cfg.T < cfg.dt:
        raise ValidationError("T", "must be >= dt")
    return cfg
