"""Scenario configuration files (JSON).

Example::

    {
      "hamiltonian": {"m_S": 0.0, "m_L": 0.47, "gamma_S": 1.0, "gamma_L": 0.002},
      "dissipative_params": {"alpha": 1.0, "gamma": 2.0},
      "time_grid": {"t_start": 0.0, "t_end": 5.0, "steps": 50},
      "trotter_n": 1024,
      "initial_state": "K",
      "system": "one-kaon",
      "observables": ["2pi", "3pi", {"name": "Kbar", "operator": "Kbar"}],
      "sweep": {"beta": {"start": -0.5, "stop": 0.5, "num": 11}}
    }

A raw Hamiltonian is given as {"matrix": [[h00, h01], [h10, h11]]} where
each entry is a number or a [re, im] pair.  Operators and initial states
accept the names K1, K2, K, Kbar, or an explicit 2x2 matrix in the same
entry format.
"""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .bloch import projector
from .generators import PARAM_NAMES, DissipativeParams, EffectiveHamiltonian
from .observables import NAMED_STATES, DecayObservable, default_observables

MAX_SWEEP_POINTS = 100_000
SYSTEMS = ("one-kaon", "two-kaon")


class ConfigError(ValueError):
    """Bad configuration; `where` names the offending field or file position."""

    def __init__(self, where: str, message: str):
        self.where = where
        super().__init__(f"{where}: {message}")


@dataclass
class ScenarioConfig:
    hamiltonian: EffectiveHamiltonian
    params: DissipativeParams
    times: np.ndarray
    trotter_n: int = 1024
    initial_state: np.ndarray = field(default_factory=lambda: projector(NAMED_STATES["K"]))
    system: str = "one-kaon"
    observables: dict = field(default_factory=default_observables)
    sweep: dict = field(default_factory=dict)
    output: Optional[str] = None


def _entry(x, where):
    if isinstance(x, bool):
        raise ConfigError(where, "expected a number or [re, im] pair")
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, list) and len(x) == 2 and all(isinstance(v, (int, float)) for v in x):
        return complex(x[0], x[1])
    raise ConfigError(where, "expected a number or [re, im] pair")


def _matrix(x, where) -> np.ndarray:
    if not (isinstance(x, list) and len(x) == 2 and all(isinstance(r, list) and len(r) == 2 for r in x)):
        raise ConfigError(where, "expected a 2x2 matrix")
    return np.array([[_entry(v, f"{where}[{i}][{j}]") for j, v in enumerate(r)] for i, r in enumerate(x)])


def _real(d, key, where, default=None):
    if key not in d:
        if default is None:
            raise ConfigError(f"{where}.{key}", "missing")
        return default
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ConfigError(f"{where}.{key}", f"expected a finite number, got {v!r}")
    return float(v)


def _operator(x, where) -> np.ndarray:
    if isinstance(x, str):
        if x not in NAMED_STATES:
            raise ConfigError(where, f"unknown state {x!r}; known: {sorted(NAMED_STATES)}")
        return projector(NAMED_STATES[x])
    return _matrix(x, where)


def _hamiltonian(d) -> EffectiveHamiltonian:
    where = "hamiltonian"
    if not isinstance(d, dict):
        raise ConfigError(where, "expected an object")
    if "matrix" in d:
        return EffectiveHamiltonian(_matrix(d["matrix"], f"{where}.matrix"))
    keys = ("m_S", "m_L", "gamma_S", "gamma_L")
    return EffectiveHamiltonian.from_masses_widths(*(_real(d, k, where) for k in keys))


def _params(d) -> DissipativeParams:
    where = "dissipative_params"
    if not isinstance(d, dict):
        raise ConfigError(where, "expected an object")
    for k in d:
        if k not in PARAM_NAMES:
            raise ConfigError(f"{where}.{k}", f"unknown parameter; known: {list(PARAM_NAMES)}")
    p = DissipativeParams(**{k: _real(d, k, where, 0.0) for k in PARAM_NAMES})
    for k in ("a", "alpha", "gamma"):
        if getattr(p, k) < 0:
            raise ConfigError(f"{where}.{k}", "must be non-negative")
    return p


def _time_grid(d) -> np.ndarray:
    where = "time_grid"
    if not isinstance(d, dict):
        raise ConfigError(where, "expected an object")
    t0 = _real(d, "t_start", where, 0.0)
    t1 = _real(d, "t_end", where)
    steps = d.get("steps")
    if isinstance(steps, bool) or not isinstance(steps, int) or steps < 1:
        raise ConfigError(f"{where}.steps", "expected an integer >= 1")
    if t0 < 0:
        raise ConfigError(f"{where}.t_start", "must be non-negative")
    if not t1 > t0:
        raise ConfigError(f"{where}.t_end", "must be greater than t_start")
    return np.linspace(t0, t1, steps + 1)


def _observables(items) -> dict:
    builtin = default_observables()
    if not isinstance(items, list):
        raise ConfigError("observables", "expected a list")
    out = {}
    for i, item in enumerate(items):
        where = f"observables[{i}]"
        if isinstance(item, str):
            if item not in builtin:
                raise ConfigError(where, f"undefined observable {item!r}; built-in: {sorted(builtin)}")
            out[item] = builtin[item]
            continue
        if not isinstance(item, dict) or "name" not in item or "operator" not in item:
            raise ConfigError(where, "expected a name or an object with 'name' and 'operator'")
        name = item["name"]
        if not isinstance(name, str) or not name or "," in name:
            raise ConfigError(f"{where}.name", "expected a non-empty name without commas")
        conj = item.get("conjugate")
        try:
            out[name] = DecayObservable(
                name,
                _operator(item["operator"], f"{where}.operator"),
                None if conj is None else _operator(conj, f"{where}.conjugate"),
            )
        except ConfigError:
            raise
        except ValueError as e:
            raise ConfigError(where, str(e)) from None
    return out


def _sweep(d) -> dict:
    if not isinstance(d, dict):
        raise ConfigError("sweep", "expected an object mapping parameter names to ranges")
    axes = {}
    for name, spec in d.items():
        where = f"sweep.{name}"
        if name not in PARAM_NAMES:
            raise ConfigError(where, f"not a dissipative parameter; known: {list(PARAM_NAMES)}")
        if not isinstance(spec, dict):
            raise ConfigError(where, "expected {start, stop, num}")
        start = _real(spec, "start", where)
        stop = _real(spec, "stop", where)
        num = spec.get("num")
        if isinstance(num, bool) or not isinstance(num, int) or not 1 <= num <= MAX_SWEEP_POINTS:
            raise ConfigError(f"{where}.num", f"expected an integer in [1, {MAX_SWEEP_POINTS}]")
        if name in ("a", "alpha", "gamma") and min(start, stop) < 0:
            raise ConfigError(where, "range must be non-negative")
        axes[name] = np.linspace(start, stop, num)
    return axes


def parse_config(doc: dict) -> ScenarioConfig:
    if not isinstance(doc, dict):
        raise ConfigError("<root>", "expected a JSON object")
    known = {"hamiltonian", "dissipative_params", "time_grid", "trotter_n", "initial_state",
             "system", "observables", "sweep", "output", "comment"}
    for k in doc:
        if k not in known:
            raise ConfigError(k, "unknown top-level field")
    for k in ("hamiltonian", "time_grid"):
        if k not in doc:
            raise ConfigError(k, "missing")
    try:
        h = _hamiltonian(doc["hamiltonian"])
    except ValueError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError("hamiltonian", str(e)) from None
    cfg = ScenarioConfig(h, _params(doc.get("dissipative_params", {})), _time_grid(doc["time_grid"]))
    if "trotter_n" in doc:
        n = doc["trotter_n"]
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ConfigError("trotter_n", "expected an integer >= 1")
        cfg.trotter_n = n
    if "initial_state" in doc:
        cfg.initial_state = _operator(doc["initial_state"], "initial_state")
    if "system" in doc:
        if doc["system"] not in SYSTEMS:
            raise ConfigError("system", f"expected one of {list(SYSTEMS)}")
        cfg.system = doc["system"]
    if "observables" in doc:
        cfg.observables = _observables(doc["observables"])
    if "sweep" in doc:
        cfg.sweep = _sweep(doc["sweep"])
    if "output" in doc:
        if not isinstance(doc["output"], str):
            raise ConfigError("output", "expected a path string")
        cfg.output = doc["output"]
    return cfg


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(str(path), f"cannot read: {e.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}:{e.lineno}:{e.colno}", e.msg) from None
    return parse_config(doc)
