"""Flat ``key = value`` run configuration with named presets.

One setting per line, ``#`` starts a comment, arrays are comma separated::

    scenario = scaling
    preset = nonhed
    theta_lo = 1e-3
    theta_hi = 1e-2
    eta = 0.5, 0.5, 0.5, 0.5

``J = surface`` puts the point on the singular surface, ``J = sqrt(g^2 - gamma^2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .laurent import DEFAULT_TRUNCATION
from .model import InputSpec, SystemParams, singular_coupling
from .survey import DEFAULT_CLASS_TOL, DEFAULT_FIT_RANGE

SCENARIOS = ("classify", "expand", "fisher", "scaling", "sweep")
FORMATS = ("csv", "structured")

_FIG3 = dict(g=1.0, J=0.0, gamma=1.0, kappa=1.0, eta=(0.5, 0.5, 0.5, 0.5), n_a=1.0, n_b=1.0)
PRESETS = {
    "fig3": _FIG3,
    "hed": _FIG3,
    "nonhed": {**_FIG3, "g": math.sqrt(2.0), "J": 1.0},
    "regular": {**_FIG3, "g": 2.0, "J": 0.5},
}


class ConfigError(ValueError):
    def __init__(self, message, key=None, line=None):
        where = []
        if key is not None:
            where.append(f"key {key!r}")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.key = key
        self.line = line


def _float(text):
    return float(text)


def _floats(n):
    def parse(text):
        vals = [float(v) for v in text.split(",")]
        if len(vals) == 1 and n > 1:
            vals = vals * n
        if len(vals) != n:
            raise ValueError(f"expected {n} comma-separated numbers, got {len(vals)}")
        return tuple(vals)
    return parse


def _int(text):
    v = float(text)
    if v != int(v):
        raise ValueError(f"expected an integer, got {text!r}")
    return int(v)


def _choice(options):
    def parse(text):
        if text not in options:
            raise ValueError(f"expected one of {', '.join(options)}, got {text!r}")
        return text
    return parse


def _bool(text):
    low = text.lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _J(text):
    return "surface" if text == "surface" else float(text)


def _tol(text):
    return None if text == "auto" else float(text)


def _complex16(text):
    vals = [complex(v.strip().replace(" ", "")) for v in text.split(",")]
    if len(vals) != 16:
        raise ValueError(f"expected 16 comma-separated entries (row-major 4x4), got {len(vals)}")
    return np.array(vals).reshape(4, 4)


KEYS = {
    "scenario": _choice(SCENARIOS),
    "preset": _choice(tuple(PRESETS)),
    "g": _float,
    "J": _J,
    "gamma": _floats(4),
    "kappa": _float,
    "eta": _floats(4),
    "omega0": _float,
    "bath_rates": _bool,
    "perturbation": _choice(("uniform_frequency", "custom")),
    "perturbation_matrix": _complex16,
    "s_in": _floats(8),
    "n_a": _float,
    "n_b": _float,
    "theta_lo": _float,
    "theta_hi": _float,
    "theta_count": _int,
    "theta_spacing": _choice(("log", "linear")),
    "fit_lo": _float,
    "fit_hi": _float,
    "output": str,
    "format": _choice(FORMATS),
    "rank_tol": _tol,
    "class_tol": _float,
    "truncation": _int,
    "sweep_g_lo": _float,
    "sweep_g_hi": _float,
    "sweep_j_lo": _float,
    "sweep_j_hi": _float,
    "sweep_resolution": _int,
}

DEFAULTS = {
    **_FIG3,
    "gamma": (1.0,) * 4,
    "omega0": 0.0,
    "bath_rates": False,
    "perturbation": "uniform_frequency",
    "perturbation_matrix": None,
    "s_in": (1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0),
    "theta_lo": 1e-3,
    "theta_hi": 1e-2,
    "theta_count": 20,
    "theta_spacing": "log",
    "fit_lo": DEFAULT_FIT_RANGE[0],
    "fit_hi": DEFAULT_FIT_RANGE[1],
    "output": None,
    "format": None,
    "rank_tol": None,
    "class_tol": DEFAULT_CLASS_TOL,
    "truncation": DEFAULT_TRUNCATION,
    "sweep_g_lo": 0.5,
    "sweep_g_hi": 3.0,
    "sweep_j_lo": 0.0,
    "sweep_j_hi": 3.0,
    "sweep_resolution": 50,
}


@dataclass(frozen=True)
class RunConfig:
    scenario: str
    params: SystemParams
    preset: str | None = None
    perturbation: str = "uniform_frequency"
    perturbation_matrix: np.ndarray | None = None
    s_in: tuple = DEFAULTS["s_in"]
    n_a: float = 1.0
    n_b: float = 1.0
    theta_grid: tuple = (1e-3, 1e-2, 20, "log")
    fit_range: tuple = DEFAULT_FIT_RANGE
    output: str | None = None
    format: str = "csv"
    rank_tol: float | None = None
    class_tol: float = DEFAULT_CLASS_TOL
    truncation: int = DEFAULT_TRUNCATION
    sweep_g: tuple = (0.5, 3.0)
    sweep_J: tuple = (0.0, 3.0)
    sweep_resolution: int = 50
    raw: dict = field(default_factory=dict, compare=False, repr=False)

    def input_spec(self) -> InputSpec:
        return InputSpec(S_in=np.array(self.s_in), n_A=self.n_a, n_B=self.n_b)

    def with_scenario(self, scenario: str) -> "RunConfig":
        return replace(self, scenario=scenario)

    def echo(self) -> dict:
        """Resolved settings as plain JSON-ready values, keys sorted."""
        p = self.params
        out = {
            "scenario": self.scenario,
            "preset": self.preset,
            "g": p.g, "J": p.J, "gamma": list(p.gamma), "kappa": p.kappa,
            "eta": list(p.eta), "omega0": p.omega0,
            "perturbation": self.perturbation,
            "s_in": list(self.s_in), "n_a": self.n_a, "n_b": self.n_b,
            "theta_grid": list(self.theta_grid),
            "fit_range": list(self.fit_range),
            "rank_tol": self.rank_tol, "class_tol": self.class_tol,
            "truncation": self.truncation,
            "format": self.format,
        }
        if self.perturbation_matrix is not None:
            m = np.asarray(self.perturbation_matrix).ravel()
            out["perturbation_matrix"] = [[float(z.real), float(z.imag)] for z in m]
        if self.scenario == "sweep":
            out.update(sweep_g=list(self.sweep_g), sweep_J=list(self.sweep_J),
                       sweep_resolution=self.sweep_resolution)
        return dict(sorted(out.items()))


def _read_pairs(text: str):
    pairs = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError("unknown key", key, lineno)
        if key in pairs:
            raise ConfigError("duplicate key", key, lineno)
        try:
            pairs[key] = (KEYS[key](value), lineno)
        except ValueError as exc:
            raise ConfigError(str(exc), key, lineno) from None
    return pairs


def parse_config(text: str = "", scenario: str | None = None,
                 preset: str | None = None, output_format: str | None = None) -> RunConfig:
    """Validate ``text`` and apply defaults.

    Precedence, lowest first: built-in defaults, preset, file keys. An explicit
    ``scenario``/``preset``/``output_format`` argument (from the command line)
    overrides the file.
    """
    pairs = _read_pairs(text)
    if scenario is not None:
        pairs["scenario"] = (KEYS["scenario"](scenario), None)
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}", "preset")
        pairs["preset"] = (preset, None)
    if output_format is not None:
        pairs["format"] = (KEYS["format"](output_format), None)
    if "scenario" not in pairs:
        raise ConfigError("a scenario is required", "scenario")

    values = dict(DEFAULTS)
    preset_name = pairs.get("preset", (None, None))[0]
    if preset_name is not None:
        for k, v in PRESETS[preset_name].items():
            values[k] = v
    line_of = {}
    for k, (v, lineno) in pairs.items():
        values[k] = v
        line_of[k] = lineno

    def fail(msg, key):
        raise ConfigError(msg, key, line_of.get(key))

    gamma = values["gamma"]
    gamma = _floats(4)(str(gamma)) if isinstance(gamma, float) else tuple(gamma)
    J = values["J"]
    if J == "surface":
        if len(set(gamma)) != 1:
            fail("J = surface needs balanced gamma", "J")
        try:
            J = singular_coupling(values["g"], gamma[0])
        except ValueError as exc:
            fail(str(exc), "J")
    try:
        if values["bath_rates"]:
            params = SystemParams.from_bath_rates(values["g"], J, values["kappa"],
                                                  values["eta"], values["omega0"])
        else:
            params = SystemParams(g=values["g"], J=J, gamma=gamma, kappa=values["kappa"],
                                  eta=values["eta"], omega0=values["omega0"])
    except ValueError as exc:
        fail(str(exc), "kappa" if "kappa" in str(exc) else "eta")

    if values["theta_lo"] <= 0:
        fail("theta_lo must be positive", "theta_lo")
    if not values["theta_lo"] < values["theta_hi"]:
        fail("theta_lo must be smaller than theta_hi", "theta_lo")
    if values["theta_count"] < 2:
        fail("theta_count must be at least 2", "theta_count")
    if not 0 < values["fit_lo"] < values["fit_hi"]:
        fail("need 0 < fit_lo < fit_hi", "fit_lo")
    if values["rank_tol"] is not None and values["rank_tol"] <= 0:
        fail("rank_tol must be positive", "rank_tol")
    if values["class_tol"] <= 0:
        fail("class_tol must be positive", "class_tol")
    if values["truncation"] < 0:
        fail("truncation must be nonnegative", "truncation")
    if values["sweep_resolution"] < 1:
        fail("sweep_resolution must be positive", "sweep_resolution")
    if not values["sweep_g_lo"] <= values["sweep_g_hi"]:
        fail("sweep_g_lo must not exceed sweep_g_hi", "sweep_g_lo")
    if not values["sweep_j_lo"] <= values["sweep_j_hi"]:
        fail("sweep_j_lo must not exceed sweep_j_hi", "sweep_j_lo")
    if values["n_a"] < 0 or values["n_b"] < 0:
        fail("thermal occupations must be nonnegative", "n_a" if values["n_a"] < 0 else "n_b")
    if values["perturbation"] == "custom" and values["perturbation_matrix"] is None:
        fail("custom perturbation needs perturbation_matrix", "perturbation")

    scen = values["scenario"]
    fmt = values["format"]
    if fmt is None:
        fmt = "csv" if scen in ("fisher", "scaling", "sweep") else "structured"
    elif fmt == "csv" and scen in ("classify", "expand"):
        fail(f"scenario {scen!r} only has structured output", "format")

    return RunConfig(
        scenario=scen,
        params=params,
        preset=preset_name,
        perturbation=values["perturbation"],
        perturbation_matrix=values["perturbation_matrix"],
        s_in=tuple(values["s_in"]),
        n_a=float(values["n_a"]),
        n_b=float(values["n_b"]),
        theta_grid=(values["theta_lo"], values["theta_hi"], values["theta_count"],
                    values["theta_spacing"]),
        fit_range=(values["fit_lo"], values["fit_hi"]),
        output=values["output"],
        format=fmt,
        rank_tol=values["rank_tol"],
        class_tol=values["class_tol"],
        truncation=values["truncation"],
        sweep_g=(values["sweep_g_lo"], values["sweep_g_hi"]),
        sweep_J=(values["sweep_j_lo"], values["sweep_j_hi"]),
        sweep_resolution=values["sweep_resolution"],
        raw={k: v for k, (v, _) in pairs.items()},
    )
