"""Run configuration read from an INI-style file.

Grammar (``configparser`` dialect, ``;`` or ``#`` comments, keys are
case-sensitive)::

    ; exactly one of the four potential sections
    [potential]        V0, V1, beta, q = 1, m0 = 1
    [manning_rosen]    A, alpha, b, m0 = 1
    [hulthen]          V0, beta, m0 = 1
    [coulomb]          zeta, beta, m0 = 1

    [quantum]          equation = kg | dirac
                       n = <int list>
                       ell = <int list>            (kg)
                       kappa = <int list>          (dirac, no zeros)
                       component = upper | lower   (dirac, default upper)
    [solver]           grid = 512, tol = 1e-12, margin = 1e-9
    [units]            hbar = 1, c = 1
    [output]           format = json | csv, path = - (stdout)
    [wavefunction]     r_min = 0.1, r_max = 30, points = 200,
                       n = <int>, angular = <int>   (default: first of each list)
    [sweep]            param = <potential field>, values = <float list>

An int list is comma separated and may contain inclusive ranges ``a..b``,
e.g. ``n = 0..2, 5``.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from .core import NATURAL, PotentialSpec, QuantumNumbers, UnitSystem, coulomb_spec, hulthen_spec, manning_rosen_spec
from .spectrum import SolverConfig

POTENTIAL_SECTIONS = {
    "potential": (("V0", "V1", "beta"), {"q": 1.0, "m0": 1.0}),
    "manning_rosen": (("A", "alpha", "b"), {"m0": 1.0}),
    "hulthen": (("V0", "beta"), {"m0": 1.0}),
    "coulomb": (("zeta", "beta"), {"m0": 1.0}),
}
KNOWN_SECTIONS = set(POTENTIAL_SECTIONS) | {"quantum", "solver", "units", "output", "wavefunction", "sweep"}


class ConfigError(ValueError):
    """Invalid configuration; the message names the field and, when known, the line."""


@dataclass(frozen=True)
class WavefunctionGrid:
    r_min: float = 0.1
    r_max: float = 30.0
    points: int = 200
    n: Optional[int] = None
    angular: Optional[int] = None

    def radii(self) -> np.ndarray:
        if self.points == 1:
            return np.array([self.r_min])
        return np.linspace(self.r_min, self.r_max, self.points)


@dataclass(frozen=True)
class RunConfig:
    potential_kind: str
    potential_params: Dict[str, float]
    equation: str = "kg"
    n_values: Tuple[int, ...] = (0,)
    angular_values: Tuple[int, ...] = (0,)
    component: str = "upper"
    solver: SolverConfig = SolverConfig()
    units: UnitSystem = NATURAL
    output_format: str = "json"
    output_path: str = "-"
    wavefunction: WavefunctionGrid = WavefunctionGrid()
    sweep_param: Optional[str] = None
    sweep_values: Tuple[float, ...] = ()

    def spec(self, overrides: Optional[Dict[str, float]] = None) -> PotentialSpec:
        p = dict(self.potential_params)
        p.update(overrides or {})
        builders = {
            "potential": lambda: PotentialSpec(p["V0"], p["V1"], p["beta"], p["q"], p["m0"]),
            "manning_rosen": lambda: manning_rosen_spec(p["A"], p["alpha"], p["b"], p["m0"]),
            "hulthen": lambda: hulthen_spec(p["V0"], p["beta"], p["m0"]),
            "coulomb": lambda: coulomb_spec(p["zeta"], p["beta"], p["m0"]),
        }
        return builders[self.potential_kind]()

    def quantum(self, n: int, angular: int) -> QuantumNumbers:
        if self.equation == "kg":
            return QuantumNumbers.kg(n, angular)
        return QuantumNumbers.dirac(n, angular, self.component)

    def pairs(self) -> List[Tuple[int, int]]:
        """(n, angular) in n-major, angular-minor order."""
        return [(n, a) for n in self.n_values for a in self.angular_values]


class _Located:
    """Maps (section, key) to the 1-based line where it was defined."""

    def __init__(self, text: str):
        self.lines: Dict[Tuple[Optional[str], Optional[str]], int] = {}
        section = None
        for i, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            m = re.match(r"\[([^\]]+)\]", line)
            if m:
                section = m.group(1).strip()
                self.lines[(section, None)] = i
                continue
            m = re.match(r"([^=:;#\s][^=:]*?)\s*[=:]", line)
            if m and section:
                self.lines[(section, m.group(1).strip())] = i

    def where(self, section: str, key: Optional[str] = None) -> str:
        name = f"[{section}]" + (f" {key}" if key else "")
        line = self.lines.get((section, key))
        return f"{name} (line {line})" if line else name


def parse_int_list(text: str) -> Tuple[int, ...]:
    out: List[int] = []
    for part in (p.strip() for p in text.split(",")):
        if not part:
            continue
        m = re.fullmatch(r"(-?\d+)\s*\.\.\s*(-?\d+)", part)
        if m:
            a, b = int(m.group(1)), int(m.group(2))
            if b < a:
                raise ValueError(f"range {part!r} is empty")
            out.extend(range(a, b + 1))
        else:
            out.append(int(part))
    return tuple(out)


def parse_float_list(text: str) -> Tuple[float, ...]:
    return tuple(float(p) for p in (s.strip() for s in text.split(",")) if p)


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config(text)


def parse_config(text: str) -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"))
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"syntax error: {exc}") from exc
    loc = _Located(text)

    unknown = [s for s in parser.sections() if s not in KNOWN_SECTIONS]
    if unknown:
        raise ConfigError(f"unknown section {loc.where(unknown[0])}")

    def get(section, key, conv, default=None, required=False):
        if not parser.has_option(section, key):
            if required:
                raise ConfigError(f"missing required field [{section}] {key}")
            return default
        raw = parser.get(section, key)
        try:
            return conv(raw)
        except ValueError as exc:
            raise ConfigError(f"bad value {raw!r} for {loc.where(section, key)}: {exc}") from exc

    def check_keys(section, allowed):
        if parser.has_section(section):
            for key in parser.options(section):
                if key not in allowed:
                    raise ConfigError(f"unknown field {loc.where(section, key)}")

    blocks = [s for s in POTENTIAL_SECTIONS if parser.has_section(s)]
    if len(blocks) != 1:
        raise ConfigError(
            f"exactly one potential section is required ({', '.join(POTENTIAL_SECTIONS)}); found {len(blocks)}"
        )
    kind = blocks[0]
    required, optional = POTENTIAL_SECTIONS[kind]
    check_keys(kind, set(required) | set(optional))
    params = {k: get(kind, k, float, required=True) for k in required}
    params.update({k: get(kind, k, float, d) for k, d in optional.items()})

    check_keys("quantum", {"equation", "n", "ell", "kappa", "component"})
    equation = get("quantum", "equation", str, "kg").strip().lower()
    if equation not in ("kg", "dirac"):
        raise ConfigError(f"{loc.where('quantum', 'equation')} must be kg or dirac, got {equation!r}")
    n_values = get("quantum", "n", parse_int_list, (0,))
    ang_key = "ell" if equation == "kg" else "kappa"
    other = "kappa" if equation == "kg" else "ell"
    if parser.has_option("quantum", other):
        raise ConfigError(f"{loc.where('quantum', other)} does not apply to equation = {equation}")
    default_ang = (0,) if equation == "kg" else (1,)
    angular = get("quantum", ang_key, parse_int_list, default_ang)
    component = get("quantum", "component", str, "upper").strip().lower()
    if component not in ("upper", "lower"):
        raise ConfigError(f"{loc.where('quantum', 'component')} must be upper or lower")
    for name, vals in (("n", n_values), (ang_key, angular)):
        if not vals:
            raise ConfigError(f"{loc.where('quantum', name)} is an empty range")
    if any(n < 0 for n in n_values):
        raise ConfigError(f"{loc.where('quantum', 'n')} must be non-negative")
    if equation == "kg" and any(a < 0 for a in angular):
        raise ConfigError(f"{loc.where('quantum', 'ell')} must be non-negative")
    if equation == "dirac" and 0 in angular:
        raise ConfigError(f"{loc.where('quantum', 'kappa')} must not contain 0")

    check_keys("solver", {"grid", "tol", "margin"})
    base = SolverConfig()
    try:
        solver = SolverConfig(
            grid=get("solver", "grid", int, base.grid),
            tol=get("solver", "tol", float, base.tol),
            margin=get("solver", "margin", float, base.margin),
        )
    except ValueError as exc:
        raise ConfigError(f"[solver]: {exc}") from exc

    check_keys("units", {"hbar", "c"})
    try:
        units = UnitSystem(get("units", "hbar", float, 1.0), get("units", "c", float, 1.0))
    except ValueError as exc:
        raise ConfigError(f"[units]: {exc}") from exc

    check_keys("output", {"format", "path"})
    fmt = get("output", "format", str, "json").strip().lower()
    if fmt not in ("json", "csv"):
        raise ConfigError(f"{loc.where('output', 'format')} must be json or csv")
    out_path = get("output", "path", str, "-").strip()

    check_keys("wavefunction", {"r_min", "r_max", "points", "n", "angular"})
    wf = WavefunctionGrid(
        r_min=get("wavefunction", "r_min", float, 0.1),
        r_max=get("wavefunction", "r_max", float, 30.0),
        points=get("wavefunction", "points", int, 200),
        n=get("wavefunction", "n", int),
        angular=get("wavefunction", "angular", int),
    )
    if wf.points < 1:
        raise ConfigError(f"{loc.where('wavefunction', 'points')} must be at least 1")
    if not 0 < wf.r_min <= wf.r_max:
        raise ConfigError("[wavefunction] needs 0 < r_min <= r_max")

    check_keys("sweep", {"param", "values"})
    sweep_param = get("sweep", "param", str)
    sweep_values = get("sweep", "values", parse_float_list, ())
    if parser.has_section("sweep"):
        if sweep_param not in set(required) | set(optional):
            raise ConfigError(f"{loc.where('sweep', 'param')} must name a field of [{kind}], got {sweep_param!r}")
        if not sweep_values:
            raise ConfigError(f"{loc.where('sweep', 'values')} is an empty range")

    cfg = RunConfig(
        potential_kind=kind,
        potential_params=params,
        equation=equation,
        n_values=n_values,
        angular_values=angular,
        component=component,
        solver=solver,
        units=units,
        output_format=fmt,
        output_path=out_path,
        wavefunction=wf,
        sweep_param=sweep_param,
        sweep_values=sweep_values,
    )
    try:
        cfg.spec()
    except ValueError as exc:
        raise ConfigError(f"[{kind}]: {exc}") from exc
    return cfg


def with_overrides(cfg: RunConfig, *, equation=None, tol=None, fmt=None, out=None) -> RunConfig:
    """Apply command-line flags on top of file values."""
    changes = {}
    if equation is not None and equation != cfg.equation:
        # the angular list keeps its values; kappa = 0 is rejected below
        changes["equation"] = equation
        if equation == "dirac" and 0 in cfg.angular_values:
            raise ConfigError("--equation dirac needs a kappa list without 0; set [quantum] kappa")
    if tol is not None:
        if not tol > 0:
            raise ConfigError(f"--tol must be positive, got {tol}")
        changes["solver"] = replace(cfg.solver, tol=tol)
    if fmt is not None:
        changes["output_format"] = fmt
    if out is not None:
        changes["output_path"] = out
    return replace(cfg, **changes)


DEFAULT_CONFIG = """\
[potential]
V0 = 1.0
V1 = 0.5
beta = 0.1

[quantum]
equation = kg
n = 0..2
ell = 0, 1
"""
