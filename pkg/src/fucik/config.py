"""Experiment configuration: one TOML file describes one experiment completely."""
from __future__ import annotations

import math
import sys
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping

import tomli_w

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError, FucikError
from .problem import BC, ProblemSpec
from .weights import Weight, weight_from_config

KINDS = ("eigen", "curve", "sweep", "verify", "oracle")
SWEEPS = ("lambda1", "curve", "general")
METHODS = ("shoot", "node_match", "mountain_pass", "fem")


@dataclass(frozen=True)
class ProblemConfig:
    p: float = 2.0
    interval: tuple[float, float] = (0.0, 1.0)
    bc: str = "dirichlet"


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str = "curve"
    sweep: str = "curve"
    s_list: tuple[float, ...] = (1.0,)
    eps_list: tuple[float, ...] = ()
    method: str = "shoot"
    n_elems: int = 2048
    waypoints: int = 32
    step: float | None = None


@dataclass(frozen=True)
class OutputConfig:
    dir: str = "out"
    timings: bool = False


def _default_weight() -> dict:
    return {"kind": "constant", "c": 1.0}


@dataclass(frozen=True)
class Config:
    problem: ProblemConfig = field(default_factory=ProblemConfig)
    m: Mapping[str, Any] = field(default_factory=_default_weight)
    n: Mapping[str, Any] = field(default_factory=_default_weight)
    experiment: ExperimentConfig = field(default_factory=ExperimentConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def weight_m(self) -> Weight:
        return weight_from_config(self.m, self.problem.interval)

    def weight_n(self) -> Weight:
        return weight_from_config(self.n, self.problem.interval)

    @property
    def bc(self) -> BC:
        return BC.parse(self.problem.bc)

    def spec(self) -> ProblemSpec:
        return ProblemSpec(self.problem.p, self.problem.interval, self.bc,
                           self.weight_m(), self.weight_n())

    def with_kind(self, kind: str) -> "Config":
        return replace(self, experiment=replace(self.experiment, kind=kind))

    def to_dict(self) -> dict:
        exp = {k: (list(v) if isinstance(v, tuple) else v)
               for k, v in asdict(self.experiment).items() if v is not None}
        return {
            "problem": {"p": self.problem.p, "interval": list(self.problem.interval),
                        "bc": self.problem.bc},
            "weights": {"m": _plain(self.m), "n": _plain(self.n)},
            "experiment": exp,
            "output": asdict(self.output),
        }

    def dumps(self) -> str:
        return tomli_w.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, raw: Mapping[str, Any]) -> "Config":
        try:
            unknown = set(raw) - {"problem", "weights", "experiment", "output"}
            if unknown:
                raise ConfigError(f"unknown config tables {sorted(unknown)}")
            prob = dict(raw.get("problem", {}))
            problem = ProblemConfig(
                p=float(prob.get("p", 2.0)),
                interval=tuple(float(v) for v in prob.get("interval", (0.0, 1.0))),
                bc=BC.parse(prob.get("bc", "dirichlet")).value,
            )
            weights = dict(raw.get("weights", {}))
            m = _plain(weights.get("m", _default_weight()))
            n = _plain(weights.get("n", m))
            e = dict(raw.get("experiment", {}))
            step = e.get("step")
            experiment = ExperimentConfig(
                kind=str(e.get("kind", "curve")),
                sweep=str(e.get("sweep", "curve")),
                s_list=tuple(float(v) for v in e.get("s_list", (1.0,))),
                eps_list=tuple(float(v) for v in e.get("eps_list", ())),
                method=str(e.get("method", "shoot")),
                n_elems=int(e.get("n_elems", 2048)),
                waypoints=int(e.get("waypoints", 32)),
                step=None if step is None else float(step),
            )
            o = dict(raw.get("output", {}))
            output = OutputConfig(dir=str(o.get("dir", "out")), timings=bool(o.get("timings", False)))
        except (TypeError, ValueError) as exc:
            if isinstance(exc, FucikError):
                raise ConfigError(str(exc)) from None
            raise ConfigError(f"malformed config: {exc}") from None
        cfg = cls(problem, m, n, experiment, output)
        cfg.validate()
        return cfg

    @classmethod
    def loads(cls, text: str) -> "Config":
        try:
            return cls.from_dict(tomllib.loads(text))
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"invalid TOML: {exc}") from None

    @classmethod
    def load(cls, path: str | Path) -> "Config":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        return cls.loads(text)

    def validate(self) -> None:
        e = self.experiment
        if e.kind not in KINDS:
            raise ConfigError(f"experiment kind must be one of {KINDS}")
        if e.sweep not in SWEEPS:
            raise ConfigError(f"sweep must be one of {SWEEPS}")
        if e.method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}")
        if not (self.problem.p > 1 and math.isfinite(self.problem.p)):
            raise ConfigError(f"p must exceed 1, got {self.problem.p}")
        if len(self.problem.interval) != 2:
            raise ConfigError("interval needs two endpoints")
        if any(not s > 0 for s in e.s_list):
            raise ConfigError("s_list entries must be positive")
        for eps in e.eps_list:
            check_reciprocal_integer(eps)
        if e.n_elems < 2:
            raise ConfigError("n_elems must be at least 2")
        if e.step is not None and not e.step > 0:
            raise ConfigError("step must be positive")
        try:
            self.spec()
        except FucikError as exc:
            raise ConfigError(str(exc)) from None


def check_reciprocal_integer(eps: float) -> int:
    """Return 1/eps if it is an integer (to 1e-9 relative), else raise."""
    if not (eps > 0 and math.isfinite(eps)):
        raise ConfigError(f"epsilon must be positive, got {eps}")
    k = round(1.0 / eps)
    if k < 2 or abs(k * eps - 1.0) > 1e-9:
        raise ConfigError(f"epsilon {eps} is not the reciprocal of an integer >= 2")
    return k


def _plain(obj):
    if isinstance(obj, Mapping):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj
