"""JSON run configuration for the command-line tool."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from typing import Any

from .algebra import LossFunction, UsageError, loss_from_spec
from .laws import AngularMeasure, kappa_from_spec
from .measure import Integrand, MeasureSpace, integrand_from_json, space_from_spec
from .supmeasure import SupMeasureSpec


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending line or field."""


def _default_kappa():
    return {"kind": "discrete", "atoms": [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]],
            "probs": [0.5, 0.3, 0.2]}


def _default_integrands():
    return [{"kind": "exp_decay", "rate": 1.0, "support": [[0.0, 20.0]]}]


@dataclass
class RunConfig:
    seed: int = 20240601
    alpha: float = 2.0
    sigma: float = 1.0
    loss: dict = field(default_factory=lambda: {"kind": "euclidean", "dimension": 2})
    kappa: dict = field(default_factory=_default_kappa)
    measure: dict = field(default_factory=lambda: {"intervals": [[None, None]],
                                                   "density": {"kind": "lebesgue"}})
    integrands: list = field(default_factory=_default_integrands)
    backend: str = "series"
    replications: int = 20000
    epsilon_trunc: float = 1e-4
    level: int = 8
    times: list = field(default_factory=lambda: [1.0, 2.0])
    process_kernels: str = "cumulative"
    output: str = "out"
    plots: bool = True
    verify: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    # ---- module-level objects

    def build_loss(self) -> LossFunction:
        return _field("loss", lambda: loss_from_spec(self.loss))

    def build_kappa(self, loss: LossFunction | None = None) -> AngularMeasure:
        loss = self.build_loss() if loss is None else loss
        return _field("kappa", lambda: kappa_from_spec(loss, self.kappa))

    def build_space(self) -> MeasureSpace:
        return _field("measure", lambda: space_from_spec(self.measure))

    def build_spec(self) -> SupMeasureSpec:
        loss = self.build_loss()
        return _field("kappa", lambda: SupMeasureSpec(loss, self.alpha, self.build_kappa(loss),
                                                      self.build_space()))

    def build_integrands(self) -> list[Integrand]:
        out = []
        for i, spec in enumerate(self.integrands):
            out.append(_field(f"integrands[{i}]", lambda spec=spec: integrand_from_json(spec)))
        return out

    def validate(self) -> "RunConfig":
        if not (isinstance(self.seed, int) and 0 <= self.seed < 2 ** 64):
            raise ConfigError("field 'seed': expected a 64-bit nonnegative integer")
        if not (isinstance(self.alpha, (int, float)) and self.alpha > 0):
            raise ConfigError("field 'alpha': expected a positive number")
        if not (isinstance(self.sigma, (int, float)) and self.sigma >= 0):
            raise ConfigError("field 'sigma': expected a nonnegative number")
        if self.backend not in ("series", "cells"):
            raise ConfigError("field 'backend': expected 'series' or 'cells'")
        if not (isinstance(self.replications, int) and self.replications > 0):
            raise ConfigError("field 'replications': expected a positive integer")
        if not (0 < self.epsilon_trunc < 1):
            raise ConfigError("field 'epsilon_trunc': expected a number in (0, 1)")
        if not (isinstance(self.level, int) and self.level >= 1):
            raise ConfigError("field 'level': expected a positive integer")
        if not self.times or any(not isinstance(t, (int, float)) or t <= 0 for t in self.times):
            raise ConfigError("field 'times': expected a nonempty list of positive numbers")
        if list(self.times) != sorted(self.times):
            raise ConfigError("field 'times': times must be increasing")
        if self.process_kernels not in ("cumulative", "integrands"):
            raise ConfigError("field 'process_kernels': expected 'cumulative' or 'integrands'")
        if not isinstance(self.integrands, list) or not self.integrands:
            raise ConfigError("field 'integrands': expected a nonempty list")
        self.build_spec()
        self.build_integrands()
        return self


def _field(name: str, build):
    try:
        return build()
    except ConfigError:
        raise
    except (UsageError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"field '{name}': {exc}") from None


_FIELD_NAMES = {f.name for f in fields(RunConfig)}


def config_from_dict(data: Any) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("line 1: the configuration must be a JSON object")
    unknown = sorted(set(data) - _FIELD_NAMES)
    if unknown:
        raise ConfigError(f"field '{unknown[0]}': unknown configuration key")
    cfg = RunConfig(**data)
    if isinstance(cfg.alpha, int) and not isinstance(cfg.alpha, bool):
        cfg.alpha = float(cfg.alpha)
    return cfg.validate()


def parse_config(text: str) -> RunConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return config_from_dict(data)


def load_config(path: str | None) -> RunConfig:
    if path is None:
        return RunConfig().validate()
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    return parse_config(text)

