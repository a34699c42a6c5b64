"""Problem configuration files (JSON) and their validation.

Schema (all lengths refer to the problem size T):

    {
      "T": 10,                      # integer >= 2
      "p": 2.0,                     # constant exponent, or a list of T+2
                                    # values, or {"periodic": [2, 3, 4]}
      "family": "example1",         # "example1" or "power"
      "m": 4.0,                     # growth exponent, must exceed max p
      "scale": 0.5,                 # example1 only; multiplies f and envelope
      "a": 1.0, "b": 1e-6,          # power only; scalars or length-T lists
      "envelope": "auto",           # or {"phi1": [...], "phi2": [...],
                                    #     "psi1": [...], "psi2": [...]}
      "tolerances": {"grad_tol": 1e-9},   # optional overrides
      "seed": 0
    }

Every exponent entry must be >= 2; the built-in families derive their exact
envelopes automatically ("auto").  No free-form expressions are accepted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .energy import GrowthEnvelope, Nonlinearity, ProblemSpec, ToleranceSet
from .errors import ConfigError
from .families import FAMILY_BUILDERS
from .grid import ExponentMap

__all__ = ["ProblemConfig", "load_problem"]

_TOP_KEYS = {"T", "p", "family", "m", "scale", "a", "b", "envelope", "tolerances", "seed"}
_TOL_KEYS = {"grad_tol", "residual_tol", "quad_tol", "positivity_margin"}
_ENV_KEYS = {"phi1", "phi2", "psi1", "psi2"}


@dataclass
class ProblemConfig:
    """Validated problem configuration; ``build()`` produces the ProblemSpec."""

    T: int
    p: object
    family: str
    m: float | None = None
    scale: float = 1.0
    a: object = None
    b: object = None
    envelope: object = "auto"
    tolerances: dict = field(default_factory=dict)
    seed: int = 0

    @classmethod
    def from_dict(cls, raw: dict) -> "ProblemConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config root must be a JSON object")
        unknown = set(raw) - _TOP_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        for key in ("T", "p", "family"):
            if key not in raw:
                raise ConfigError(f"missing required config key {key!r}")
        if not isinstance(raw["T"], int) or isinstance(raw["T"], bool) or raw["T"] < 2:
            raise ConfigError("field 'T': must be an integer >= 2")
        family = raw["family"]
        if family not in FAMILY_BUILDERS:
            raise ConfigError(
                f"field 'family': unknown family {family!r}; "
                f"expected one of {sorted(FAMILY_BUILDERS)}"
            )
        if "m" not in raw:
            raise ConfigError(f"family {family!r} requires the growth exponent 'm'")
        tol = raw.get("tolerances", {})
        if not isinstance(tol, dict):
            raise ConfigError("field 'tolerances': must be an object")
        bad = set(tol) - _TOL_KEYS
        if bad:
            raise ConfigError(f"field 'tolerances': unknown entries {sorted(bad)}")
        seed = raw.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise ConfigError("field 'seed': must be an integer")
        return cls(
            T=raw["T"],
            p=raw["p"],
            family=family,
            m=float(raw["m"]),
            scale=float(raw.get("scale", 1.0)),
            a=raw.get("a"),
            b=raw.get("b"),
            envelope=raw.get("envelope", "auto"),
            tolerances=dict(tol),
            seed=seed,
        )

    @classmethod
    def load(cls, path) -> "ProblemConfig":
        text = Path(path).read_text()
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(
                f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from exc
        try:
            return cls.from_dict(raw)
        except ConfigError as exc:
            raise ConfigError(f"{path}: {exc}") from exc

    # -- assembly ----------------------------------------------------------

    def _exponents(self) -> ExponentMap:
        p = self.p
        try:
            if isinstance(p, (int, float)) and not isinstance(p, bool):
                return ExponentMap.constant(self.T, float(p))
            if isinstance(p, list):
                if len(p) != self.T + 2:
                    raise ConfigError(
                        f"field 'p': explicit list must have length T+2 = {self.T + 2}, got {len(p)}"
                    )
                return ExponentMap(p)
            if isinstance(p, dict) and set(p) == {"periodic"}:
                return ExponentMap.periodic(self.T, p["periodic"])
        except ValueError as exc:
            raise ConfigError(f"field 'p': {exc}") from exc
        raise ConfigError(
            "field 'p': expected a number, a list of T+2 values, or {\"periodic\": [...]}"
        )

    def _nonlinearity(self) -> Nonlinearity:
        try:
            if self.family == "example1":
                nl = FAMILY_BUILDERS["example1"](self.T, self.m, self.scale)
            else:
                if self.a is None or self.b is None:
                    raise ConfigError("family 'power' requires coefficients 'a' and 'b'")
                nl = FAMILY_BUILDERS["power"](self.T, self.m, self.a, self.b)
        except (ValueError, ConfigError) as exc:
            raise ConfigError(f"family {self.family!r}: {exc}") from exc

        if self.envelope == "auto":
            return nl
        if isinstance(self.envelope, dict) and set(self.envelope) == _ENV_KEYS:
            try:
                env = GrowthEnvelope(self.m, *(self.envelope[k] for k in ("phi1", "phi2", "psi1", "psi2")))
            except ValueError as exc:
                raise ConfigError(f"field 'envelope': {exc}") from exc
            if env.T != self.T:
                raise ConfigError(f"field 'envelope': sequences must have length T = {self.T}")
            return Nonlinearity(nl.evaluator, env, nl.primitive, nl.name)
        raise ConfigError(
            "field 'envelope': expected \"auto\" or an object with keys phi1, phi2, psi1, psi2"
        )

    def build(self) -> ProblemSpec:
        """Assemble and validate the full problem."""
        exponents = self._exponents()
        nonlinearity = self._nonlinearity()
        tolerances = ToleranceSet(**{k: float(v) for k, v in self.tolerances.items()})
        try:
            return ProblemSpec(self.T, exponents, nonlinearity, tolerances)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def echo(self) -> dict:
        """Canonical JSON-serializable form for report embedding."""
        out = {
            "T": self.T,
            "p": self.p,
            "family": self.family,
            "m": self.m,
            "envelope": self.envelope,
            "tolerances": dict(sorted(self.tolerances.items())),
            "seed": self.seed,
        }
        if self.family == "example1":
            out["scale"] = self.scale
        else:
            out["a"] = self.a
            out["b"] = self.b
        return out

    def with_overrides(self, **fields) -> "ProblemConfig":
        """Copy with the given fields replaced (used by sweeps and CLI flags)."""
        data = {
            "T": self.T, "p": self.p, "family": self.family, "m": self.m,
            "scale": self.scale, "a": self.a, "b": self.b,
            "envelope": self.envelope, "tolerances": dict(self.tolerances),
            "seed": self.seed,
        }
        data.update(fields)
        cfg = ProblemConfig(**data)
        if not isinstance(cfg.T, (int, np.integer)) or cfg.T < 2:
            raise ConfigError("field 'T': must be an integer >= 2")
        cfg.T = int(cfg.T)
        return cfg


def load_problem(path) -> ProblemSpec:
    """Load and validate a problem configuration file into a ProblemSpec."""
    return ProblemConfig.load(path).build()
