from __future__ import annotations

from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, Field, field_validator, model_validator

from coblab.arithmetic.frac import Frac128, parse_angle
from coblab.arithmetic.subsequence import DEFAULT_N_MAX

SystemKind = Literal["lemma31-T", "S", "R", "two-cob", "combined", "zd-family"]


def _angle_text(v: Any, field: str) -> str:
    if isinstance(v, bool) or not isinstance(v, (str, int, float)):
        raise ValueError(f"{field} must be a decimal string, a fraction or one of golden, sqrt2")
    text = repr(v) if isinstance(v, (int, float)) else v.strip()
    parse_angle(text)
    return text


class ChainConfig(BaseModel):
    """Subsequence and coboundary chain parameters"""

    eps: float = 1 / 16
    L: int = 2
    count: int = 50
    n_max: int = DEFAULT_N_MAX

    @field_validator("eps")
    @classmethod
    def validate_eps(cls, v: float) -> float:
        if not 0 < v < 0.25:
            raise ValueError(f"chain.eps must lie in (0, 1/4), got {v}")
        return v

    @field_validator("L", "count", "n_max")
    @classmethod
    def positive(cls, v: int, info) -> int:
        if v < 1:
            raise ValueError(f"chain.{info.field_name} must be positive, got {v}")
        return v


class SystemConfig(BaseModel):
    """System selector; k, j, l are the 1-based indices of the displayed maps"""

    kind: SystemKind
    k: int = 2
    j: int | None = None
    l: int | None = None
    constants: list[str] = Field(default_factory=list)
    placement: Literal["series", "last"] = "series"

    @field_validator("constants", mode="before")
    @classmethod
    def validate_constants(cls, v: Any) -> list[str]:
        return [_angle_text(c, "system.constants") for c in (v or [])]

    @model_validator(mode="after")
    def validate_indices(self) -> "SystemConfig":
        k, j, l = self.k, self.j, self.l
        match self.kind:
            case "S":
                ok = k >= 1
            case "lemma31-T" | "zd-family":
                ok = j is not None and 1 <= j <= k - 1
            case "R":
                ok = k >= 1
            case "two-cob":
                ok = l is not None and 1 <= l <= k
            case "combined":
                ok = j is not None and l is not None and 0 < j < l <= k - 1
        if not ok:
            raise ValueError(f"system indices k={k}, j={j}, l={l} are not admissible for {self.kind}")
        if self.kind == "zd-family" and not self.constants:
            raise ValueError("system.constants must list at least one constant for zd-family")
        return self

    @property
    def chain_length_needed(self) -> int:
        """Chain length the conjugacy of this system consumes."""
        match self.kind:
            case "lemma31-T" | "zd-family":
                return self.k - self.j
            case "R":
                return self.k
            case "two-cob":
                return max(self.k - self.l, 1)
            case "combined":
                return self.k - self.j
        return 0


class BirkhoffConfig(BaseModel):
    characters: list[list[int]]
    starts: int | list[list[str]] = 5
    checkpoints: list[int] = Field(default_factory=lambda: [10**3, 10**4, 10**5])
    # |avg| of nontrivial characters and spread across starts, at the last checkpoint
    max_abs: float = Field(default=0.01, gt=0)
    spread: float = Field(default=0.02, gt=0)

    @model_validator(mode="after")
    def validate_probe(self) -> "BirkhoffConfig":
        count = self.starts if isinstance(self.starts, int) else len(self.starts)
        if count < 2:
            raise ValueError("verify.birkhoff needs at least two starts")
        if not self.characters:
            raise ValueError("verify.birkhoff.characters must not be empty")
        cps = self.checkpoints
        if not cps or cps[0] < 1 or any(b <= a for a, b in zip(cps, cps[1:])):
            raise ValueError("verify.birkhoff.checkpoints must be positive and strictly increasing")
        return self


class VerifyConfig(BaseModel):
    """Probe selection; an empty selection yields an empty report"""

    samples: int = 10_000
    coboundary: bool = True
    conjugacy: bool = True
    eigenfunction: list[tuple[int, int]] = Field(default_factory=list)
    commutation: bool = False
    l2: bool = True
    uniform_cauchy: tuple[int, int] | None = None
    sup_growth: list[int] = Field(default_factory=list)
    cesaro: list[int] = Field(default_factory=list)
    birkhoff: BirkhoffConfig | None = None

    @field_validator("samples")
    @classmethod
    def validate_samples(cls, v: int) -> int:
        if v < 1:
            raise ValueError("verify.samples must be positive")
        return v

    @model_validator(mode="after")
    def validate_sequences(self) -> "VerifyConfig":
        for name in ("sup_growth", "cesaro"):
            values = getattr(self, name)
            if any(b <= a for a, b in zip(values, values[1:])):
                raise ValueError(f"verify.{name} must be strictly increasing")
        if self.cesaro and self.cesaro[0] < 1:
            raise ValueError("verify.cesaro values must be positive")
        if self.uniform_cauchy and not 0 <= self.uniform_cauchy[0] < self.uniform_cauchy[1]:
            raise ValueError("verify.uniform_cauchy must be a pair M < M'")
        return self


class PairConfig(BaseModel):
    x: list[str]
    y: list[str]

    @field_validator("x", "y", mode="before")
    @classmethod
    def validate_point(cls, v: Any, info) -> list[str]:
        return [_angle_text(c, f"rpk.pairs.{info.field_name}") for c in v]


class FiniteConfig(BaseModel):
    """A finite system from a JSON file or a cyclic rotation of Z_size"""

    path: str | None = None
    size: int | None = None
    shift: int = 1
    k: int = 1
    delta: float = 0.05
    n_bound: int = 16

    @model_validator(mode="after")
    def validate_source(self) -> "FiniteConfig":
        if (self.path is None) == (self.size is None):
            raise ValueError("rpk.finite needs exactly one of path or size")
        if self.path is not None and not Path(self.path).expanduser().is_file():
            raise ValueError(f"rpk.finite.path does not exist: {self.path}")
        return self


class RPKConfig(BaseModel):
    k: int = 1
    delta: float = 0.05
    n_bound: int = 16
    grid: int = 100
    pairs: list[PairConfig] = Field(default_factory=list)
    project: bool = False
    finite: FiniteConfig | None = None

    @field_validator("delta")
    @classmethod
    def validate_delta(cls, v: float) -> float:
        if v <= 0:
            raise ValueError("rpk.delta must be positive")
        return v


class ExperimentConfig(BaseModel):
    """Complete experiment schema"""

    name: str = "experiment"
    alpha: str
    beta: str = "sqrt2"
    chain: ChainConfig = Field(default_factory=ChainConfig)
    system: SystemConfig
    verify: VerifyConfig = Field(default_factory=VerifyConfig)
    rpk: RPKConfig = Field(default_factory=RPKConfig)
    output: str = "out"

    @field_validator("alpha", "beta", mode="before")
    @classmethod
    def validate_angle(cls, v: Any, info) -> str:
        return _angle_text(v, info.field_name)

    @model_validator(mode="after")
    def validate_experiment(self) -> "ExperimentConfig":
        needed = self.system.chain_length_needed
        if self.verify.conjugacy and self.chain.L < needed:
            raise ValueError(
                f"chain.L={self.chain.L} is too short for the {self.system.kind} conjugacy (needs {needed})"
            )
        if self.verify.sup_growth and self.verify.sup_growth[-1] > self.chain.count:
            raise ValueError(f"verify.sup_growth exceeds chain.count={self.chain.count}")
        if self.verify.uniform_cauchy and self.verify.uniform_cauchy[1] > self.chain.count:
            raise ValueError(f"verify.uniform_cauchy exceeds chain.count={self.chain.count}")
        dim = self.dim
        if self.verify.birkhoff:
            for m in self.verify.birkhoff.characters:
                if len(m) != dim:
                    raise ValueError(f"character {m} does not match system dimension {dim}")
            if isinstance(self.verify.birkhoff.starts, list):
                for p in self.verify.birkhoff.starts:
                    if len(p) != dim:
                        raise ValueError(f"start {p} does not match system dimension {dim}")
        for pair in self.rpk.pairs:
            if len(pair.x) != dim or len(pair.y) != dim:
                raise ValueError(f"rpk pair does not match system dimension {dim}")
        if self.verify.eigenfunction and self.system.kind not in ("R", "two-cob"):
            raise ValueError("verify.eigenfunction applies to the R and two-cob systems only")
        return self

    @property
    def alpha_value(self) -> Frac128:
        return parse_angle(self.alpha)

    @property
    def beta_value(self) -> Frac128:
        return parse_angle(self.beta)

    @property
    def dim(self) -> int:
        s = self.system
        if s.kind in ("R", "two-cob"):
            return s.k + 1
        if s.kind == "combined":
            return 2 * s.k
        return s.k
