from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .numerics import as_scalar
from .set_model import SampleSpec


@dataclass(frozen=True)
class Config:
    """Knobs shared by the CLI, the validation harness and the suite."""

    seed: int = 0
    extent: Fraction = Fraction(4)
    lambda_schedule: tuple = (Fraction(2), Fraction(4), Fraction(8), Fraction(16))
    densities: tuple = (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8))
    pair_budget: int = 200
    sweep_budget: int = 300
    oracle_resolution: Fraction = Fraction(1, 16)

    def __post_init__(self):
        for name in ("extent", "oracle_resolution"):
            object.__setattr__(self, name, as_scalar(getattr(self, name)))
        for name in ("lambda_schedule", "densities"):
            object.__setattr__(self, name, tuple(as_scalar(v) for v in getattr(self, name)))
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.extent <= 0 or self.oracle_resolution <= 0:
            raise ValueError("extent and oracle resolution must be positive")
        if self.pair_budget <= 0 or self.sweep_budget <= 0:
            raise ValueError("budgets must be positive")
        sched = self.lambda_schedule
        if not sched or any(v <= 0 for v in sched) or any(a >= b for a, b in zip(sched, sched[1:])):
            raise ValueError("lambda schedule must be nonempty, positive and increasing")
        dens = self.densities
        if not dens or any(v <= 0 for v in dens):
            raise ValueError("densities must be nonempty and positive")

    def pair_spec(self) -> SampleSpec:
        return SampleSpec(count=24, seed=self.seed, pairs=self.pair_budget, densities=self.densities)

    def sweep_spec(self) -> SampleSpec:
        return SampleSpec(count=self.sweep_budget, seed=self.seed, densities=self.densities)

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "extent": self.extent,
            "lambda_schedule": list(self.lambda_schedule),
            "densities": list(self.densities),
            "pair_budget": self.pair_budget,
            "sweep_budget": self.sweep_budget,
            "oracle_resolution": self.oracle_resolution,
        }
