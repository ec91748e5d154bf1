"""Solution families, free parameters and solvability reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from ..qmatrix import DimensionError, QMatrix

# Absolute truncation floor for pseudoinverses inside solver cascades.
# Reduction intermediates frequently vanish in exact arithmetic; ranking
# their rounding noise would amplify it by 1/eps, so anything below
# CASCADE_EPS times the instance scale is treated as zero.
CASCADE_EPS = 256.0 * float(np.finfo(np.float64).eps)


def cascade_floor(*mats) -> float:
    return CASCADE_EPS * max([1.0] + [m.norm() for m in mats])


@dataclass(frozen=True)
class FreeParam:
    """One free parameter slot of a solution family.

    When eta is set the parameter ranges over eta-Hermitian matrices;
    assemble() symmetrizes whatever is supplied for that slot.
    """

    name: str
    shape: tuple
    eta: Optional[str] = None


@dataclass(frozen=True)
class Condition:
    """Residual test of a single "...= 0" statement."""

    name: str
    residual: float
    threshold: float
    passed: bool


@dataclass(frozen=True)
class RankCondition:
    """Integer rank equality, both sides recorded for auditability."""

    name: str
    lhs: int
    rhs: int
    passed: bool


def _symmetrize_param(value: QMatrix, eta):
    if eta is None:
        return value
    return (value + value.eta_conj_transpose(eta)) * 0.5


def residual_condition(name: str, value: QMatrix, threshold: float) -> Condition:
    r = value.norm()
    return Condition(name, r, threshold, r <= threshold)


def rank_condition(name: str, lhs: int, rhs: int) -> RankCondition:
    return RankCondition(name, lhs, rhs, lhs == rhs)


@dataclass
class SolvabilityReport:
    """Outcome of both certificate forms for one instance.

    ``consistent`` requires all three lists to pass; ``forms_agree``
    records whether the residual-based verdict and the rank-based
    verdict coincide (they are equivalent in exact arithmetic).
    """

    mp_conditions: list = field(default_factory=list)
    rank_conditions: list = field(default_factory=list)
    compat_conditions: list = field(default_factory=list)
    consistent: bool = True
    forms_agree: bool = True

    @classmethod
    def build(cls, compat, mp, ranks) -> "SolvabilityReport":
        compat_ok = all(c.passed for c in compat)
        mp_ok = all(c.passed for c in mp)
        rank_ok = all(c.passed for c in ranks)
        return cls(
            mp_conditions=list(mp),
            rank_conditions=list(ranks),
            compat_conditions=list(compat),
            consistent=compat_ok and mp_ok and rank_ok,
            forms_agree=(compat_ok and mp_ok) == (compat_ok and rank_ok),
        )

    def failing(self) -> list:
        names = [c.name for c in self.compat_conditions if not c.passed]
        names += [c.name for c in self.mp_conditions if not c.passed]
        names += [c.name for c in self.rank_conditions if not c.passed]
        return names

    def to_dict(self) -> dict:
        return {
            "consistent": self.consistent,
            "forms_agree": self.forms_agree,
            "compat_conditions": [
                {"name": c.name, "residual": c.residual,
                 "threshold": c.threshold, "passed": c.passed}
                for c in self.compat_conditions],
            "mp_conditions": [
                {"name": c.name, "residual": c.residual,
                 "threshold": c.threshold, "passed": c.passed}
                for c in self.mp_conditions],
            "rank_conditions": [
                {"name": c.name, "lhs": c.lhs, "rhs": c.rhs, "passed": c.passed}
                for c in self.rank_conditions],
        }


@dataclass(frozen=True)
class Inconsistent:
    """Returned (never raised) when an instance has no solution."""

    report: SolvabilityReport

    @property
    def failing_conditions(self) -> list:
        return self.report.failing()


class LinearSolutionFamily:
    """Particular solution plus free parameters spanning the general one.

    assemble() maps a full choice of free-parameter matrices (sequence in
    declared order, or mapping by name; omitted entries are zero) to the
    concrete solution tuple.  assemble() with no arguments returns the
    particular solution.
    """

    def __init__(self, unknowns: Sequence[str], params: Sequence[FreeParam],
                 assemble_fn: Callable):
        self.unknowns = tuple(unknowns)
        self.free_params = tuple(params)
        self._assemble = assemble_fn

    @property
    def free_param_shapes(self) -> list:
        return [p.shape for p in self.free_params]

    @property
    def particular(self):
        return self.assemble()

    def _full_params(self, params) -> dict:
        values = {p.name: QMatrix.zeros(*p.shape) for p in self.free_params}
        if params is None:
            items = {}
        elif isinstance(params, Mapping):
            items = dict(params)
        else:
            params = list(params)
            if len(params) != len(self.free_params):
                raise DimensionError(
                    f"expected {len(self.free_params)} free parameters, "
                    f"got {len(params)}")
            items = {p.name: v for p, v in zip(self.free_params, params)}
        for name, value in items.items():
            if name not in values:
                raise KeyError(f"unknown free parameter {name!r}")
            spec = next(p for p in self.free_params if p.name == name)
            if value.shape != spec.shape:
                raise DimensionError(
                    f"parameter {name} has shape {value.shape}, "
                    f"expected {spec.shape}")
            values[name] = _symmetrize_param(value, spec.eta)
        return values

    def assemble(self, params=None) -> tuple:
        return self._assemble(self._full_params(params))

    def random_params(self, rng, scale: float = 1.0) -> list:
        """Draw one matrix per free parameter (eta-constrained slots are
        symmetrized on assembly, so plain draws are admissible)."""
        out = []
        for p in self.free_params:
            rows, cols = p.shape
            out.append(QMatrix(*(scale * rng.standard_normal((rows, cols))
                                 for _ in range(4))))
        return out

    def __repr__(self):
        names = ",".join(self.unknowns)
        return (f"LinearSolutionFamily(unknowns=({names}), "
                f"{len(self.free_params)} free parameters)")
