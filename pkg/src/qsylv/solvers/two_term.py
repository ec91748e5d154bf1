"""The two-term two-sided equation C3 X3 D3 + C4 X4 D4 = E1."""

from __future__ import annotations

from dataclasses import dataclass

from ..decomp import pinv, rank
from ..qmatrix import DimensionError, QMatrix, block, hstack, vstack
from .families import (FreeParam, Inconsistent, LinearSolutionFamily,
                       SolvabilityReport, cascade_floor, rank_condition,
                       residual_condition)
from .basic import DEFAULT_TOL


@dataclass(frozen=True)
class TwoTermInstance:
    """Coefficients of C3 X3 D3 + C4 X4 D4 = E1 as one value."""

    C3: QMatrix
    D3: QMatrix
    C4: QMatrix
    D4: QMatrix
    E1: QMatrix

    def __post_init__(self):
        _check_dims(self.C3, self.D3, self.C4, self.D4, self.E1)

    def unknown_shapes(self) -> dict:
        return {"X3": (self.C3.cols, self.D3.rows),
                "X4": (self.C4.cols, self.D4.rows)}

    def residual_terms(self, sol) -> list:
        x3, x4 = sol
        defect = self.C3 @ x3 @ self.D3 + self.C4 @ x4 @ self.D4 - self.E1
        return [("coupling=E1", defect, self.E1.norm())]


def _check_dims(c3, d3, c4, d4, e1):
    if c3.rows != e1.rows or c4.rows != e1.rows:
        raise DimensionError("C3, C4 and E1 must have the same row count")
    if d3.cols != e1.cols or d4.cols != e1.cols:
        raise DimensionError("D3, D4 and E1 must have the same column count")


class _TwoTermWork:
    def __init__(self, c3, d3, c4, d4, e1, rank_tol=None):
        _check_dims(c3, d3, c4, d4, e1)
        self.c3, self.d3, self.c4, self.d4, self.e1 = c3, d3, c4, d4, e1
        self.rank_tol = rank_tol
        self.floor = cascade_floor(c3, d3, c4, d4, e1)
        pv = lambda m: pinv(m, rank_tol, floor=self.floor)
        self.b3, self.b4 = pv(c3), pv(c4)
        self.e3, self.e4 = pv(d3), pv(d4)
        self.m1 = self.b3.proj_right @ c4
        self.n1 = d4 @ self.e3.proj_left
        self.bm, self.bn = pv(self.m1), pv(self.n1)
        self.s1 = c4 @ self.bm.proj_left
        self.bs = pv(self.s1)

    def report(self, tol: float) -> SolvabilityReport:
        threshold = tol * (1.0 + self.e1.norm())
        c3, d3, c4, d4, e1 = self.c3, self.d3, self.c4, self.d4, self.e1
        mp = [
            residual_condition("R_M1*R_C3*E1",
                               self.bm.proj_right @ (self.b3.proj_right @ e1),
                               threshold),
            residual_condition("R_C3*E1*L_D4",
                               self.b3.proj_right @ e1 @ self.e4.proj_left,
                               threshold),
            residual_condition("E1*L_D3*L_N1",
                               e1 @ self.e3.proj_left @ self.bn.proj_left,
                               threshold),
            residual_condition("R_C4*E1*L_D3",
                               self.b4.proj_right @ e1 @ self.e3.proj_left,
                               threshold),
        ]
        r = lambda m: rank(m, self.rank_tol, floor=self.floor)
        ranks = [
            rank_condition("r(C3,E1,C4)=r(C3,C4)",
                           r(hstack([c3, e1, c4])), r(hstack([c3, c4]))),
            rank_condition("r(D3;E1;D4)=r(D3;D4)",
                           r(vstack([d3, e1, d4])), r(vstack([d3, d4]))),
            rank_condition("r([C3,E1;0,D4])=r(C3)+r(D4)",
                           r(block([[c3, e1], [None, d4]])),
                           self.b3.rank + self.e4.rank),
            rank_condition("r([D3,0;E1,C4])=r(D3)+r(C4)",
                           r(block([[d3, None], [e1, c4]])),
                           self.e3.rank + self.b4.rank),
        ]
        return SolvabilityReport.build([], mp, ranks)

    def family(self) -> LinearSolutionFamily:
        c3, d3, c4, d4, e1 = self.c3, self.d3, self.c4, self.d4, self.e1
        b3, b4, e3, e4 = self.b3, self.b4, self.e3, self.e4
        bm, bn, bs, s1 = self.bm, self.bn, self.bs, self.s1
        x3_base = (b3.pinv @ e1 @ e3.pinv
                   - b3.pinv @ c4 @ bm.pinv @ e1 @ e3.pinv
                   - b3.pinv @ s1 @ b4.pinv @ e1 @ bn.pinv @ d4 @ e3.pinv)
        x4_base = bm.pinv @ e1 @ e4.pinv + bs.pinv @ s1 @ b4.pinv @ e1 @ bn.pinv
        shape3 = (c3.cols, d3.rows)
        shape4 = (c4.cols, d4.rows)
        params = (FreeParam("Y11", shape4), FreeParam("Y12", shape3),
                  FreeParam("Y13", shape3), FreeParam("Y14", shape4),
                  FreeParam("Y15", shape4))

        def assemble(vals):
            x3 = (x3_base
                  - b3.pinv @ s1 @ vals["Y11"] @ bn.proj_right @ d4 @ e3.pinv
                  + b3.proj_left @ vals["Y12"]
                  + vals["Y13"] @ e3.proj_right)
            x4 = (x4_base
                  + bm.proj_left @ bs.proj_left @ vals["Y14"]
                  + vals["Y15"] @ e4.proj_right
                  + bm.proj_left @ vals["Y11"] @ bn.proj_right)
            return (x3, x4)

        return LinearSolutionFamily(("X3", "X4"), params, assemble)


def _two_term_report(c3, d3, c4, d4, e1, tol=DEFAULT_TOL) -> SolvabilityReport:
    return _TwoTermWork(c3, d3, c4, d4, e1).report(tol)


def check_two_term(c3: QMatrix, d3: QMatrix, c4: QMatrix, d4: QMatrix,
                   e1: QMatrix, tol: float = DEFAULT_TOL) -> SolvabilityReport:
    return _two_term_report(c3, d3, c4, d4, e1, tol)


def solve_two_term(c3: QMatrix, d3: QMatrix, c4: QMatrix, d4: QMatrix,
                   e1: QMatrix, tol: float = DEFAULT_TOL):
    """General solution (X3, X4) of C3 X3 D3 + C4 X4 D4 = E1.

    Consistency is decided by four rank equalities cross-checked by the
    residual certificate; the family carries five free parameters
    Y11..Y15 (Y11 is shared between the two unknowns).
    """
    work = _TwoTermWork(c3, d3, c4, d4, e1)
    report = work.report(tol)
    if not report.consistent:
        return Inconsistent(report)
    return work.family()
