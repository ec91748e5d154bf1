"""One-sided and paired linear equations in one unknown.

solve_left treats A X = C, solve_right treats X A = C, and solve_pair
treats the simultaneous pair A X = C, X B = D.  Inconsistency is a
result, not an error; each solver reports both the residual certificate
and the equivalent rank certificate.
"""

from __future__ import annotations

from ..decomp import pinv, rank
from ..qmatrix import DimensionError, QMatrix, hstack, vstack
from .families import (FreeParam, Inconsistent, LinearSolutionFamily,
                       SolvabilityReport, cascade_floor, rank_condition,
                       residual_condition)

DEFAULT_TOL = 1e-9


def solve_left(a: QMatrix, c: QMatrix, tol: float = DEFAULT_TOL):
    """General solution of A X = C: X = pinv(A) C + L_A U1."""
    if a.rows != c.rows:
        raise DimensionError(f"A has {a.rows} rows but C has {c.rows}")
    floor = cascade_floor(a, c)
    ba = pinv(a, floor=floor)
    threshold = tol * (1.0 + c.norm())
    mp = [residual_condition("R_A*C", c - a @ (ba.pinv @ c), threshold)]
    ranks = [rank_condition("r(C,A)=r(A)",
                            rank(hstack([c, a]), floor=floor), ba.rank)]
    report = SolvabilityReport.build([], mp, ranks)
    if not report.consistent:
        return Inconsistent(report)
    particular = ba.pinv @ c
    params = (FreeParam("U1", (a.cols, c.cols)),)

    def assemble(vals):
        return (particular + ba.proj_left @ vals["U1"],)

    return LinearSolutionFamily(("X",), params, assemble)


def solve_right(a: QMatrix, c: QMatrix, tol: float = DEFAULT_TOL):
    """General solution of X A = C: X = C pinv(A) + U1 R_A."""
    if a.cols != c.cols:
        raise DimensionError(f"A has {a.cols} columns but C has {c.cols}")
    floor = cascade_floor(a, c)
    ba = pinv(a, floor=floor)
    threshold = tol * (1.0 + c.norm())
    mp = [residual_condition("C*L_A", c - (c @ ba.pinv) @ a, threshold)]
    ranks = [rank_condition("r(C;A)=r(A)",
                            rank(vstack([c, a]), floor=floor), ba.rank)]
    report = SolvabilityReport.build([], mp, ranks)
    if not report.consistent:
        return Inconsistent(report)
    particular = c @ ba.pinv
    params = (FreeParam("U1", (c.rows, a.rows)),)

    def assemble(vals):
        return (particular + vals["U1"] @ ba.proj_right,)

    return LinearSolutionFamily(("X",), params, assemble)


def solve_pair(a: QMatrix, c: QMatrix, b: QMatrix, d: QMatrix,
               tol: float = DEFAULT_TOL):
    """General solution of the pair A X = C, X B = D.

    Consistency requires R_A C = 0, D L_B = 0 and the compatibility
    A D = C B; then X = pinv(A) C + L_A D pinv(B) + L_A U1 R_B.
    """
    if a.rows != c.rows:
        raise DimensionError(f"A has {a.rows} rows but C has {c.rows}")
    if b.cols != d.cols:
        raise DimensionError(f"B has {b.cols} columns but D has {d.cols}")
    if a.cols != d.rows:
        raise DimensionError(f"A has {a.cols} columns but D has {d.rows} rows")
    if b.rows != c.cols:
        raise DimensionError(f"B has {b.rows} rows but C has {c.cols} columns")
    floor = cascade_floor(a, b, c, d)
    ba, bb = pinv(a, floor=floor), pinv(b, floor=floor)
    scale = tol * (1.0 + c.norm() + d.norm())
    compat = [residual_condition("A*D=C*B", a @ d - c @ b, scale)]
    mp = [residual_condition("R_A*C", ba.proj_right @ c, scale),
          residual_condition("D*L_B", d @ bb.proj_left, scale)]
    ranks = [rank_condition("r(C,A)=r(A)",
                            rank(hstack([c, a]), floor=floor), ba.rank),
             rank_condition("r(D;B)=r(B)",
                            rank(vstack([d, b]), floor=floor), bb.rank)]
    report = SolvabilityReport.build(compat, mp, ranks)
    if not report.consistent:
        return Inconsistent(report)
    particular = ba.pinv @ c + ba.proj_left @ d @ bb.pinv
    params = (FreeParam("U1", (a.cols, b.rows)),)

    def assemble(vals):
        return (particular + ba.proj_left @ vals["U1"] @ bb.proj_right,)

    return LinearSolutionFamily(("X",), params, assemble)
