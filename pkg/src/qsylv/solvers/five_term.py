"""The five-term equation A1 X1 + X2 B1 + A2 Y1 B2 + A3 Y2 B3 + A4 Y3 B4 = B.

The solution pipeline eliminates (X1, X2) through the classical
two-sided solvability condition, reduces (Y1, Y2) to a two-term
two-sided equation whose right side depends on Y3, and parametrizes Y3
as the general solution of a system of four two-sided equations sharing
one unknown.  Y3 has two equivalent closed forms; ``branch`` selects
which one the family assembles ("first" is the default).

Consistency is certified both by residual conditions and by nine rank
equalities; the two certificates agree in exact arithmetic and the
report records both.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from ..decomp import pinv, rank
from ..qmatrix import DimensionError, QMatrix, block, hstack, vstack
from .basic import DEFAULT_TOL
from .families import (FreeParam, Inconsistent, LinearSolutionFamily,
                       SolvabilityReport, cascade_floor, rank_condition,
                       residual_condition)

FIVE_TERM_PARAM_NAMES = ("U1", "U2", "U3", "U4", "U5", "U6", "U7", "U8",
                         "U11", "U12", "U21", "U31", "U32", "U33", "U41", "U42")


@dataclass(frozen=True)
class FiveTermInstance:
    """Coefficients of A1 X1 + X2 B1 + sum_i A_{i+1} Y_i B_{i+1} = B."""

    A1: QMatrix
    B1: QMatrix
    A2: QMatrix
    B2: QMatrix
    A3: QMatrix
    B3: QMatrix
    A4: QMatrix
    B4: QMatrix
    B: QMatrix

    def __post_init__(self):
        p, q = self.B.shape
        for name in ("A1", "A2", "A3", "A4"):
            if getattr(self, name).rows != p:
                raise DimensionError(f"{name} must have {p} rows")
        for name in ("B1", "B2", "B3", "B4"):
            if getattr(self, name).cols != q:
                raise DimensionError(f"{name} must have {q} columns")

    def coefficient_norm(self) -> float:
        return sum(getattr(self, f.name).norm()
                   for f in fields(self) if f.name != "B")

    def unknown_shapes(self) -> dict:
        p, q = self.B.shape
        return {
            "X1": (self.A1.cols, q),
            "X2": (p, self.B1.rows),
            "Y1": (self.A2.cols, self.B2.rows),
            "Y2": (self.A3.cols, self.B3.rows),
            "Y3": (self.A4.cols, self.B4.rows),
        }

    def residual(self, sol) -> QMatrix:
        x1, x2, y1, y2, y3 = sol
        return (self.A1 @ x1 + x2 @ self.B1 + self.A2 @ y1 @ self.B2
                + self.A3 @ y2 @ self.B3 + self.A4 @ y3 @ self.B4 - self.B)

    def residual_terms(self, sol) -> list:
        return [("coupling=B", self.residual(sol), self.B.norm())]


@dataclass(frozen=True)
class FiveTermIntermediates:
    """Every derived matrix of the reduction cascade, by its role."""

    A11: QMatrix
    A22: QMatrix
    A33: QMatrix
    B11: QMatrix
    B22: QMatrix
    B33: QMatrix
    T1: QMatrix
    N1: QMatrix
    M1: QMatrix
    S1: QMatrix
    C: QMatrix
    C1: QMatrix
    C2: QMatrix
    C3: QMatrix
    C4: QMatrix
    D: QMatrix
    D1: QMatrix
    D2: QMatrix
    D3: QMatrix
    D4: QMatrix
    E1: QMatrix
    E2: QMatrix
    E3: QMatrix
    E4: QMatrix
    C11: QMatrix
    D11: QMatrix
    C22: QMatrix
    D22: QMatrix
    C33: QMatrix
    D33: QMatrix
    F1: QMatrix
    F2: QMatrix
    E11: QMatrix
    E22: QMatrix
    E33: QMatrix
    E44: QMatrix
    M: QMatrix
    N: QMatrix
    F: QMatrix
    E: QMatrix
    S: QMatrix
    G1: QMatrix
    G2: QMatrix
    F11: QMatrix
    F22: QMatrix


class _FiveTermWork:
    """Shared pseudoinverse bundles and intermediates for one instance."""

    def __init__(self, inst: FiveTermInstance, rank_tol=None):
        self.inst = inst
        self.rank_tol = rank_tol
        self.floor = cascade_floor(inst.A1, inst.B1, inst.A2, inst.B2,
                                   inst.A3, inst.B3, inst.A4, inst.B4, inst.B)
        pv = lambda m: pinv(m, rank_tol, floor=self.floor)
        self.bA1, self.bB1 = pv(inst.A1), pv(inst.B1)
        ra1, lb1 = self.bA1.proj_right, self.bB1.proj_left
        self.A11 = ra1 @ inst.A2
        self.A22 = ra1 @ inst.A3
        self.A33 = ra1 @ inst.A4
        self.B11 = inst.B2 @ lb1
        self.B22 = inst.B3 @ lb1
        self.B33 = inst.B4 @ lb1
        self.T1 = ra1 @ inst.B @ lb1
        self.bA11, self.bA22 = pv(self.A11), pv(self.A22)
        self.bB11, self.bB22 = pv(self.B11), pv(self.B22)
        self.N1 = self.B22 @ self.bB11.proj_left
        self.M1 = self.bA11.proj_right @ self.A22
        self.bN1, self.bM1 = pv(self.N1), pv(self.M1)
        self.S1 = self.A22 @ self.bM1.proj_left
        self.bS1 = pv(self.S1)
        self.C = self.bM1.proj_right @ self.bA11.proj_right
        self.C1 = self.C @ self.A33
        self.C2 = self.bA11.proj_right @ self.A33
        self.C3 = self.bA22.proj_right @ self.A33
        self.C4 = self.A33
        self.D = self.bB11.proj_left @ self.bN1.proj_left
        self.D1 = self.B33
        self.D2 = self.B33 @ self.bB22.proj_left
        self.D3 = self.B33 @ self.bB11.proj_left
        self.D4 = self.B33 @ self.D
        self.E1 = self.C @ self.T1
        self.E2 = self.bA11.proj_right @ self.T1 @ self.bB22.proj_left
        self.E3 = self.bA22.proj_right @ self.T1 @ self.bB11.proj_left
        self.E4 = self.T1 @ self.D
        self.bC = [pv(c) for c in (self.C1, self.C2, self.C3, self.C4)]
        self.bD = [pv(d) for d in (self.D1, self.D2, self.D3, self.D4)]
        self.C11 = hstack([self.bC[1].proj_left, self.bC[3].proj_left])
        self.D11 = vstack([self.bD[0].proj_right, self.bD[2].proj_right])
        self.C22 = self.bC[0].proj_left
        self.D22 = self.bD[1].proj_right
        self.C33 = self.bC[2].proj_left
        self.D33 = self.bD[3].proj_right
        self.bC11, self.bD11 = pv(self.C11), pv(self.D11)
        self.F1 = (self.bC[0].pinv @ self.E1 @ self.bD[0].pinv
                   + self.bC[0].proj_left @ self.bC[1].pinv @ self.E2
                   @ self.bD[1].pinv)
        self.F2 = (self.bC[2].pinv @ self.E3 @ self.bD[2].pinv
                   + self.bC[2].proj_left @ self.bC[3].pinv @ self.E4
                   @ self.bD[3].pinv)
        self.E11 = self.bC11.proj_right @ self.C22
        self.E22 = self.bC11.proj_right @ self.C33
        self.E33 = self.D22 @ self.bD11.proj_left
        self.E44 = self.D33 @ self.bD11.proj_left
        self.bE11, self.bE22 = pv(self.E11), pv(self.E22)
        self.bE33, self.bE44 = pv(self.E33), pv(self.E44)
        self.M = self.bE11.proj_right @ self.E22
        self.N = self.E44 @ self.bE33.proj_left
        self.bM, self.bN = pv(self.M), pv(self.N)
        self.F = self.F2 - self.F1
        self.E = self.bC11.proj_right @ self.F @ self.bD11.proj_left
        self.S = self.E22 @ self.bM.proj_left
        self.bS = pv(self.S)
        self.G1 = (self.E2 - self.C2 @ self.bC[0].pinv @ self.E1
                   @ self.bD[0].pinv @ self.D2)
        self.G2 = (self.E4 - self.C4 @ self.bC[2].pinv @ self.E3
                   @ self.bD[2].pinv @ self.D4)
        self.F11 = self.C2 @ self.bC[0].proj_left
        self.F22 = self.C4 @ self.bC[2].proj_left

    def intermediates(self) -> FiveTermIntermediates:
        return FiveTermIntermediates(
            A11=self.A11, A22=self.A22, A33=self.A33,
            B11=self.B11, B22=self.B22, B33=self.B33,
            T1=self.T1, N1=self.N1, M1=self.M1, S1=self.S1,
            C=self.C, C1=self.C1, C2=self.C2, C3=self.C3, C4=self.C4,
            D=self.D, D1=self.D1, D2=self.D2, D3=self.D3, D4=self.D4,
            E1=self.E1, E2=self.E2, E3=self.E3, E4=self.E4,
            C11=self.C11, D11=self.D11, C22=self.C22, D22=self.D22,
            C33=self.C33, D33=self.D33, F1=self.F1, F2=self.F2,
            E11=self.E11, E22=self.E22, E33=self.E33, E44=self.E44,
            M=self.M, N=self.N, F=self.F, E=self.E, S=self.S,
            G1=self.G1, G2=self.G2, F11=self.F11, F22=self.F22)

    # -- certificates ----------------------------------------------------

    def mp_conditions(self, tol: float) -> list:
        threshold = tol * (1.0 + self.inst.coefficient_norm()
                           + self.inst.B.norm())
        out = []
        for i in range(4):
            out.append(residual_condition(
                f"R_C{i + 1}*E{i + 1}",
                self.bC[i].proj_right @ getattr(self, f"E{i + 1}"), threshold))
            out.append(residual_condition(
                f"E{i + 1}*L_D{i + 1}",
                getattr(self, f"E{i + 1}") @ self.bD[i].proj_left, threshold))
        out.append(residual_condition(
            "R_E22*E*L_E33",
            self.bE22.proj_right @ self.E @ self.bE33.proj_left, threshold))
        return out

    def rank_conditions(self) -> list:
        inst, rt = self.inst, self.rank_tol
        a1, a2, a3, a4 = inst.A1, inst.A2, inst.A3, inst.A4
        b1, b2, b3, b4 = inst.B1, inst.B2, inst.B3, inst.B4
        b = inst.B
        r = lambda m: rank(m, rt, floor=self.floor)
        out = [
            rank_condition("R1", r(block([[b, a2, a3, a4, a1],
                                          [b1, None, None, None, None]])),
                           r(b1) + r(hstack([a2, a3, a4, a1]))),
            rank_condition("R2", r(block([[b, a2, a4, a1],
                                          [b3, None, None, None],
                                          [b1, None, None, None]])),
                           r(hstack([a2, a4, a1])) + r(vstack([b3, b1]))),
            rank_condition("R3", r(block([[b, a3, a4, a1],
                                          [b2, None, None, None],
                                          [b1, None, None, None]])),
                           r(hstack([a3, a4, a1])) + r(vstack([b2, b1]))),
            rank_condition("R4", r(block([[b, a4, a1],
                                          [b2, None, None],
                                          [b3, None, None],
                                          [b1, None, None]])),
                           r(vstack([b2, b3, b1])) + r(hstack([a4, a1]))),
            rank_condition("R5", r(block([[b, a2, a3, a1],
                                          [b4, None, None, None],
                                          [b1, None, None, None]])),
                           r(hstack([a2, a3, a1])) + r(vstack([b4, b1]))),
            rank_condition("R6", r(block([[b, a2, a1],
                                          [b3, None, None],
                                          [b4, None, None],
                                          [b1, None, None]])),
                           r(vstack([b3, b4, b1])) + r(hstack([a2, a1]))),
            rank_condition("R7", r(block([[b, a3, a1],
                                          [b2, None, None],
                                          [b4, None, None],
                                          [b1, None, None]])),
                           r(vstack([b2, b4, b1])) + r(hstack([a3, a1]))),
            rank_condition("R8", r(block([[b, a1],
                                          [b2, None],
                                          [b3, None],
                                          [b4, None],
                                          [b1, None]])),
                           r(vstack([b2, b3, b4, b1])) + r(a1)),
        ]
        lhs9 = block([
            [b, a2, a1, None, None, None, a4],
            [b3, None, None, None, None, None, None],
            [b1, None, None, None, None, None, None],
            [None, None, None, -b, a3, a1, a4],
            [None, None, None, b2, None, None, None],
            [None, None, None, b1, None, None, None],
            [b4, None, None, b4, None, None, None]])
        rhs9_left = block([[b3, None], [b1, None], [None, b2],
                           [None, b1], [b4, b4]])
        rhs9_right = block([[a2, a1, None, None, a4],
                            [None, None, a3, a1, a4]])
        out.append(rank_condition("R9", r(lhs9),
                                  r(rhs9_left) + r(rhs9_right)))
        return out

    def report(self, tol: float) -> SolvabilityReport:
        return SolvabilityReport.build([], self.mp_conditions(tol),
                                       self.rank_conditions())

    # -- family assembly -------------------------------------------------

    def param_specs(self):
        inst = self.inst
        p, q = inst.B.shape
        a1, b1 = inst.A1.cols, inst.B1.rows
        a2, b2 = inst.A2.cols, inst.B2.rows
        a3, b3 = inst.A3.cols, inst.B3.rows
        m, n = inst.A4.cols, inst.B4.rows
        shapes = {
            "U1": (p, b1), "U2": (a1, q), "U3": (p, b1),
            "U4": (a3, b3), "U5": (a2, b2), "U6": (a2, b2),
            "U7": (a3, b3), "U8": (a3, b3),
            "U11": (m, 2 * n), "U12": (2 * m, n), "U21": (m, 2 * n),
            "U31": (m, n), "U32": (m, n), "U33": (m, n),
            "U41": (m, n), "U42": (m, n),
        }
        return tuple(FreeParam(name, shapes[name])
                     for name in FIVE_TERM_PARAM_NAMES)

    def assemble(self, vals: dict, branch: str):
        inst = self.inst
        m, n = inst.A4.cols, inst.B4.rows
        v3 = (self.bE11.pinv @ self.F @ self.bE33.pinv
              - self.bE11.pinv @ self.E22 @ self.bM.pinv @ self.F
              @ self.bE33.pinv
              - self.bE11.pinv @ self.S @ self.bE22.pinv @ self.F
              @ self.bN.pinv @ self.E44 @ self.bE33.pinv
              - self.bE11.pinv @ self.S @ vals["U31"] @ self.bN.proj_right
              @ self.E44 @ self.bE33.pinv
              + self.bE11.proj_left @ vals["U32"]
              + vals["U33"] @ self.bE33.proj_right)
        w3 = (self.bM.pinv @ self.F @ self.bE44.pinv
              + self.bS.pinv @ self.S @ self.bE22.pinv @ self.F @ self.bN.pinv
              + self.bM.proj_left @ self.bS.proj_left @ vals["U41"]
              + self.bM.proj_left @ vals["U31"] @ self.bN.proj_right
              + vals["U42"] @ self.bE44.proj_right)
        g = self.F - self.C22 @ v3 @ self.D22 - self.C33 @ w3 @ self.D33
        # selector products (I, 0) / (0, I) realized as row/column halves
        cg = self.bC11.pinv @ g
        uu = (self.bC11.pinv @ vals["U11"] @ self.D11
              - self.bC11.proj_left @ vals["U12"])
        v1 = (cg - uu).submatrix(slice(0, m), slice(None))
        w1 = (cg - uu).submatrix(slice(m, 2 * m), slice(None))
        rgd = self.bC11.proj_right @ g @ self.bD11.pinv
        cu = (self.C11 @ self.bC11.pinv @ vals["U11"]
              + vals["U21"] @ self.bD11.proj_right)
        v2 = (rgd + cu).submatrix(slice(None), slice(0, n))
        w2 = (rgd + cu).submatrix(slice(None), slice(n, 2 * n))
        if branch == "first":
            y3 = (self.F1 + self.bC[1].proj_left @ v1
                  + v2 @ self.bD[0].proj_right
                  + self.bC[0].proj_left @ v3 @ self.bD[1].proj_right)
        elif branch == "second":
            y3 = (self.F2 - self.bC[3].proj_left @ w1
                  - w2 @ self.bD[2].proj_right
                  - self.bC[2].proj_left @ w3 @ self.bD[3].proj_right)
        else:
            raise ValueError(f"branch must be 'first' or 'second', got {branch!r}")
        t = self.T1 - self.A33 @ y3 @ self.B33
        y1 = (self.bA11.pinv @ t @ self.bB11.pinv
              - self.bA11.pinv @ self.A22 @ self.bM1.pinv @ t @ self.bB11.pinv
              - self.bA11.pinv @ self.S1 @ self.bA22.pinv @ t @ self.bN1.pinv
              @ self.B22 @ self.bB11.pinv
              - self.bA11.pinv @ self.S1 @ vals["U4"] @ self.bN1.proj_right
              @ self.B22 @ self.bB11.pinv
              + self.bA11.proj_left @ vals["U5"]
              + vals["U6"] @ self.bB11.proj_right)
        y2 = (self.bM1.pinv @ t @ self.bB22.pinv
              + self.bS1.pinv @ self.S1 @ self.bA22.pinv @ t @ self.bN1.pinv
              + self.bM1.proj_left @ self.bS1.proj_left @ vals["U7"]
              + vals["U8"] @ self.bB22.proj_right
              + self.bM1.proj_left @ vals["U4"] @ self.bN1.proj_right)
        k = (inst.B - inst.A2 @ y1 @ inst.B2 - inst.A3 @ y2 @ inst.B3
             - inst.A4 @ y3 @ inst.B4)
        x1 = (self.bA1.pinv @ k - self.bA1.pinv @ vals["U1"] @ inst.B1
              + self.bA1.proj_left @ vals["U2"])
        x2 = (self.bA1.proj_right @ k @ self.bB1.pinv
              + inst.A1 @ self.bA1.pinv @ vals["U1"]
              + vals["U3"] @ self.bB1.proj_right)
        return (x1, x2, y1, y2, y3)


def five_term_intermediates(inst: FiveTermInstance,
                            rank_tol=None) -> FiveTermIntermediates:
    """All derived matrices of the reduction, computed from scratch."""
    return _FiveTermWork(inst, rank_tol).intermediates()


def check_five_term(inst: FiveTermInstance,
                    tol: float = DEFAULT_TOL) -> SolvabilityReport:
    return _FiveTermWork(inst).report(tol)


def solve_five_term(inst: FiveTermInstance, tol: float = DEFAULT_TOL,
                    branch: str = "first"):
    """General solution family (X1, X2, Y1, Y2, Y3), or Inconsistent."""
    if branch not in ("first", "second"):
        raise ValueError(f"branch must be 'first' or 'second', got {branch!r}")
    work = _FiveTermWork(inst)
    report = work.report(tol)
    if not report.consistent:
        return Inconsistent(report)

    def assemble(vals):
        return work.assemble(vals, branch)

    return LinearSolutionFamily(("X1", "X2", "Y1", "Y2", "Y3"),
                                work.param_specs(), assemble)
