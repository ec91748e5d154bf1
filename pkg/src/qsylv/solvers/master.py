"""The nine-equation master system.

    A1 U = C1,  V B1 = D1,
    Ai X = Ci,  X Bi = Di           (i = 2, 3, 4; unknowns X, Y, Z)
    E1 U + V F1 + E2 X F2 + E3 Y F3 + E4 Z F4 = Cc

Solving proceeds by (a) solving the eight side equations, (b) reducing
the coupling equation to a five-term equation in the side equations'
free parameters, (c) solving that with :mod:`.five_term`, and (d)
assembling (U, V, X, Y, Z).  Specializations arise by letting blocks be
empty (zero-dimension) rather than through separate code paths.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from ..decomp import pinv, rank
from ..qmatrix import DimensionError, QMatrix, block, hstack, vstack
from .basic import DEFAULT_TOL
from .families import (FreeParam, Inconsistent, LinearSolutionFamily,
                       SolvabilityReport, cascade_floor, rank_condition,
                       residual_condition)
from .five_term import FIVE_TERM_PARAM_NAMES, FiveTermInstance, _FiveTermWork

# five-term parameter names as they appear in the master solution display
MASTER_PARAM_NAMES = ("W11", "W12", "W13") + FIVE_TERM_PARAM_NAMES[3:]


@dataclass(frozen=True)
class MasterInstance:
    """Coefficient blocks of the nine-equation system; any block may be
    empty, which is how the specializations are expressed."""

    A1: QMatrix
    A2: QMatrix
    A3: QMatrix
    A4: QMatrix
    B1: QMatrix
    B2: QMatrix
    B3: QMatrix
    B4: QMatrix
    C1: QMatrix
    C2: QMatrix
    C3: QMatrix
    C4: QMatrix
    D1: QMatrix
    D2: QMatrix
    D3: QMatrix
    D4: QMatrix
    E1: QMatrix
    E2: QMatrix
    E3: QMatrix
    E4: QMatrix
    F1: QMatrix
    F2: QMatrix
    F3: QMatrix
    F4: QMatrix
    Cc: QMatrix

    def __post_init__(self):
        cr, cc = self.Cc.shape
        checks = [
            ("E1", self.E1.rows, cr), ("C1", self.C1.cols, cc),
            ("C1", self.C1.rows, self.A1.rows),
            ("E1", self.E1.cols, self.A1.cols),
            ("D1", self.D1.rows, cr), ("F1", self.F1.cols, cc),
            ("D1", self.D1.cols, self.B1.cols),
            ("F1", self.F1.rows, self.B1.rows),
        ]
        for i in (2, 3, 4):
            a, b = getattr(self, f"A{i}"), getattr(self, f"B{i}")
            c, d = getattr(self, f"C{i}"), getattr(self, f"D{i}")
            e, f = getattr(self, f"E{i}"), getattr(self, f"F{i}")
            checks += [
                (f"C{i}", c.rows, a.rows), (f"C{i}", c.cols, b.rows),
                (f"D{i}", d.rows, a.cols), (f"D{i}", d.cols, b.cols),
                (f"E{i}", e.rows, cr), (f"E{i}", e.cols, a.cols),
                (f"F{i}", f.rows, b.rows), (f"F{i}", f.cols, cc),
            ]
        for name, got, want in checks:
            if got != want:
                raise DimensionError(
                    f"block {name} has incompatible dimensions "
                    f"(got {got}, expected {want})")

    def unknown_shapes(self) -> dict:
        cr, cc = self.Cc.shape
        return {
            "U": (self.A1.cols, cc),
            "V": (cr, self.B1.rows),
            "X": (self.A2.cols, self.B2.rows),
            "Y": (self.A3.cols, self.B3.rows),
            "Z": (self.A4.cols, self.B4.rows),
        }

    def blocks(self) -> list:
        return [getattr(self, f.name) for f in fields(self)]

    def coefficient_norm(self) -> float:
        return sum(m.norm() for m in self.blocks())

    def residual_terms(self, sol) -> list:
        """(name, defect, scale) for all nine equations."""
        u, v, x, y, z = sol
        out = [
            ("A1*U=C1", self.A1 @ u - self.C1, self.C1.norm()),
            ("V*B1=D1", v @ self.B1 - self.D1, self.D1.norm()),
            ("A2*X=C2", self.A2 @ x - self.C2, self.C2.norm()),
            ("X*B2=D2", x @ self.B2 - self.D2, self.D2.norm()),
            ("A3*Y=C3", self.A3 @ y - self.C3, self.C3.norm()),
            ("Y*B3=D3", y @ self.B3 - self.D3, self.D3.norm()),
            ("A4*Z=C4", self.A4 @ z - self.C4, self.C4.norm()),
            ("Z*B4=D4", z @ self.B4 - self.D4, self.D4.norm()),
        ]
        coupling = (self.E1 @ u + v @ self.F1 + self.E2 @ x @ self.F2
                    + self.E3 @ y @ self.F3 + self.E4 @ z @ self.F4 - self.Cc)
        out.append(("coupling=Cc", coupling, self.Cc.norm()))
        return out


@dataclass(frozen=True)
class MasterSolution:
    """One concrete solution tuple of a master instance."""

    U: QMatrix
    V: QMatrix
    X: QMatrix
    Y: QMatrix
    Z: QMatrix

    def as_tuple(self):
        return (self.U, self.V, self.X, self.Y, self.Z)


@dataclass(frozen=True)
class MasterIntermediates:
    """Derived matrices of the master reduction.

    The S1 field is the reduction intermediate; the solution display
    reuses the same letter for the first unknown of the reduced
    equation, which is a distinct object (the X1 slot of the five-term
    family, driven by the W11/W12/W13 parameters here).
    """

    A11: QMatrix
    A22: QMatrix
    A33: QMatrix
    A44: QMatrix
    B11: QMatrix
    B22: QMatrix
    B33: QMatrix
    B44: QMatrix
    B21: QMatrix
    B31: QMatrix
    B41: QMatrix
    T1: QMatrix
    A12: QMatrix
    A13: QMatrix
    A14: QMatrix
    N1: QMatrix
    M1: QMatrix
    S1: QMatrix
    T2: QMatrix
    G: QMatrix
    G1: QMatrix
    G2: QMatrix
    G3: QMatrix
    G4: QMatrix
    H: QMatrix
    H1: QMatrix
    H2: QMatrix
    H3: QMatrix
    H4: QMatrix
    L1: QMatrix
    L2: QMatrix
    L3: QMatrix
    L4: QMatrix
    C11: QMatrix
    D11: QMatrix
    C22: QMatrix
    D22: QMatrix
    C33: QMatrix
    D33: QMatrix
    E11: QMatrix
    E22: QMatrix
    E33: QMatrix
    E44: QMatrix
    M: QMatrix
    N: QMatrix
    F: QMatrix
    E: QMatrix
    S: QMatrix
    F11: QMatrix
    G11: QMatrix
    F22: QMatrix
    G22: QMatrix
    F33: QMatrix
    F44: QMatrix


class _MasterWork:
    """Side-equation bundles plus the reduced five-term work, shared by
    check_master and solve_master."""

    def __init__(self, inst: MasterInstance, rank_tol=None):
        self.inst = inst
        self.rank_tol = rank_tol
        self.floor = cascade_floor(*inst.blocks())
        pv = lambda m: pinv(m, rank_tol, floor=self.floor)
        self.bA = [pv(getattr(inst, f"A{i}")) for i in (1, 2, 3, 4)]
        self.bB = [pv(getattr(inst, f"B{i}")) for i in (1, 2, 3, 4)]
        aii = [getattr(inst, f"E{i + 1}") @ self.bA[i].proj_left
               for i in range(4)]
        bii = [self.bB[i].proj_right @ getattr(inst, f"F{i + 1}")
               for i in range(4)]
        t1 = (inst.Cc - inst.E1 @ (self.bA[0].pinv @ inst.C1)
              - inst.D1 @ self.bB[0].pinv @ inst.F1)
        for i in (1, 2, 3):
            ai, bi = self.bA[i], self.bB[i]
            ci, di = getattr(inst, f"C{i + 1}"), getattr(inst, f"D{i + 1}")
            ei, fi = getattr(inst, f"E{i + 1}"), getattr(inst, f"F{i + 1}")
            t1 = t1 - ei @ (ai.pinv @ ci + ai.proj_left @ di @ bi.pinv) @ fi
        self.t1 = t1
        self.reduced = FiveTermInstance(aii[0], bii[0], aii[1], bii[1],
                                        aii[2], bii[2], aii[3], bii[3], t1)
        self.five = _FiveTermWork(self.reduced, rank_tol)

    # -- certificate lists -------------------------------------------------

    def compat_conditions(self, tol: float) -> list:
        inst = self.inst
        threshold = tol * (1.0 + inst.coefficient_norm())
        out = []
        for i in (2, 3, 4):
            a, b = getattr(inst, f"A{i}"), getattr(inst, f"B{i}")
            c, d = getattr(inst, f"C{i}"), getattr(inst, f"D{i}")
            out.append(residual_condition(f"A{i}*D{i}=C{i}*B{i}",
                                          a @ d - c @ b, threshold))
        return out

    def mp_conditions(self, tol: float) -> list:
        inst = self.inst
        threshold = tol * (1.0 + inst.coefficient_norm())
        out = []
        for i in range(4):
            c, d = getattr(inst, f"C{i + 1}"), getattr(inst, f"D{i + 1}")
            out.append(residual_condition(
                f"R_A{i + 1}*C{i + 1}", self.bA[i].proj_right @ c, threshold))
            out.append(residual_condition(
                f"D{i + 1}*L_B{i + 1}", d @ self.bB[i].proj_left, threshold))
        five = self.five
        for i in range(4):
            out.append(residual_condition(
                f"R_G{i + 1}*L{i + 1}",
                five.bC[i].proj_right @ getattr(five, f"E{i + 1}"), threshold))
            out.append(residual_condition(
                f"L{i + 1}*L_H{i + 1}",
                getattr(five, f"E{i + 1}") @ five.bD[i].proj_left, threshold))
        out.append(residual_condition(
            "R_E22*E*L_E33",
            five.bE22.proj_right @ five.E @ five.bE33.proj_left, threshold))
        return out

    def rank_conditions(self) -> list:
        inst, rt = self.inst, self.rank_tol
        r = lambda m: rank(m, rt, floor=self.floor)
        out = []
        for i in range(4):
            a, b = getattr(inst, f"A{i + 1}"), getattr(inst, f"B{i + 1}")
            c, d = getattr(inst, f"C{i + 1}"), getattr(inst, f"D{i + 1}")
            out.append(rank_condition(f"r(C{i + 1},A{i + 1})=r(A{i + 1})",
                                      r(hstack([c, a])), self.bA[i].rank))
            out.append(rank_condition(f"r(D{i + 1};B{i + 1})=r(B{i + 1})",
                                      r(vstack([d, b])), self.bB[i].rank))
        a1, a2, a3, a4 = inst.A1, inst.A2, inst.A3, inst.A4
        b1, b2, b3, b4 = inst.B1, inst.B2, inst.B3, inst.B4
        c1 = inst.C1
        d1 = inst.D1
        e1, e2, e3, e4 = inst.E1, inst.E2, inst.E3, inst.E4
        f1, f2, f3, f4 = inst.F1, inst.F2, inst.F3, inst.F4
        cc = inst.Cc
        c2f2 = inst.C2 @ f2
        c3f3 = inst.C3 @ f3
        c4f4 = inst.C4 @ f4
        e2d2 = e2 @ inst.D2
        e3d3 = e3 @ inst.D3
        e4d4 = e4 @ inst.D4

        out.append(rank_condition(
            "R1",
            r(block([[cc, e1, e2, e3, e4, d1],
                     [f1, None, None, None, None, b1],
                     [c1, a1, None, None, None, None],
                     [c2f2, None, a2, None, None, None],
                     [c3f3, None, None, a3, None, None],
                     [c4f4, None, None, None, a4, None]])),
            r(block([[e1, e2, e3, e4],
                     [a1, None, None, None],
                     [None, a2, None, None],
                     [None, None, a3, None],
                     [None, None, None, a4]])) + r(hstack([f1, b1]))))
        out.append(rank_condition(
            "R2",
            r(block([[cc, e1, e2, e4, e3d3, d1],
                     [c1, a1, None, None, None, None],
                     [c2f2, None, a2, None, None, None],
                     [c4f4, None, None, a4, None, None],
                     [f3, None, None, None, b3, None],
                     [f1, None, None, None, None, b1]])),
            r(block([[e1, e2, e4],
                     [a1, None, None],
                     [None, a2, None],
                     [None, None, a4]]))
            + r(block([[f3, b3, None], [f1, None, b1]]))))
        out.append(rank_condition(
            "R3",
            r(block([[cc, e1, e3, e4, e2d2, d1],
                     [c1, a1, None, None, None, None],
                     [c3f3, None, a3, None, None, None],
                     [c4f4, None, None, a4, None, None],
                     [f2, None, None, None, b2, None],
                     [f1, None, None, None, None, b1]])),
            r(block([[e1, e3, e4],
                     [a1, None, None],
                     [None, a3, None],
                     [None, None, a4]]))
            + r(block([[f2, b2, None], [f1, None, b1]]))))
        out.append(rank_condition(
            "R4",
            r(block([[cc, e4, e1, e2d2, e3d3, d1],
                     [f2, None, None, b2, None, None],
                     [f3, None, None, None, b3, None],
                     [f1, None, None, None, None, b1],
                     [c4f4, a4, None, None, None, None],
                     [c1, None, a1, None, None, None]])),
            r(block([[f2, b2, None, None],
                     [f3, None, b3, None],
                     [f1, None, None, b1]]))
            + r(block([[e4, e1], [a4, None], [None, a1]]))))
        out.append(rank_condition(
            "R5",
            r(block([[cc, e1, e2, e3, e4d4, d1],
                     [c1, a1, None, None, None, None],
                     [c2f2, None, a2, None, None, None],
                     [c3f3, None, None, a3, None, None],
                     [f4, None, None, None, b4, None],
                     [f1, None, None, None, None, b1]])),
            r(block([[e1, e2, e3],
                     [a1, None, None],
                     [None, a2, None],
                     [None, None, a3]]))
            + r(block([[f4, b4, None], [f1, None, b1]]))))
        out.append(rank_condition(
            "R6",
            r(block([[cc, e2, e1, e3d3, e4d4, d1],
                     [f3, None, None, b3, None, None],
                     [f4, None, None, None, b4, None],
                     [f1, None, None, None, None, b1],
                     [c2f2, a2, None, None, None, None],
                     [c1, None, a1, None, None, None]])),
            r(block([[f3, b3, None, None],
                     [f4, None, b4, None],
                     [f1, None, None, b1]]))
            + r(block([[e2, e1], [a2, None], [None, a1]]))))
        out.append(rank_condition(
            "R7",
            r(block([[cc, e3, e1, e2d2, e4d4, d1],
                     [f2, None, None, b2, None, None],
                     [f4, None, None, None, b4, None],
                     [f1, None, None, None, None, b1],
                     [c3f3, a3, None, None, None, None],
                     [c1, None, a1, None, None, None]])),
            r(block([[f2, b2, None, None],
                     [f4, None, b4, None],
                     [f1, None, None, b1]]))
            + r(block([[e3, e1], [a3, None], [None, a1]]))))
        out.append(rank_condition(
            "R8",
            r(block([[cc, e1, e4d4, e2d2, e3d3, d1],
                     [f4, None, b4, None, None, None],
                     [f2, None, None, b2, None, None],
                     [f3, None, None, None, b3, None],
                     [f1, None, None, None, None, b1],
                     [c1, a1, None, None, None, None]])),
            r(block([[f4, b4, None, None, None],
                     [f2, None, b2, None, None],
                     [f3, None, None, b3, None],
                     [f1, None, None, None, b1]]))
            + r(vstack([e1, a1]))))
        lhs9 = block([
            [cc, e2, e1, None, None, None, e4, e3d3, d1, None, None, e4d4],
            [f3, None, None, None, None, None, None, b3, None, None, None, None],
            [f1, None, None, None, None, None, None, None, b1, None, None, None],
            [None, None, None, cc, e3, e1, e4, None, None, e2d2, d1, None],
            [None, None, None, f2, None, None, None, None, None, b2, None, None],
            [None, None, None, f1, None, None, None, None, None, None, b1, None],
            [f4, None, None, -f4, None, None, None, None, None, None, None, b4],
            [c2f2, a2, None, None, None, None, None, None, None, None, None, None],
            [c1, None, a1, None, None, None, None, None, None, None, None, None],
            [None, None, None, c3f3, a3, None, None, None, None, None, None, None],
            [None, None, None, c1, None, a1, None, None, None, None, None, None],
            [None, None, None, c4f4, None, None, a4, None, None, None, None, None]])
        rhs9 = (r(block([[f3, None, b3, None, None, None, None],
                         [f1, None, None, b1, None, None, None],
                         [None, f2, None, None, b2, None, None],
                         [None, f1, None, None, None, b1, None],
                         [f4, f4, None, None, None, None, b4]]))
                + r(block([[e2, e1, None, None, e4],
                           [None, None, e3, e1, e4],
                           [a2, None, None, None, None],
                           [None, a1, None, None, None],
                           [None, None, a3, None, None],
                           [None, None, None, a1, None],
                           [None, None, None, None, a4]])))
        out.append(rank_condition("R9", r(lhs9), rhs9))
        return out

    def report(self, tol: float) -> SolvabilityReport:
        return SolvabilityReport.build(self.compat_conditions(tol),
                                       self.mp_conditions(tol),
                                       self.rank_conditions())

    def intermediates(self) -> MasterIntermediates:
        inst, five = self.inst, self.five
        return MasterIntermediates(
            A11=self.reduced.A1, A22=self.reduced.A2, A33=self.reduced.A3,
            A44=self.reduced.A4, B11=self.reduced.B1, B22=self.reduced.B2,
            B33=self.reduced.B3, B44=self.reduced.B4,
            B21=five.B11, B31=five.B22, B41=five.B33, T1=self.t1,
            A12=five.A11, A13=five.A22, A14=five.A33,
            N1=five.N1, M1=five.M1, S1=five.S1, T2=five.T1,
            G=five.C, G1=five.C1, G2=five.C2, G3=five.C3, G4=five.C4,
            H=five.D, H1=five.D1, H2=five.D2, H3=five.D3, H4=five.D4,
            L1=five.E1, L2=five.E2, L3=five.E3, L4=five.E4,
            C11=five.C11, D11=five.D11, C22=five.C22, D22=five.D22,
            C33=five.C33, D33=five.D33,
            E11=five.E11, E22=five.E22, E33=five.E33, E44=five.E44,
            M=five.M, N=five.N, F=five.F, E=five.E, S=five.S,
            F11=five.F11, G11=five.G1, F22=five.F22, G22=five.G2,
            F33=five.F1, F44=five.F2)

    # -- family assembly ----------------------------------------------------

    def param_specs(self):
        five_specs = self.five.param_specs()
        renamed = [FreeParam(new, p.shape) for new, p in
                   zip(MASTER_PARAM_NAMES, five_specs)]
        return tuple(renamed)

    def assemble(self, vals: dict, branch: str):
        inst = self.inst
        five_vals = {old: vals[new] for new, old in
                     zip(MASTER_PARAM_NAMES, FIVE_TERM_PARAM_NAMES)}
        s1, s2, w1, w2, w3 = self.five.assemble(five_vals, branch)
        u = self.bA[0].pinv @ inst.C1 + self.bA[0].proj_left @ s1
        v = inst.D1 @ self.bB[0].pinv + s2 @ self.bB[0].proj_right
        inner = (w1, w2, w3)
        out = [u, v]
        for i, w in zip((1, 2, 3), inner):
            ai, bi = self.bA[i], self.bB[i]
            ci, di = getattr(inst, f"C{i + 1}"), getattr(inst, f"D{i + 1}")
            out.append(ai.pinv @ ci + ai.proj_left @ di @ bi.pinv
                       + ai.proj_left @ w @ bi.proj_right)
        return tuple(out)


def master_intermediates(inst: MasterInstance,
                         rank_tol=None) -> MasterIntermediates:
    return _MasterWork(inst, rank_tol).intermediates()


def check_master(inst: MasterInstance,
                 tol: float = DEFAULT_TOL) -> SolvabilityReport:
    """Evaluate the compatibility products, the residual certificate and
    the rank certificate; fills forms_agree."""
    return _MasterWork(inst).report(tol)


def solve_master(inst: MasterInstance, tol: float = DEFAULT_TOL,
                 branch: str = "first"):
    """General solution family (U, V, X, Y, Z), or Inconsistent."""
    if branch not in ("first", "second"):
        raise ValueError(f"branch must be 'first' or 'second', got {branch!r}")
    work = _MasterWork(inst)
    report = work.report(tol)
    if not report.consistent:
        return Inconsistent(report)

    def assemble(vals):
        return work.assemble(vals, branch)

    return LinearSolutionFamily(("U", "V", "X", "Y", "Z"),
                                work.param_specs(), assemble)
