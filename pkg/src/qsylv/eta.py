"""Eta-Hermitian solution machinery.

A square quaternion matrix is eta-Hermitian when it equals its
eta-conjugate transpose (eta in {i, j, k}).  The constrained systems
here are solved by doubling: each one-sided constraint A X = C with
X = X^{eta*} turns into the pair A X = C, X A^{eta*} = C^{eta*}, which
maps the whole system onto the master system; averaging a solution of
the doubled system with its eta-conjugate yields an eta-Hermitian
solution, and the two directions of this reduction are inverse to each
other on solution sets.

Right sides may arrive under either the C or the B naming convention;
the instance types normalize to C names.  Eta-Hermicity of the given
right side (Cc, D1, D3) is enforced as a precondition rather than
silently symmetrized.
"""

from __future__ import annotations

from dataclasses import dataclass

from .decomp import pinv, rank
from .qcore import check_eta
from .qmatrix import DimensionError, QMatrix, block, hstack, vstack
from .solvers.basic import DEFAULT_TOL
from .solvers.families import (FreeParam, Inconsistent, LinearSolutionFamily,
                               SolvabilityReport, cascade_floor,
                               rank_condition, residual_condition)
from .solvers.master import MasterInstance, check_master, solve_master

PRECONDITION_TOL = 1e-9


def symmetrize(x: QMatrix, eta: str) -> QMatrix:
    """The eta-Hermitian part (X + X^{eta*}) / 2 of a square matrix."""
    check_eta(eta)
    if x.rows != x.cols:
        raise DimensionError("symmetrize needs a square matrix")
    return (x + x.eta_conj_transpose(eta)) * 0.5


def _require_eta_hermitian(m: QMatrix, eta: str, name: str):
    if m.rows != m.cols:
        raise ValueError(f"{name} must be square to be eta-Hermitian")
    defect = (m - m.eta_conj_transpose(eta)).norm()
    if defect > PRECONDITION_TOL * (1.0 + m.norm()):
        raise ValueError(
            f"{name} is not eta-Hermitian (defect {defect:.3e}); refusing "
            "to symmetrize input data silently")


def _herm_terms(eta, named):
    return [(f"{name}={name}^eta*", m - m.eta_conj_transpose(eta), m.norm())
            for name, m in named]


@dataclass(frozen=True)
class EtaFullInstance:
    """A1 U = C1; Ai W = Ci with W = W^{eta*} for W in (X, Y, Z);
    E1 U + (E1 U)^{eta*} + sum_i Ei W Ei^{eta*} = Cc."""

    eta: str
    A1: QMatrix
    A2: QMatrix
    A3: QMatrix
    A4: QMatrix
    C1: QMatrix
    C2: QMatrix
    C3: QMatrix
    C4: QMatrix
    E1: QMatrix
    E2: QMatrix
    E3: QMatrix
    E4: QMatrix
    Cc: QMatrix

    def __post_init__(self):
        check_eta(self.eta)
        cr, cc = self.Cc.shape
        if cr != cc:
            raise DimensionError("Cc must be square")
        for i in (1, 2, 3, 4):
            a = getattr(self, f"A{i}")
            c = getattr(self, f"C{i}")
            e = getattr(self, f"E{i}")
            if e.rows != cr:
                raise DimensionError(f"E{i} must have {cr} rows")
            if e.cols != a.cols:
                raise DimensionError(f"E{i} and A{i} must have equal columns")
            if c.rows != a.rows:
                raise DimensionError(f"C{i} and A{i} must have equal rows")
            want = cr if i == 1 else a.cols
            if c.cols != want:
                raise DimensionError(f"C{i} must have {want} columns")

    def unknown_shapes(self) -> dict:
        n = self.Cc.rows
        return {"U": (self.A1.cols, n),
                "X": (self.A2.cols, self.A2.cols),
                "Y": (self.A3.cols, self.A3.cols),
                "Z": (self.A4.cols, self.A4.cols)}

    def to_master(self) -> MasterInstance:
        """The doubled system, with right-side blocks eta-conjugated."""
        et = self.eta
        ec = lambda m: m.eta_conj_transpose(et)
        return MasterInstance(
            A1=self.A1, B1=ec(self.A1), C1=self.C1, D1=ec(self.C1),
            A2=self.A2, B2=ec(self.A2), C2=self.C2, D2=ec(self.C2),
            A3=self.A3, B3=ec(self.A3), C3=self.C3, D3=ec(self.C3),
            A4=self.A4, B4=ec(self.A4), C4=self.C4, D4=ec(self.C4),
            E1=self.E1, E2=self.E2, E3=self.E3, E4=self.E4,
            F1=ec(self.E1), F2=ec(self.E2), F3=ec(self.E3), F4=ec(self.E4),
            Cc=self.Cc)

    def residual_terms(self, sol) -> list:
        u, x, y, z = sol
        et = self.eta
        ec = lambda m: m.eta_conj_transpose(et)
        out = [("A1*U=C1", self.A1 @ u - self.C1, self.C1.norm()),
               ("A2*X=C2", self.A2 @ x - self.C2, self.C2.norm()),
               ("A3*Y=C3", self.A3 @ y - self.C3, self.C3.norm()),
               ("A4*Z=C4", self.A4 @ z - self.C4, self.C4.norm())]
        e1u = self.E1 @ u
        coupling = (e1u + ec(e1u) + self.E2 @ x @ ec(self.E2)
                    + self.E3 @ y @ ec(self.E3) + self.E4 @ z @ ec(self.E4)
                    - self.Cc)
        out.append(("coupling=Cc", coupling, self.Cc.norm()))
        out.extend(_herm_terms(et, [("X", x), ("Y", y), ("Z", z)]))
        return out


@dataclass(frozen=True)
class EtaThreeInstance:
    """Ai W = Ci with W = W^{eta*} for W in (X, Y, Z);
    sum_i Ei W Ei^{eta*} = C."""

    eta: str
    A1: QMatrix
    A2: QMatrix
    A3: QMatrix
    C1: QMatrix
    C2: QMatrix
    C3: QMatrix
    E1: QMatrix
    E2: QMatrix
    E3: QMatrix
    C: QMatrix

    def to_full(self) -> EtaFullInstance:
        n = self.C.rows
        z = QMatrix.zeros
        return EtaFullInstance(
            eta=self.eta,
            A1=z(0, 0), C1=z(0, n), E1=z(n, 0),
            A2=self.A1, C2=self.C1, E2=self.E1,
            A3=self.A2, C3=self.C2, E3=self.E2,
            A4=self.A3, C4=self.C3, E4=self.E3,
            Cc=self.C)

    def unknown_shapes(self) -> dict:
        return {"X": (self.A1.cols, self.A1.cols),
                "Y": (self.A2.cols, self.A2.cols),
                "Z": (self.A3.cols, self.A3.cols)}

    def residual_terms(self, sol) -> list:
        full = self.to_full()
        u = QMatrix.zeros(0, self.C.rows)
        terms = full.residual_terms((u,) + tuple(sol))
        renames = {"A2*X=C2": "A1*X=C1", "A3*Y=C3": "A2*Y=C2",
                   "A4*Z=C4": "A3*Z=C3", "coupling=Cc": "coupling=C"}
        return [(renames.get(n, n), d, s) for n, d, s in terms
                if n != "A1*U=C1"]


def check_eta_full(inst: EtaFullInstance,
                   tol: float = DEFAULT_TOL) -> SolvabilityReport:
    """Certificates via the doubled system.

    By the eta-symmetry of the doubled blocks, the master residual list
    collapses pairwise onto this system's own list (for example the
    final condition equals R_E22 E (R_E22)^{eta*} = 0), and the rank
    certificate's two halves carry equal ranks, realizing the doubled
    "= 2 r(...)" form."""
    _require_eta_hermitian(inst.Cc, inst.eta, "Cc")
    return check_master(inst.to_master(), tol)


def solve_eta_full(inst: EtaFullInstance, tol: float = DEFAULT_TOL,
                   branch: str = "first"):
    """Family (U, X, Y, Z) with X, Y, Z eta-Hermitian by construction."""
    _require_eta_hermitian(inst.Cc, inst.eta, "Cc")
    res = solve_master(inst.to_master(), tol, branch)
    if isinstance(res, Inconsistent):
        return res
    et = inst.eta

    def assemble(vals):
        u1, u2, xt, yt, zt = res.assemble(vals)
        u = (u1 + u2.eta_conj_transpose(et)) * 0.5
        return (u, symmetrize(xt, et), symmetrize(yt, et),
                symmetrize(zt, et))

    return LinearSolutionFamily(("U", "X", "Y", "Z"), res.free_params,
                                assemble)


def check_eta_three(inst: EtaThreeInstance,
                    tol: float = DEFAULT_TOL) -> SolvabilityReport:
    return check_eta_full(inst.to_full(), tol)


def solve_eta_three(inst: EtaThreeInstance, tol: float = DEFAULT_TOL,
                    branch: str = "first"):
    """Family (X, Y, Z), all eta-Hermitian."""
    res = solve_eta_full(inst.to_full(), tol, branch)
    if isinstance(res, Inconsistent):
        return res

    def assemble(vals):
        return res.assemble(vals)[1:]

    return LinearSolutionFamily(("X", "Y", "Z"), res.free_params, assemble)


# -- two-term equation with eta-Hermitian unknowns -------------------------

@dataclass(frozen=True)
class EtaTwoInstance:
    """B1 Y B1^{eta*} + C1 Z C1^{eta*} = D1 with Y, Z eta-Hermitian."""

    eta: str
    B1: QMatrix
    C1: QMatrix
    D1: QMatrix

    def __post_init__(self):
        check_eta(self.eta)
        d = self.D1
        if d.rows != d.cols:
            raise DimensionError("D1 must be square")
        if self.B1.rows != d.rows or self.C1.rows != d.rows:
            raise DimensionError("B1, C1 and D1 must have equal row counts")

    def unknown_shapes(self) -> dict:
        return {"Y": (self.B1.cols, self.B1.cols),
                "Z": (self.C1.cols, self.C1.cols)}

    def residual_terms(self, sol) -> list:
        y, z = sol
        et = self.eta
        ec = lambda m: m.eta_conj_transpose(et)
        coupling = (self.B1 @ y @ ec(self.B1) + self.C1 @ z @ ec(self.C1)
                    - self.D1)
        return ([("coupling=D1", coupling, self.D1.norm())]
                + _herm_terms(et, [("Y", y), ("Z", z)]))


class _EtaTwoWork:
    def __init__(self, inst: EtaTwoInstance, rank_tol=None):
        self.inst = inst
        self.rank_tol = rank_tol
        self.floor = cascade_floor(inst.B1, inst.C1, inst.D1)
        pv = lambda m: pinv(m, rank_tol, floor=self.floor)
        self.bB = pv(inst.B1)
        self.bC = pv(inst.C1)
        self.M = self.bB.proj_right @ inst.C1
        self.bM = pv(self.M)
        self.S = inst.C1 @ self.bM.proj_left
        self.bS = pv(self.S)

    def report(self, tol: float) -> SolvabilityReport:
        inst, et = self.inst, self.inst.eta
        b1, c1, d1 = inst.B1, inst.C1, inst.D1
        threshold = tol * (1.0 + d1.norm())
        mp = [
            residual_condition("R_M*R_B1*D1",
                               self.bM.proj_right @ (self.bB.proj_right @ d1),
                               threshold),
            residual_condition("R_B1*D1*(R_C1)^eta*",
                               self.bB.proj_right @ d1
                               @ self.bC.proj_right.eta_conj_transpose(et),
                               threshold),
        ]
        r = lambda m: rank(m, self.rank_tol, floor=self.floor)
        ranks = [
            rank_condition("r([B1,D1;0,C1^eta*])=r(B1)+r(C1)",
                           r(block([[b1, d1],
                                    [None, c1.eta_conj_transpose(et)]])),
                           self.bB.rank + self.bC.rank),
            rank_condition("r(B1,C1,D1)=r(B1,C1)",
                           r(hstack([b1, c1, d1])), r(hstack([b1, c1]))),
        ]
        return SolvabilityReport.build([], mp, ranks)

    def family(self) -> LinearSolutionFamily:
        inst, et = self.inst, self.inst.eta
        ec = lambda m: m.eta_conj_transpose(et)
        b1, c1, d1 = inst.B1, inst.C1, inst.D1
        bB, bC, bM, bS = self.bB, self.bC, self.bM, self.bS
        s = self.S
        nb, nc = b1.cols, c1.cols
        eye_d = QMatrix.identity(d1.rows)
        eye_c = QMatrix.identity(nc)
        y_base = (bB.pinv @ d1 @ ec(bB.pinv)
                  - 0.5 * (bB.pinv @ c1 @ bM.pinv @ d1
                           @ (eye_d + ec(bC.pinv) @ ec(s)) @ ec(bB.pinv))
                  - 0.5 * (bB.pinv @ (eye_d + s @ bC.pinv) @ d1
                           @ ec(bM.pinv) @ ec(c1) @ ec(bB.pinv)))
        z_base = (0.5 * (bM.pinv @ d1 @ ec(bC.pinv)
                         @ (eye_c + ec(bS.pinv @ s)))
                  + 0.5 * ((eye_c + bS.pinv @ s) @ bC.pinv @ d1
                          @ ec(bM.pinv)))
        params = (FreeParam("W1", (nc, nc)), FreeParam("U", (nb, nb)),
                  FreeParam("V", (nc, nc)),
                  FreeParam("W2", (nc, nc), eta=et))

        def assemble(vals):
            w1, u, v, w2 = (vals["W1"], vals["U"], vals["V"], vals["W2"])
            y = (y_base
                 - bB.pinv @ s @ w2 @ ec(s) @ ec(bB.pinv)
                 + bB.proj_left @ u + ec(u) @ ec(bB.proj_left))
            z = (z_base
                 + bM.proj_left @ w2 @ ec(bM.proj_left)
                 + v @ ec(bC.proj_left) + bC.proj_left @ ec(v)
                 + bM.proj_left @ bS.proj_left @ w1
                 + ec(w1) @ ec(bS.proj_left) @ ec(bM.proj_left))
            return (y, z)

        return LinearSolutionFamily(("Y", "Z"), params, assemble)


def check_eta_two(inst: EtaTwoInstance,
                  tol: float = DEFAULT_TOL) -> SolvabilityReport:
    _require_eta_hermitian(inst.D1, inst.eta, "D1")
    return _EtaTwoWork(inst).report(tol)


def solve_eta_two(b1: QMatrix, c1: QMatrix, d1: QMatrix, eta: str,
                  tol: float = DEFAULT_TOL):
    """Eta-Hermitian pair (Y, Z) solving B1 Y B1^{eta*} + C1 Z C1^{eta*} = D1.

    D1 must be eta-Hermitian (precondition).  Free parameters are W1, U,
    V and the eta-Hermitian W2."""
    inst = EtaTwoInstance(eta, b1, c1, d1)
    _require_eta_hermitian(d1, eta, "D1")
    work = _EtaTwoWork(inst)
    report = work.report(tol)
    if not report.consistent:
        return Inconsistent(report)
    return work.family()


# -- mixed one-sided / two-sided eta system --------------------------------

@dataclass(frozen=True)
class EtaMixedInstance:
    """A1 X = C1, Y B1 = D1, A2 X A2^{eta*} + A3 Y A3^{eta*} = D3,
    with X, Y eta-Hermitian."""

    eta: str
    A1: QMatrix
    C1: QMatrix
    B1: QMatrix
    D1: QMatrix
    A2: QMatrix
    A3: QMatrix
    D3: QMatrix

    def __post_init__(self):
        check_eta(self.eta)
        if self.D3.rows != self.D3.cols:
            raise DimensionError("D3 must be square")
        checks = [
            ("C1", self.C1.rows, self.A1.rows),
            ("C1", self.C1.cols, self.A1.cols),
            ("D1", self.D1.rows, self.B1.rows),
            ("D1", self.D1.cols, self.B1.cols),
            ("A2", self.A2.rows, self.D3.rows),
            ("A2", self.A2.cols, self.A1.cols),
            ("A3", self.A3.rows, self.D3.rows),
            ("A3", self.A3.cols, self.B1.rows),
        ]
        for name, got, want in checks:
            if got != want:
                raise DimensionError(
                    f"block {name} has incompatible dimensions "
                    f"(got {got}, expected {want})")

    def unknown_shapes(self) -> dict:
        return {"X": (self.A1.cols, self.A1.cols),
                "Y": (self.B1.rows, self.B1.rows)}

    def residual_terms(self, sol) -> list:
        x, y = sol
        et = self.eta
        ec = lambda m: m.eta_conj_transpose(et)
        coupling = (self.A2 @ x @ ec(self.A2) + self.A3 @ y @ ec(self.A3)
                    - self.D3)
        return ([("A1*X=C1", self.A1 @ x - self.C1, self.C1.norm()),
                 ("Y*B1=D1", y @ self.B1 - self.D1, self.D1.norm()),
                 ("coupling=D3", coupling, self.D3.norm())]
                + _herm_terms(et, [("X", x), ("Y", y)]))


class _EtaMixedWork:
    def __init__(self, inst: EtaMixedInstance, rank_tol=None):
        self.inst = inst
        et = inst.eta
        ec = lambda m: m.eta_conj_transpose(et)
        self.floor = cascade_floor(inst.A1, inst.C1, inst.B1, inst.D1,
                                   inst.A2, inst.A3, inst.D3)
        pv = lambda m: pinv(m, rank_tol, floor=self.floor)
        self.rank_tol = rank_tol
        self.bA1, self.bB1 = pv(inst.A1), pv(inst.B1)
        p1 = self.bA1.pinv @ inst.C1
        self.x_part = (p1 + ec(p1)
                       - self.bA1.pinv @ inst.A1 @ ec(inst.C1) @ ec(self.bA1.pinv))
        p2 = inst.D1 @ self.bB1.pinv
        self.y_part = (p2 + ec(p2)
                       - ec(self.bB1.pinv) @ ec(inst.B1) @ inst.D1 @ self.bB1.pinv)
        self.B4 = inst.A2 @ self.bA1.proj_left
        self.C4 = inst.A3 @ ec(self.bB1.proj_right)
        self.D4 = (inst.D3 - inst.A2 @ self.x_part @ ec(inst.A2)
                   - inst.A3 @ self.y_part @ ec(inst.A3))

    def side_conditions(self, tol: float):
        inst, et = self.inst, self.inst.eta
        ec = lambda m: m.eta_conj_transpose(et)
        threshold = tol * (1.0 + inst.C1.norm() + inst.D1.norm()
                           + inst.D3.norm())
        compat = [
            residual_condition("A1*C1^eta*=C1*A1^eta*",
                               inst.A1 @ ec(inst.C1) - inst.C1 @ ec(inst.A1),
                               threshold),
            residual_condition("B1^eta**D1=D1^eta**B1",
                               ec(inst.B1) @ inst.D1 - ec(inst.D1) @ inst.B1,
                               threshold),
        ]
        mp = [
            residual_condition("R_A1*C1", self.bA1.proj_right @ inst.C1,
                               threshold),
            residual_condition("D1*L_B1", inst.D1 @ self.bB1.proj_left,
                               threshold),
        ]
        return compat, mp

    def side_ranks(self):
        inst = self.inst
        r = lambda m: rank(m, self.rank_tol, floor=self.floor)
        return [
            rank_condition("r(A1,C1)=r(A1)",
                           r(hstack([inst.A1, inst.C1])), self.bA1.rank),
            rank_condition("r(D1;B1)=r(B1)",
                           r(vstack([inst.D1, inst.B1])), self.bB1.rank),
        ]


def check_eta_mixed(inst: EtaMixedInstance,
                    tol: float = DEFAULT_TOL) -> SolvabilityReport:
    _require_eta_hermitian(inst.D3, inst.eta, "D3")
    work = _EtaMixedWork(inst)
    compat, mp = work.side_conditions(tol)
    inner = _EtaTwoWork(EtaTwoInstance(inst.eta, work.B4, work.C4, work.D4))
    inner_rep = inner.report(tol)
    return SolvabilityReport.build(
        compat, mp + inner_rep.mp_conditions,
        work.side_ranks() + inner_rep.rank_conditions)


def solve_eta_mixed(a1, c1, b1, d1, a2, a3, d3, eta, tol: float = DEFAULT_TOL):
    """Eta-Hermitian pair (X, Y) for the mixed system.

    Substituting the general eta-Hermitian solutions of the two
    one-sided equations into the two-sided one leaves an equation of the
    eta-two form in the projected free blocks (V, W); its family is
    embedded back.  Free parameters: U3, U4, U5 and eta-Hermitian U6."""
    inst = EtaMixedInstance(eta, a1, c1, b1, d1, a2, a3, d3)
    _require_eta_hermitian(d3, eta, "D3")
    work = _EtaMixedWork(inst)
    compat, mp = work.side_conditions(tol)
    inner_work = _EtaTwoWork(EtaTwoInstance(eta, work.B4, work.C4, work.D4))
    inner_rep = inner_work.report(tol)
    report = SolvabilityReport.build(
        compat, mp + inner_rep.mp_conditions,
        work.side_ranks() + inner_rep.rank_conditions)
    if not report.consistent:
        return Inconsistent(report)
    inner = inner_work.family()
    ec = lambda m: m.eta_conj_transpose(eta)
    la1 = work.bA1.proj_left
    rb1 = work.bB1.proj_right
    nx, ny = a1.cols, b1.rows
    params = (FreeParam("U3", (ny, ny)), FreeParam("U4", (nx, nx)),
              FreeParam("U5", (ny, ny)), FreeParam("U6", (ny, ny), eta=eta))

    def assemble(vals):
        v, w = inner.assemble({"W1": vals["U3"], "U": vals["U4"],
                               "V": vals["U5"], "W2": vals["U6"]})
        x = work.x_part + la1 @ v @ ec(la1)
        y = work.y_part + ec(rb1) @ w @ rb1
        return (x, y)

    return LinearSolutionFamily(("X", "Y"), params, assemble)
