import dataclasses

import pytest

from qsylv import FiveTermInstance, Inconsistent, zeros
from qsylv.solvers import (check_five_term, five_term_intermediates,
                           solve_five_term)
from qsylv.solvers.five_term import FIVE_TERM_PARAM_NAMES


def planted(rand_q, p, q, dims):
    (a1, b1), (a2, b2), (a3, b3), (a4, b4) = dims
    mats = dict(
        A1=rand_q(p, a1), B1=rand_q(b1, q), A2=rand_q(p, a2),
        B2=rand_q(b2, q), A3=rand_q(p, a3), B3=rand_q(b3, q),
        A4=rand_q(p, a4), B4=rand_q(b4, q))
    wit = (rand_q(a1, q), rand_q(p, b1), rand_q(a2, b2),
           rand_q(a3, b3), rand_q(a4, b4))
    rhs = (mats["A1"] @ wit[0] + wit[1] @ mats["B1"]
           + mats["A2"] @ wit[2] @ mats["B2"]
           + mats["A3"] @ wit[3] @ mats["B3"]
           + mats["A4"] @ wit[4] @ mats["B4"])
    return FiveTermInstance(B=rhs, **mats), wit


class TestIntermediates:
    def test_data_carrying_fields_vanish_for_zero_coefficients(self):
        z, zb = zeros(3, 2), zeros(2, 3)
        inst = FiveTermInstance(z, zb, z, zb, z, zb, z, zb, zeros(3, 3))
        ints = five_term_intermediates(inst)
        # projector-valued intermediates degenerate to identities, the
        # data-carrying ones must vanish exactly
        for name in ("A11", "A22", "A33", "B11", "B22", "B33", "T1", "N1",
                     "M1", "S1", "C1", "C2", "C3", "C4", "D1", "D2", "D3",
                     "D4", "E1", "E2", "E3", "E4", "F1", "F2", "E", "G1",
                     "G2", "F11", "F22"):
            assert getattr(ints, name).norm() == 0.0, name

    def test_invertible_a1_kills_left_cascade(self, rand_q):
        inst = FiveTermInstance(rand_q(3, 3), rand_q(2, 3), rand_q(3, 2),
                                rand_q(2, 3), rand_q(3, 2), rand_q(2, 3),
                                rand_q(3, 2), rand_q(2, 3), rand_q(3, 3))
        ints = five_term_intermediates(inst)
        for name in ("A11", "A22", "A33"):
            assert getattr(ints, name).norm() <= 1e-12

    def test_recompute_idempotent(self, rand_q):
        inst, _ = planted(rand_q, 4, 4, [(2, 2)] * 4)
        i1 = five_term_intermediates(inst)
        i2 = five_term_intermediates(inst)
        for f in dataclasses.fields(i1):
            assert (getattr(i1, f.name) - getattr(i2, f.name)).norm() == 0.0


class TestSolve:
    def test_zero_rhs_zero_particular(self, rand_q):
        inst = FiveTermInstance(rand_q(3, 2), rand_q(2, 3), rand_q(3, 2),
                                rand_q(2, 3), rand_q(3, 2), rand_q(2, 3),
                                rand_q(3, 2), rand_q(2, 3), zeros(3, 3))
        fam = solve_five_term(inst)
        assert all(m.norm() == 0.0 for m in fam.particular)

    def test_reduces_to_roth_equation(self, rng, rand_q):
        a1, b1 = rand_q(3, 2), rand_q(2, 4)
        x1, x2 = rand_q(2, 4), rand_q(3, 2)
        inst = FiveTermInstance(a1, b1, zeros(3, 0), zeros(0, 4),
                                zeros(3, 0), zeros(0, 4), zeros(3, 0),
                                zeros(0, 4), a1 @ x1 + x2 @ b1)
        fam = solve_five_term(inst)
        for _ in range(3):
            sol = fam.assemble(fam.random_params(rng))
            assert inst.residual(sol).norm() <= 1e-10
            assert sol[2].shape == (0, 0)

    def test_planted_parameter_sweep_both_branches(self, rng, rand_q):
        inst, _ = planted(rand_q, 4, 5, [(2, 3), (3, 2), (2, 2), (3, 3)])
        report = check_five_term(inst)
        assert report.consistent and report.forms_agree
        scale = 1.0 + inst.B.norm()
        for branch in ("first", "second"):
            fam = solve_five_term(inst, branch=branch)
            assert [p.name for p in fam.free_params] == \
                list(FIVE_TERM_PARAM_NAMES)
            for _ in range(5):
                sol = fam.assemble(fam.random_params(rng))
                assert inst.residual(sol).norm() <= 1e-8 * scale

    def test_branch_difference_stays_in_kernel(self, rng, rand_q):
        inst, _ = planted(rand_q, 4, 4, [(2, 2)] * 4)
        params = None
        sol1 = solve_five_term(inst, branch="first").assemble(params)
        sol2 = solve_five_term(inst, branch="second").assemble(params)
        scale = 1.0 + inst.B.norm()
        assert inst.residual(sol1).norm() <= 1e-9 * scale
        assert inst.residual(sol2).norm() <= 1e-9 * scale
        # both are solutions, so the difference is annihilated
        diff = tuple(a - b for a, b in zip(sol1, sol2))
        hom = (inst.A1 @ diff[0] + diff[1] @ inst.B1
               + inst.A2 @ diff[2] @ inst.B2 + inst.A3 @ diff[3] @ inst.B3
               + inst.A4 @ diff[4] @ inst.B4)
        assert hom.norm() <= 1e-9 * scale

    def test_inconsistent_detected(self, rand_q):
        # rhs far outside reach: coefficients of rank 1 into a 5x5 target
        inst = FiveTermInstance(rand_q(5, 1), rand_q(1, 5), rand_q(5, 1),
                                rand_q(1, 5), rand_q(5, 1), rand_q(1, 5),
                                rand_q(5, 1), rand_q(1, 5), rand_q(5, 5))
        res = solve_five_term(inst)
        assert isinstance(res, Inconsistent)
        assert res.report.forms_agree
        assert res.failing_conditions

    def test_dimension_validation(self, rand_q):
        with pytest.raises(Exception):
            FiveTermInstance(rand_q(2, 2), rand_q(2, 3), rand_q(3, 2),
                             rand_q(2, 3), rand_q(3, 2), rand_q(2, 3),
                             rand_q(3, 2), rand_q(2, 3), rand_q(3, 3))

    def test_param_shape_validation(self, rand_q):
        inst, _ = planted(rand_q, 3, 3, [(2, 2)] * 4)
        fam = solve_five_term(inst)
        with pytest.raises(Exception):
            fam.assemble({"U1": zeros(1, 1)})
        with pytest.raises(KeyError):
            fam.assemble({"nope": zeros(1, 1)})
