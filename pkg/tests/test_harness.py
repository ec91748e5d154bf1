import dataclasses

import pytest

from qsylv import zeros
from qsylv.harness import (VARIANTS, DimensionProfile, _check_instance,
                           gen_consistent, gen_inconsistent, gen_planted,
                           gen_unsolvable, verify_solution)
from qsylv.qmatrix import DimensionError
from qsylv.solvers.master import check_master, solve_master


def test_profile_validation():
    with pytest.raises(DimensionError):
        DimensionProfile(cc_rows=2, cc_cols=2, blocks=((1, 1, 1, 1),) * 3)
    with pytest.raises(DimensionError):
        DimensionProfile(cc_rows=99, cc_cols=2)
    DimensionProfile.cube(3, seed=5)


def test_gen_consistent_witness_passes():
    inst, wit = gen_consistent(DimensionProfile.cube(2, seed=0))
    assert check_master(inst).consistent
    report = verify_solution(inst, wit)
    assert report.passed
    assert len(report.entries) == 9


def test_gen_consistent_deterministic():
    p = DimensionProfile.cube(2, seed=99)
    i1, _ = gen_consistent(p)
    i2, _ = gen_consistent(p)
    for f in dataclasses.fields(i1):
        a, b = getattr(i1, f.name), getattr(i2, f.name)
        assert (a.w == b.w).all() and (a.x == b.x).all()
        assert (a.y == b.y).all() and (a.z == b.z).all()


def test_gen_consistent_empty_blocks_allowed():
    profile = DimensionProfile(cc_rows=3, cc_cols=3,
                               blocks=((0, 0, 0, 0), (2, 3, 3, 2),
                                       (2, 3, 3, 2), (2, 3, 3, 2)),
                               seed=5)
    inst, wit = gen_consistent(profile)
    assert inst.A1.shape == (0, 0)
    assert check_master(inst).consistent
    assert verify_solution(inst, wit).passed


def test_gen_inconsistent_three_profiles():
    for seed in (0, 1, 2):
        bad = gen_inconsistent(DimensionProfile.cube(2, seed=seed))
        rep = check_master(bad)
        assert not rep.consistent and rep.forms_agree


def test_gen_inconsistent_rejects_spanning_profile():
    # square invertible coefficient blocks make every right side
    # reachable through the one-sided unknowns... but the side equations
    # pin them, so use a genuinely spanning geometry: huge E against a
    # tiny coupling target is still reachable; a 1x1 target with a free
    # unknown spans
    profile = DimensionProfile(cc_rows=1, cc_cols=1,
                               blocks=((1, 2, 2, 1),) * 4, seed=3)
    with pytest.raises(RuntimeError):
        gen_inconsistent(profile, retries=4)


def test_verify_solution_shape_errors():
    inst, wit = gen_consistent(DimensionProfile.cube(2, seed=7))
    with pytest.raises(DimensionError):
        verify_solution(inst, wit.as_tuple()[:3])
    bad = list(wit.as_tuple())
    bad[0] = zeros(1, 1)
    with pytest.raises(DimensionError):
        verify_solution(inst, tuple(bad))


def test_verify_zero_solution_fails_with_rhs_norm():
    inst, _ = gen_consistent(DimensionProfile.cube(2, seed=8))
    zero = tuple(zeros(*s) for s in inst.unknown_shapes().values())
    report = verify_solution(inst, zero)
    assert not report.passed
    coupling = [e for e in report.entries if e.name == "coupling=Cc"][0]
    assert abs(coupling.absolute - inst.Cc.norm()) <= 1e-12


@pytest.mark.parametrize("variant", VARIANTS)
def test_every_variant_generator(variant, rng):
    inst, wit = gen_planted(variant, 2, seed=13, eta="j")
    assert verify_solution(inst, wit).passed
    rep = _check_instance(variant, inst, 1e-9)
    assert rep.consistent, (variant, rep.failing())
    bad = gen_unsolvable(variant, 2, seed=13, eta="j")
    rep = _check_instance(variant, bad, 1e-9)
    assert not rep.consistent and rep.forms_agree


def test_solve_master_on_generated_batch(rng):
    for seed in range(4):
        inst, _ = gen_consistent(DimensionProfile.cube(2, seed=seed))
        fam = solve_master(inst)
        sol = fam.assemble(fam.random_params(rng))
        assert verify_solution(inst, sol, tol=1e-8).passed
