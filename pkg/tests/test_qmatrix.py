import numpy as np
import pytest

from qsylv import (DimensionError, QMatrix, Quaternion, StructureError, block,
                   hstack, identity, unembed, vstack, zeros)
from qsylv.qcore import I, J, K
from qsylv.qmatrix import structure_project, unembed_projected


def test_matmul_lifts_scalar_product():
    a = QMatrix.from_entries([[I]])
    b = QMatrix.from_entries([[J]])
    assert (a @ b).entry(0, 0) == K


def test_identity_and_empty_products(rand_q):
    a = rand_q(2, 5)
    assert ((identity(2) @ a) - a).norm() == 0.0
    left = rand_q(3, 0)
    right = zeros(0, 4)
    prod = left @ right
    assert prod.shape == (3, 4) and prod.norm() == 0.0


def test_matmul_shape_error(rand_q):
    with pytest.raises(DimensionError):
        rand_q(2, 3) @ rand_q(2, 3)


def test_conj_transpose_examples():
    a = QMatrix.from_entries([[I, J]])
    act = a.conj_transpose()
    assert act.shape == (2, 1)
    assert act.entry(0, 0) == -I and act.entry(1, 0) == -J
    b = QMatrix.from_entries([[Quaternion(1, 1, 0, 0)]])
    assert b.conj_transpose().entry(0, 0) == Quaternion(1, -1, 0, 0)
    assert (a.conj_transpose().conj_transpose() - a).norm() == 0.0


def test_conj_transpose_product_rule(rand_q):
    a, b = rand_q(3, 4), rand_q(4, 2)
    lhs = (a @ b).conj_transpose()
    rhs = b.conj_transpose() @ a.conj_transpose()
    assert (lhs - rhs).norm() <= 1e-13 * (1 + lhs.norm())


def test_eta_conj_transpose(rand_q):
    one = QMatrix.from_entries([[I]])
    assert one.eta_conj_transpose("i").entry(0, 0) == -I
    sym = QMatrix.from_entries([[1.0, 2.0], [2.0, -3.0]])
    assert (sym.eta_conj_transpose("i") - sym).norm() == 0.0
    jj = QMatrix.from_entries([[J, 0], [0, J]])
    # oracle: the explicit -eta A^* eta product
    eta_mat = QMatrix.from_entries([[J, 0], [0, J]])
    direct = -(eta_mat @ jj.conj_transpose() @ eta_mat)
    assert (jj.eta_conj_transpose("j") - direct).norm() == 0.0
    a = rand_q(3, 4)
    for eta in ("i", "j", "k"):
        assert (a.eta_conj_transpose(eta).eta_conj_transpose(eta)
                - a).norm() == 0.0


def test_embed_examples():
    one = QMatrix.from_entries([[1.0]])
    assert np.array_equal(one.embed(), np.eye(2))
    jm = QMatrix.from_entries([[J]])
    assert np.array_equal(jm.embed(), np.array([[0, 1], [-1, 0]], dtype=complex))


def test_embed_is_ring_homomorphism(rand_q):
    a, b = rand_q(3, 2), rand_q(2, 4)
    lhs = (a @ b).embed()
    rhs = a.embed() @ b.embed()
    assert np.linalg.norm(lhs - rhs) <= 1e-12 * max(1.0, np.linalg.norm(lhs))
    c = rand_q(3, 2)
    assert np.linalg.norm((a + c).embed() - (a.embed() + c.embed())) == 0.0
    assert np.linalg.norm(a.conj_transpose().embed()
                          - a.embed().conj().T) <= 1e-15


def test_unembed_round_trip(rand_q):
    a = rand_q(4, 3)
    assert (unembed(a.embed()) - a).norm() == 0.0
    assert (unembed(np.eye(2)) - identity(1)).norm() == 0.0


def test_unembed_structure_violation():
    bad = np.array([[0, 0], [1, 0]], dtype=complex)
    with pytest.raises(StructureError):
        unembed(bad)
    with pytest.raises(StructureError):
        unembed(np.zeros((3, 2)))
    # projection repairs the structure
    fixed = structure_project(bad)
    got = unembed(fixed)
    assert got.shape == (1, 1)
    assert (unembed_projected(bad) - got).norm() == 0.0


def test_block_assembly_round_trip(rand_q):
    a, b = rand_q(2, 3), rand_q(2, 1)
    c, d = rand_q(4, 3), rand_q(4, 1)
    m = block([[a, b], [c, d]])
    assert m.shape == (6, 4)
    assert (m.submatrix(slice(0, 2), slice(0, 3)) - a).norm() == 0.0
    assert (m.submatrix(slice(2, 6), slice(3, 4)) - d).norm() == 0.0
    with_zeros = block([[a, None], [None, d]])
    assert (with_zeros.submatrix(slice(0, 2), slice(3, 4))).norm() == 0.0
    assert (hstack([a, b]) - block([[a, b]])).norm() == 0.0
    assert (vstack([a, c]) - block([[a], [c]])).norm() == 0.0


def test_block_errors(rand_q):
    with pytest.raises(DimensionError):
        block([[rand_q(2, 2), rand_q(3, 2)]])
    with pytest.raises(DimensionError):
        block([[None, None], [rand_q(2, 2), None]])
    with pytest.raises(DimensionError):
        hstack([rand_q(2, 2), rand_q(3, 2)])
    with pytest.raises(DimensionError):
        vstack([rand_q(2, 2), rand_q(2, 3)])


def test_scalar_multiplication():
    # scalar multiplication is side-sensitive: j*i = -k but i*j = k
    a = QMatrix.from_entries([[I]])
    assert (J * a).entry(0, 0) == Quaternion(0, 0, 0, -1)
    assert (a * J).entry(0, 0) == K
    assert ((a * 2.0) - (2.0 * a)).norm() == 0.0


def test_norms(rand_q):
    a = rand_q(3, 3)
    emb = np.linalg.norm(a.embed()) / np.sqrt(2.0)
    assert abs(a.norm() - emb) <= 1e-12 * (1 + emb)
    assert zeros(2, 2).norm() == 0.0
    assert zeros(0, 3).norm() == 0.0


def test_entries_round_trip():
    entries = [[Quaternion(1, 2, 3, 4), 5.0], [(0, 1, 0, 0), Quaternion()]]
    m = QMatrix.from_entries(entries)
    back = m.entries()
    assert back[0] == Quaternion(1, 2, 3, 4)
    assert back[1] == Quaternion(5)
    assert back[2] == I
