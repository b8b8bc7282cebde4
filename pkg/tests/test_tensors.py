import random
from fractions import Fraction
from itertools import product

import pytest

from trislice.errors import HypothesisError, OrderError, ParameterError
from trislice.family import SetFamily
from trislice.linalg import Shape, rank_mod_p
from trislice.profile import LiuConfiguration
from trislice.tensors import (
    frankl_wilson_matrix,
    liu_matrix,
    product_tensor,
    size_sorted,
    slice_decompose,
    snevily_full_matrix,
    snevily_matrix,
)

from gen import fw_instance, liu_instance, snevily_instance


def test_snevily_example():
    fam = SetFamily.from_lists(4, [[2, 3], [1, 3], [1, 2]])
    t = snevily_matrix(fam, {1}, 2)
    assert t.dim == 3
    assert all(t.matrix[i, i] == 1 for i in range(3))
    assert all(t.matrix[i, j] == 0 for i in range(3) for j in range(i + 1, 3))
    assert t.certificate.shape in (Shape.LOWER, Shape.DIAGONAL)
    assert t.rank() == 3


def test_snevily_singleton():
    t = snevily_matrix(SetFamily.from_lists(3, [[1]]), {0}, 2)
    assert t.matrix.rows == ((1,),) and t.rank() == 1


def test_snevily_order_and_hypotheses():
    with pytest.raises(OrderError):
        snevily_matrix(SetFamily.from_lists(4, [[1, 2], [2, 3]]), {1}, 2)
    with pytest.raises(HypothesisError):
        snevily_matrix(SetFamily.from_lists(4, [[2], [1, 2]]), {1}, 2)
    # forced build on a non-qualifying family still returns a certificate
    fam = SetFamily.from_lists(4, [[4], [3], [3, 4]])
    t = snevily_matrix(fam, {1}, 2, force=True)
    assert t.dim == 3


def test_snevily_modified_agrees_with_full_below_diagonal():
    rng = random.Random(11)
    for _ in range(100):
        fam, L, p = snevily_instance(rng)
        fam = fam.lex_sorted()
        mod = snevily_matrix(fam, L, p).matrix
        full = snevily_full_matrix(fam, L, p)
        for r in range(len(fam)):
            for s in range(r, len(fam)):
                # row X <= column Y in lex order, so x_1 y_1 = x_1
                assert mod[r, s] == full[r, s]


def test_snevily_full_tensor_is_diagonal():
    rng = random.Random(12)
    for _ in range(50):
        fam, L, p = snevily_instance(rng)
        full = snevily_full_matrix(fam, L, p)
        assert rank_mod_p(full) == len(fam)


def test_frankl_wilson_examples():
    t = frankl_wilson_matrix(SetFamily.from_lists(3, [[1], [2], [3]]), {0})
    assert t.matrix.rows == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    t = frankl_wilson_matrix(SetFamily.from_lists(2, [[], [1], [2]]), {0})
    assert t.matrix[0, 0] == 1
    assert all(t.matrix[i, j] == 0 for i in range(3) for j in range(i + 1, 3))
    assert t.rank() == 3
    with pytest.raises(HypothesisError):
        frankl_wilson_matrix(SetFamily.from_lists(3, [[1, 2], [1, 3]]), {0})
    with pytest.raises(OrderError):
        frankl_wilson_matrix(SetFamily.from_lists(3, [[1, 2], [3]]), {0})


def test_frankl_wilson_delta_applies_per_factor():
    # Y empty, L = {0, 1}: (0 - 0 + 1) * (0 - 1 + 0) = -1, whereas adding one
    # correction to the whole product would give 0 * -1 + 1 = 1
    t = frankl_wilson_matrix(SetFamily.from_lists(2, [[]]), {0, 1})
    assert t.matrix[0, 0] == -1
    t = frankl_wilson_matrix(SetFamily.from_lists(2, [[1]]), {0, 1})
    assert t.matrix[0, 0] == 1
    t = frankl_wilson_matrix(SetFamily.from_lists(3, [[1, 2]]), {0, 1})
    assert t.matrix[0, 0] == 2


def test_size_sort_is_stable():
    fam = SetFamily.from_lists(3, [[1, 2], [3], [1], [2, 3]])
    assert size_sorted(fam).to_lists() == [[3], [1], [1, 2], [2, 3]]


def test_liu_examples():
    cfg = LiuConfiguration(
        SetFamily.from_lists(3, [[1], [2]]).lex_sorted(),
        SetFamily.from_lists(3, [[2, 3], [1, 3]]),
        {0},
    )
    t = liu_matrix(cfg)
    assert t.dim == 2 and t.rank() == 2
    assert t.matrix[0, 0] == 1 and t.matrix[0, 1] == 0
    one = LiuConfiguration(SetFamily.from_lists(1, [[1]]), SetFamily.from_lists(1, [[1]]), {0})
    assert liu_matrix(one).matrix.rows == ((1,),)
    bad = LiuConfiguration(SetFamily.from_lists(3, [[1]]), SetFamily.from_lists(3, [[2]]), {0})
    with pytest.raises(HypothesisError):
        liu_matrix(bad)


def test_random_tensors_certify():
    rng = random.Random(13)
    for _ in range(40):
        fam, L = fw_instance(rng)
        t = frankl_wilson_matrix(size_sorted(fam), L)
        assert t.certificate.triangular_nonsingular and t.rank() == len(fam)
        cfg = liu_instance(rng).lex_sorted()
        t = liu_matrix(cfg)
        assert t.certificate.triangular_nonsingular and t.rank() == len(cfg)


def test_slice_examples():
    dec = slice_decompose(1, 2, [5])
    assert [sorted(t.monomial) for t in dec.terms] == [[], [1], [2]]
    assert dec.bound == 3
    assert dec.terms[0].coefficients[(0, 0)] == 5
    assert dec.terms[1].coefficients[(1, 0)] == 1 and (0, 1) not in dec.terms[1].coefficients
    dec = slice_decompose(2, 2, [1, 2])
    assert len(dec.terms) == 4 and dec.bound == 4
    with pytest.raises(ParameterError):
        slice_decompose(3, 2, [0, 0, 0])
    with pytest.raises(ParameterError):
        slice_decompose(2, 2, [0])


def test_slice_with_row_dependent_shifts():
    rng = random.Random(14)
    m, l = 4, 3
    vecs = list(product((0, 1), repeat=m))
    shifts = [{x: Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for x in vecs} for _ in range(l)]
    shifts[1] = lambda x: -sum(x)
    dec = slice_decompose(l, m, shifts)
    assert len(dec.terms) <= dec.bound
    for x in vecs:
        for y in vecs:
            assert dec.evaluate(x, y) == product_tensor(x, y, shifts)
