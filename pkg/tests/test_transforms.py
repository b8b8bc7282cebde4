import random

import pytest

from trislice.errors import DuplicationError, PreconditionError, VerificationError
from trislice.family import SetFamily
from trislice.profile import IntersectionProfile, is_valid
from trislice.transforms import complement_replace, disjoint_level, shrink_small, trace

from gen import complement_instance, trace_instance

ROT = IntersectionProfile.modular(2, 0, 1)
K3 = IntersectionProfile.modular(2, 0, 0, 1)
HAND = SetFamily.from_lists(8, [[1, 2, 3, 4], [1, 2, 5, 6], [1, 3, 5, 7]])


def test_complement_example():
    fam = SetFamily.from_lists(4, [[1, 2], [1, 3], [2, 3]])
    out = complement_replace(fam, 0, ROT)
    assert out.to_lists() == [[3, 4], [1, 3], [2, 3]]
    assert is_valid(out, ROT)


def test_complement_preconditions():
    with pytest.raises(PreconditionError, match="divide"):
        complement_replace(SetFamily.from_lists(5, [[1, 2], [1, 3]]), 0, ROT)
    with pytest.raises(PreconditionError):
        complement_replace(SetFamily.from_lists(5, [[1, 2, 3, 4, 5]]), 0, IntersectionProfile.modular(5, 0, 1))
    with pytest.raises(PreconditionError):
        complement_replace(SetFamily.from_lists(4, [[1, 2]]), 0, IntersectionProfile.modular(2, 1, 0))


def test_complement_collision():
    fam = SetFamily.from_lists(4, [[], [1, 2, 3, 4]])
    with pytest.raises(DuplicationError):
        complement_replace(fam, 0, IntersectionProfile.modular(2, 0, 0))


def test_trace_examples():
    res = trace(HAND, 0, K3)
    assert res.family.n == 4 and res.family.to_lists() == [[1, 2], [1, 3]]
    assert res.profile == ROT
    res = trace(HAND, 1, K3)
    assert res.relabel == {1: 1, 2: 2, 5: 3, 6: 4}
    assert res.family.to_lists() == [[1, 2], [1, 3]]
    assert is_valid(res.family, res.profile)


def test_trace_needs_disjoint_levels():
    with pytest.raises(PreconditionError):
        trace(HAND, 0, IntersectionProfile.modular(2, 0, 0, 0))
    # two levels never have a usable t
    with pytest.raises(PreconditionError):
        trace(SetFamily.from_lists(4, [[1, 2], [1, 3]]), 0, ROT)
    assert disjoint_level(K3) == 2


def test_trace_rejects_invalid_family():
    bad = SetFamily.from_lists(8, [[1, 2, 3, 4], [1, 2, 5, 6], [1, 2, 7, 8]])
    with pytest.raises(PreconditionError):
        trace(bad, 0, K3)


def test_shrink_small():
    fam = SetFamily.from_lists(8, [[1, 2, 3, 4, 5, 6], [1, 2], [1, 3]])
    # complement of the first member is {7, 8}, which meets {1, 2} evenly
    with pytest.raises(VerificationError):
        shrink_small(fam, ROT)
    small = SetFamily.from_lists(4, [[1, 2], [1, 3], [2, 3]])
    assert shrink_small(small, ROT) == small
    big = SetFamily.from_lists(4, [[1, 2, 3, 4], [1, 2], [1, 3]])
    with pytest.raises(VerificationError):
        shrink_small(big, ROT)
    with pytest.raises(DuplicationError):
        shrink_small(SetFamily.from_lists(4, [[], [1, 2, 3, 4]]), IntersectionProfile.modular(2, 0, 0))


def test_shrink_valid_families_stay_valid():
    rng = random.Random(21)
    for _ in range(100):
        fam, prof, _ = complement_instance(rng)
        try:
            out = shrink_small(fam, prof)
        except DuplicationError:
            continue
        assert is_valid(out, prof)
        assert all(2 * len(a) <= fam.n for a in out)


def test_random_complement_and_trace():
    rng = random.Random(22)
    for _ in range(100):
        fam, prof, i = complement_instance(rng)
        assert is_valid(complement_replace(fam, i, prof), prof)
        fam, prof, g = trace_instance(rng)
        res = trace(fam, g, prof)
        assert len(res.family) == len(fam) - 1
        assert is_valid(res.family, res.profile)
