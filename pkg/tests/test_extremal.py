import pytest

from modsums.core import (
    Configuration,
    corollary2_bound,
    count_in_set,
    subset_sum_distribution,
    theorem1_bound,
)
from modsums.extremal import (
    allones_extremal,
    centre_out,
    corollary2_extremal,
    split_extremal,
)
from oracles import subset_counts


def test_centre_out():
    assert list(centre_out(7)) == [0, 1, -1, 2, -2, 3, -3]


class TestAllOnes:
    def test_n4_q3(self):
        inst = allones_extremal(4, 1, 3)
        assert inst.configuration.residues == (1, 1, 1, 1)
        assert inst.target.sorted() == (2,)
        assert inst.claimed == 6

    def test_wraparound(self):
        inst = allones_extremal(6, 1, 3)
        assert inst.target.sorted() == (0,) and inst.claimed == 22

    @pytest.mark.parametrize("n,q", [(0, 4), (5, 5), (9, 2)])
    def test_full_target(self, n, q):
        inst = allones_extremal(n, q, q)
        assert inst.target.sorted() == tuple(range(q)) and inst.claimed == 2**n

    def test_invalid_k(self):
        with pytest.raises(ValueError):
            allones_extremal(3, 4, 3)


class TestSplit:
    def test_wraparound_example(self):
        inst = split_extremal(6, 1, 3)
        assert inst.configuration.residues == (1, 1, 1, 2, 2, 2)
        assert inst.target.sorted() == (0,) and inst.claimed == 22

    def test_n4_q3(self):
        inst = split_extremal(4, 1, 3)
        assert inst.configuration.residues == (1, 1, 2, 2)
        assert inst.claimed == 6 == subset_counts(3, [1, 1, 2, 2])[0]

    def test_two_targets(self):
        inst = split_extremal(5, 2, 7)
        assert inst.configuration.residues == (1, 1, 1, 6, 6)
        assert inst.target.sorted() == (0, 1) and inst.claimed == 20


@pytest.mark.parametrize("q", range(1, 9))
def test_generators_attain_theorem_bound(q):
    for n in range(0, 15):
        for k in range(1, q + 1):
            bound = theorem1_bound(n, k, q)
            for gen in (allones_extremal, split_extremal):
                inst = gen(n, k, q)
                got = count_in_set(subset_sum_distribution(inst.configuration), inst.target)
                assert got == inst.claimed == bound


@pytest.mark.parametrize("q", range(1, 9))
def test_split_is_shift_of_all_ones(q):
    for n in range(0, 15):
        ones = subset_sum_distribution(Configuration.all_ones(n, q)).counts
        split = subset_sum_distribution(split_extremal(n, 1, q).configuration).counts
        assert all(split[s] == ones[(s + n // 2) % q] for s in range(q))


class TestCorollary2:
    @pytest.mark.parametrize("n,q,rho,claimed", [(4, 3, 1, 5), (2, 3, 0, 1), (3, 3, 0, 2)])
    def test_examples(self, n, q, rho, claimed):
        inst = corollary2_extremal(n, q)
        assert inst.target.sorted() == (rho,) and inst.claimed == claimed

    @pytest.mark.parametrize("q", range(1, 9))
    def test_is_global_minimum(self, q):
        for n in range(max(q - 1, 0), 20):
            inst = corollary2_extremal(n, q)
            counts = subset_sum_distribution(inst.configuration).counts
            assert inst.claimed == min(counts) == corollary2_bound(n, q)

    def test_rejects_small_n(self):
        with pytest.raises(ValueError):
            corollary2_extremal(1, 4)
