"""Size-neutral add/delete mutation over token genomes."""
import numpy as np
import pytest

from ratebandit.umad import deletion_rate, random_genome, umad_mutate

TOKENS = list(range(9))


def make_rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


class TestDeletionRate:
    def test_balances_addition(self):
        assert deletion_rate(0.1) == pytest.approx(1.0 / 11.0, rel=1e-15)
        assert deletion_rate(1.0) == 0.5
        for mu in (0.01, 0.3, 2.5, 40.0):
            # expected growth (1+mu) times expected keep must be 1
            assert (1.0 + mu) * (1.0 - deletion_rate(mu)) == pytest.approx(1.0)


class TestRandomGenome:
    def test_uniform_over_instruction_set(self):
        rng = make_rng(60)
        g = random_genome(90000, TOKENS, rng)
        freqs = np.bincount(g, minlength=9) / len(g)
        assert np.all(np.abs(freqs - 1.0 / 9.0) < 0.01)

    def test_length_and_dtype(self):
        rng = make_rng(61)
        g = random_genome(17, TOKENS, rng)
        assert len(g) == 17
        assert g.dtype == np.int8
        assert len(random_genome(0, TOKENS, rng)) == 0

    def test_negative_length_rejected(self):
        with pytest.raises(ValueError):
            random_genome(-1, TOKENS, make_rng(62))


class TestMutate:
    def test_rate_must_be_positive(self):
        g = random_genome(5, TOKENS, make_rng(63))
        for mu in (0.0, -0.5, float("nan")):
            with pytest.raises(ValueError):
                umad_mutate(g, mu, TOKENS, make_rng(64))

    def test_empty_genome_passthrough(self):
        child = umad_mutate(np.empty(0, dtype=np.int8), 0.5, TOKENS,
                            make_rng(65))
        assert len(child) == 0
        assert child.dtype == np.int8

    def test_child_tokens_from_instruction_set(self):
        rng = make_rng(66)
        g = random_genome(30, [2, 5, 7], rng)
        for _ in range(50):
            child = umad_mutate(g, 1.5, [2, 5, 7], rng, max_len=None)
            assert child.dtype == np.int8
            assert set(np.unique(child)).issubset({2, 5, 7})

    def test_parent_untouched(self):
        rng = make_rng(67)
        g = random_genome(40, TOKENS, rng)
        snapshot = g.copy()
        umad_mutate(g, 2.5, TOKENS, rng)
        assert np.array_equal(g, snapshot)

    def test_deterministic_under_seed(self):
        g = random_genome(40, TOKENS, make_rng(68))
        a = umad_mutate(g, 0.7, TOKENS, make_rng(69))
        b = umad_mutate(g, 0.7, TOKENS, make_rng(69))
        assert np.array_equal(a, b)

    def test_tiny_rate_is_near_identity(self):
        rng = make_rng(70)
        g = random_genome(100, TOKENS, rng)
        child = umad_mutate(g, 1e-12, TOKENS, rng)
        assert np.array_equal(child, g)

    def test_max_len_truncates_to_prefix(self):
        g = random_genome(20, TOKENS, make_rng(71))
        seen_cap = False
        for seed in range(200):
            capped = umad_mutate(g, 50.0, TOKENS, make_rng(700 + seed),
                                 max_len=30)
            full = umad_mutate(g, 50.0, TOKENS, make_rng(700 + seed),
                               max_len=None)
            assert len(capped) <= 30
            if len(full) > 30:
                seen_cap = True
                assert np.array_equal(capped, full[:30])
            else:
                assert np.array_equal(capped, full)
        assert seen_cap

    @pytest.mark.parametrize("mu", [0.1, 0.5, 2.5])
    def test_expected_length_neutral(self, mu):
        rng = make_rng(72)
        g = random_genome(100, TOKENS, rng)
        lengths = [len(umad_mutate(g, mu, TOKENS, rng, max_len=None))
                   for _ in range(10000)]
        assert abs(float(np.mean(lengths)) - 100.0) < 1.0


ANCHOR, INSERT = 1, 2


@pytest.fixture(scope="module")
def children():
    rng = make_rng(73)
    genome = np.array([ANCHOR], dtype=np.int8)
    return [umad_mutate(genome, 2.5, [INSERT], rng, max_len=None)
            for _ in range(20000)]


class TestSingleAnchorDistribution:
    """One anchor token, inserts all a second token: every piece observable.

    With mu = 2.5 the insert count is 2 or 3 with equal odds and each
    insert (and the anchor) survives with probability 1/3.5 = 2/7, so
    P(no insert survives) = (25/49 + 125/343) / 2 and P(anchor) = 2/7.
    """

    A, B = ANCHOR, INSERT

    def test_no_insert_probability(self, children):
        expected = 0.5 * (5 / 7) ** 2 + 0.5 * (5 / 7) ** 3
        got = np.mean([int(np.sum(c == self.B) == 0) for c in children])
        assert abs(got - expected) < 0.015

    def test_anchor_survival_probability(self, children):
        got = np.mean([int(self.A in c) for c in children])
        assert abs(got - 2.0 / 7.0) < 0.015

    def test_insert_side_is_symmetric(self, children):
        before = after = 0
        for c in children:
            if len(c) == 2 and self.A in c:
                if c[0] == self.B:
                    before += 1
                else:
                    after += 1
        assert before + after > 500
        frac = before / (before + after)
        assert abs(frac - 0.5) < 0.05

    def test_mean_survivors(self, children):
        got = np.mean([int(np.sum(c == self.B)) for c in children])
        assert abs(got - 2.5 * 2.0 / 7.0) < 0.03
