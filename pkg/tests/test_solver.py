from __future__ import annotations

import pytest

from awkit.model import Coloring, color_classes, cyclic, interval
from awkit.solver import (
    SolverTimeout,
    aw,
    aw_u,
    max_rainbow_free_palette,
    merge_colors,
)
from awkit.verify import is_rainbow_free
from oracles import canonical_assignments, naive_max_palette, stirling2

ENGINES = ["python", "native"]


class TestAgainstNaiveOracle:
    """Solver results for small instances equal an enumerate-everything oracle."""

    @pytest.mark.parametrize("n", range(1, 11))
    @pytest.mark.parametrize("unitary", [False, True])
    def test_interval_k3(self, n, unitary):
        expected_r, expected_witness = naive_max_palette(interval(n), 3, unitary)
        for engine in ENGINES:
            r, witness, _, _ = max_rainbow_free_palette(
                interval(n), 3, unitary, engine=engine
            )
            assert r == expected_r
            assert witness.assignment == expected_witness

    @pytest.mark.parametrize("n", range(1, 11))
    @pytest.mark.parametrize("unitary", [False, True])
    def test_cyclic_k3(self, n, unitary):
        expected_r, expected_witness = naive_max_palette(cyclic(n), 3, unitary)
        for engine in ENGINES:
            r, witness, _, _ = max_rainbow_free_palette(
                cyclic(n), 3, unitary, engine=engine
            )
            assert r == expected_r
            assert witness.assignment == expected_witness

    @pytest.mark.parametrize("n", range(1, 10))
    @pytest.mark.parametrize("k", [4, 5])
    def test_interval_longer_k(self, n, k):
        expected_r, expected_witness = naive_max_palette(interval(n), k, False)
        for engine in ENGINES:
            r, witness, _, _ = max_rainbow_free_palette(interval(n), k, engine=engine)
            assert r == expected_r
            assert witness.assignment == expected_witness


class TestKnownValues:
    def test_interval_examples(self):
        assert aw(interval(9), 3).aw_value == 4
        assert aw(interval(2), 3).aw_value == 3  # no 3-AP: aw = |G| + 1
        assert aw(interval(25), 3).aw_value == 6
        assert aw(interval(17), 5).aw_value == 13

    def test_cyclic_examples(self):
        assert aw(cyclic(5), 3).aw_value == 3
        assert aw(cyclic(9), 3).aw_value == 4
        # 4 = 2^2 has no odd prime factors: even branch gives 3 + 0
        assert aw(cyclic(4), 3).aw_value == 3

    def test_unitary_examples(self):
        assert aw_u(interval(9), 3).aw_value == 4
        assert aw_u(interval(2), 3).aw_value == 3
        assert aw_u(interval(14), 3).aw_value == 5

    def test_witness_contract(self):
        for group in (interval(10), cyclic(10)):
            for solve, unitary in ((aw, False), (aw_u, True)):
                outcome = solve(group, 3)
                w = outcome.witness
                assert w is not None
                assert w.palette == outcome.aw_value - 1
                assert w.is_canonical
                assert is_rainbow_free(w, 3)
                if unitary:
                    assert any(len(m) == 1 for m in color_classes(w).values())

    def test_unitary_never_beats_unrestricted(self):
        # unitary colorings are a subset, so the attainable palette can only shrink
        for n in range(1, 14):
            assert aw_u(interval(n), 3).aw_value <= aw(interval(n), 3).aw_value
            assert aw_u(cyclic(n), 3).aw_value <= aw(cyclic(n), 3).aw_value

    def test_no_ap_convention(self):
        # k longer than any progression the group can hold: aw = |G| + 1
        assert aw(interval(3), 4).aw_value == 4
        assert aw(cyclic(6), 7).aw_value == 7
        assert aw_u(cyclic(2), 3).aw_value == 3

    def test_eleven_against_slow_oracle(self):
        # one size past the criterion-8 grid, unitary (the trickiest leaf filter)
        for group in (interval(11), cyclic(11)):
            want_r, want_w = naive_max_palette(group, 3, True)
            r, witness, _, _ = max_rainbow_free_palette(group, 3, True)
            assert r == want_r
            assert witness.assignment == want_w


class TestDeterminism:
    @pytest.mark.parametrize("workers", [1, 2, 3])
    def test_worker_counts_agree(self, workers):
        baseline = aw(interval(20), 3, workers=1)
        outcome = aw(interval(20), 3, workers=workers)
        assert outcome.aw_value == baseline.aw_value
        assert outcome.witness.assignment == baseline.witness.assignment
        cy = aw(cyclic(17), 3, workers=workers)
        assert cy.aw_value == 4

    def test_repeat_runs_identical(self):
        a = aw(interval(15), 4)
        b = aw(interval(15), 4)
        assert a.aw_value == b.aw_value
        assert a.witness.assignment == b.witness.assignment

    def test_engines_agree_midsize(self):
        for group, k in [(interval(14), 3), (interval(12), 4), (cyclic(13), 3),
                         (cyclic(12), 3)]:
            py = max_rainbow_free_palette(group, k, engine="python")
            nat = max_rainbow_free_palette(group, k, engine="native")
            assert py[0] == nat[0]
            assert py[1].assignment == nat[1].assignment

    def test_engines_agree_grid(self):
        for n in range(1, 13):
            for kind in (interval, cyclic):
                for k in (3, 4):
                    for unitary in (False, True):
                        py = max_rainbow_free_palette(kind(n), k, unitary,
                                                      engine="python")
                        nat = max_rainbow_free_palette(kind(n), k, unitary,
                                                       engine="native")
                        assert py[0] == nat[0], (n, kind, k, unitary)
                        assert py[1].assignment == nat[1].assignment


class TestPrimeRestriction:
    def test_affine_restriction_preserves_values(self, monkeypatch):
        # the c(0)=c(1) pin for prime cyclic groups is a pure symmetry
        # reduction: values and witnesses must match the unrestricted search
        import awkit.solver as solver_mod

        restricted = {}
        for p in (11, 13, 17, 19, 23):
            for unitary in (False, True):
                restricted[(p, unitary)] = max_rainbow_free_palette(
                    cyclic(p), 3, unitary
                )
        monkeypatch.setattr(solver_mod, "_value_phase_base", lambda g, k: ())
        for p in (11, 13, 17, 19, 23):
            for unitary in (False, True):
                r, witness, _, _ = max_rainbow_free_palette(cyclic(p), 3, unitary)
                want_r, want_w, _, _ = restricted[(p, unitary)]
                assert r == want_r
                assert witness.assignment == want_w.assignment


class TestCanonicalBranching:
    def test_counts_match_stirling(self):
        # the canonical tree enumerates exactly one representative per
        # set-partition: leaves with palette r == S(n, r)
        for n in range(1, 9):
            by_palette = {}
            for assignment in canonical_assignments(n):
                r = max(assignment)
                by_palette[r] = by_palette.get(r, 0) + 1
            for r in range(1, n + 1):
                assert by_palette.get(r, 0) == stirling2(n, r)


class TestMergeColors:
    def test_simple_merge(self):
        c = merge_colors(Coloring(interval(3), (1, 2, 3)), 2, 3)
        assert c.assignment == (1, 2, 2)

    def test_merge_to_single_class(self):
        c = merge_colors(Coloring(interval(3), (1, 2, 2)), 1, 2)
        assert c.assignment == (1, 1, 1)
        assert is_rainbow_free(c, 3)

    def test_rejects_bad_colors(self):
        c = Coloring(interval(3), (1, 2, 2))
        with pytest.raises(ValueError):
            merge_colors(c, 1, 1)
        with pytest.raises(ValueError):
            merge_colors(c, 1, 3)

    def test_monotone_structure(self):
        # every palette below r_max is attainable by merging down the witness
        for n in range(2, 21):
            outcome = aw(interval(n), 3)
            current = outcome.witness
            for r in range(outcome.aw_value - 2, 0, -1):
                current = merge_colors(current, 1, 2)
                assert current.palette == r
                assert is_rainbow_free(current, 3)


class TestTimeout:
    def test_timeout_raises(self):
        with pytest.raises(SolverTimeout):
            aw(interval(40), 5, timeout=0.05, engine="python")

    def test_generous_timeout_succeeds(self):
        assert aw(interval(9), 3, timeout=30.0).aw_value == 4


class TestValidation:
    def test_rejects_small_k(self):
        with pytest.raises(ValueError):
            aw(interval(5), 2)

    def test_rejects_bad_workers(self):
        with pytest.raises(ValueError):
            aw(interval(5), 3, workers=0)

    def test_rejects_unknown_engine(self):
        with pytest.raises(ValueError):
            max_rainbow_free_palette(interval(5), 3, engine="exotic")
