"""Rule decoding and the soundness filter."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rulemat.extraction import DEFAULT_FILTERS, ScoredRule, extract_candidates, select_sound
from rulemat.logic import Atom, FactSet, Predicate, Rule, Var, atom, rule_precision
from rulemat.propositional import FeatureSpace, enumerate_features

SUCC = Predicate("succ", 2)
PRE = Predicate("pre", 2)


def pre_space():
    return enumerate_features(PRE, 0, [SUCC])


def pre_facts():
    f = FactSet()
    f.add(atom("succ", "0", "1"))
    f.add(atom("succ", "1", "2"))
    f.add(atom("pre", "1", "0"))
    f.add(atom("pre", "2", "1"))
    return f


class TestFilters:
    def test_default_sweep(self):
        assert len(DEFAULT_FILTERS) == 20
        assert DEFAULT_FILTERS[0] == 0.05
        assert DEFAULT_FILTERS[-1] == 1.0
        assert 0.0 not in DEFAULT_FILTERS
        assert DEFAULT_FILTERS == tuple(sorted(DEFAULT_FILTERS))

    def test_bad_filters_rejected(self):
        space = pre_space()
        M = np.full((1, 3), 0.5)
        with pytest.raises(ValueError):
            extract_candidates(M, space, filters=[0.0, 0.5])
        with pytest.raises(ValueError):
            extract_candidates(M, space, filters=[])


class TestExtractCandidates:
    def test_single_entry_above_threshold(self):
        space = pre_space()
        M = np.array([[0.9, 0.05, 0.05]])
        cands = extract_candidates(M, space, filters=[0.5])
        assert len(cands) == 1
        rule, row, tau = cands[0]
        assert str(rule) == "pre(X,Y) :- succ(X,Y)."
        assert row == 0
        assert tau == 0.5

    def test_all_below_lowest_threshold(self):
        space = pre_space()
        M = np.array([[0.04, 0.01, 0.02]])
        assert extract_candidates(M, space) == []

    def test_threshold_is_strict(self):
        space = pre_space()
        M = np.array([[0.5, 0.0, 0.0]])
        assert extract_candidates(M, space, filters=[0.5]) == []

    def test_duplicates_keep_smallest_tau(self):
        space = pre_space()
        M = np.array([[0.9, 0.9, 0.0]])
        cands = extract_candidates(M, space)
        bodies = {tuple(str(b) for b in r.body): tau for r, _, tau in cands}
        assert bodies[("succ(X,Y)", "succ(Y,X)")] == 0.05
        # at 0.9 < tau the row yields nothing; no singleton appears
        assert len(cands) == 1

    def test_distinct_rules_at_different_taus(self):
        space = pre_space()
        M = np.array([[0.9, 0.3, 0.0]])
        cands = extract_candidates(M, space)
        rendered = {str(r): tau for r, _, tau in cands}
        assert rendered == {
            "pre(X,Y) :- succ(X,Y), succ(Y,X).": 0.05,
            "pre(X,Y) :- succ(X,Y).": 0.3,
        }

    def test_candidate_count_bounded(self):
        space = pre_space()
        rng = np.random.default_rng(0)
        M = rng.uniform(0, 1, (4, 3))
        cands = extract_candidates(M, space)
        assert len(cands) <= 4 * len(DEFAULT_FILTERS)

    def test_row_attribution(self):
        space = pre_space()
        M = np.array([[0.9, 0.0, 0.0], [0.0, 0.9, 0.0]])
        cands = extract_candidates(M, space, filters=[0.5])
        by_row = {row: str(r) for r, row, _ in cands}
        assert by_row == {0: "pre(X,Y) :- succ(X,Y).", 1: "pre(X,Y) :- succ(Y,X)."}

    def test_respects_valid_mask(self):
        space = pre_space().restrict(np.array([False, True, False]))
        M = np.array([[0.9]])
        cands = extract_candidates(M, space, filters=[0.5])
        assert [str(r) for r, _, _ in cands] == ["pre(X,Y) :- succ(Y,X)."]
        with pytest.raises(ValueError):
            extract_candidates(np.zeros((1, 3)), space)

    def test_tautology_guard(self):
        head = Atom(PRE, (Var("X"), Var("Y")))
        space = FeatureSpace(
            target_atom=head,
            variables=("X", "Y"),
            features=(head, Atom(SUCC, (Var("Y"), Var("X")))),
            valid_mask=np.array([True, True]),
        )
        M = np.array([[0.9, 0.9]])
        cands = extract_candidates(M, space, filters=[0.5])
        assert cands == []

    @settings(max_examples=40)
    @given(st.integers(0, 2**32 - 1))
    def test_bodies_antitone_in_tau(self, seed):
        space = enumerate_features(PRE, 1, [SUCC, Predicate("zero", 1)])
        rng = np.random.default_rng(seed)
        M = rng.uniform(0, 1, (2, len(space.features)))
        taus = [0.1, 0.3, 0.5, 0.7, 0.9]
        for k in range(2):
            prev = None
            for tau in taus:
                body = {str(f) for j, f in enumerate(space.features) if M[k, j] > tau}
                if prev is not None:
                    assert body <= prev
                prev = body
        # every candidate's head is the target and body is drawn from features
        for rule, _, _ in extract_candidates(M, space):
            assert rule.head == space.target_atom
            assert set(rule.body) <= set(space.features)


class TestSelectSound:
    def test_correct_rule_survives_tau_one(self):
        space = pre_space()
        M = np.array([[0.05, 0.95, 0.02], [0.7, 0.02, 0.01]])
        cands = extract_candidates(M, space)
        sound = select_sound(cands, pre_facts(), tau_s=1.0)
        assert [str(s.rule) for s in sound] == ["pre(X,Y) :- succ(Y,X)."]
        assert sound[0].precision == 1.0
        assert (sound[0].n_r, sound[0].n_b) == (2, 2)
        assert sound[0].source_row == 0

    def test_wrong_direction_fails(self):
        space = pre_space()
        cands = extract_candidates(np.array([[0.95, 0.05, 0.0]]), space)
        facts = pre_facts()
        assert select_sound(cands, facts, tau_s=1.0) == []
        kept = select_sound(cands, facts, tau_s=0.0)
        assert len(kept) == 1  # n_b = 2, n_r = 0, precision 0 still has support
        assert kept[0].precision == 0.0

    def test_unmatched_body_always_dropped(self):
        space = pre_space()
        facts = FactSet()
        facts.add(atom("pre", "1", "0"))
        cands = extract_candidates(np.array([[0.95, 0.0, 0.0]]), space)
        assert select_sound(cands, facts, tau_s=0.0) == []

    def test_sorting_and_threshold_monotonicity(self):
        space = pre_space()
        M = np.array([[0.05, 0.95, 0.02], [0.95, 0.6, 0.01]])
        cands = extract_candidates(M, space)
        facts = pre_facts()
        all_rules = select_sound(cands, facts, tau_s=0.0)
        precisions = [s.precision for s in all_rules]
        assert precisions == sorted(precisions, reverse=True)
        for lo, hi in [(0.0, 0.5), (0.5, 1.0)]:
            assert len(select_sound(cands, facts, hi)) <= len(select_sound(cands, facts, lo))
        # ties on precision break by body size
        ones = [s for s in all_rules if s.precision == 1.0]
        sizes = [len(s.rule.body) for s in ones]
        assert sizes == sorted(sizes)

    def test_rescoring_reproduces_counts(self):
        space = pre_space()
        M = np.array([[0.95, 0.7, 0.3], [0.2, 0.9, 0.1]])
        facts = pre_facts()
        for s in select_sound(extract_candidates(M, space), facts, tau_s=0.0):
            pc = rule_precision(s.rule, facts)
            assert (pc.n_r, pc.n_b, pc.value) == (s.n_r, s.n_b, s.precision)

    def test_tau_s_validation(self):
        with pytest.raises(ValueError):
            select_sound([], FactSet(), tau_s=1.5)

    def test_scored_rule_rendering(self):
        rule = Rule(
            head=Atom(PRE, (Var("X"), Var("Y"))),
            body=(Atom(SUCC, (Var("Y"), Var("X"))),),
        )
        s = ScoredRule(rule=rule, precision=1.0, n_r=2, n_b=2, source_row=0, tau_f=0.5)
        assert str(s) == "pre(X,Y) :- succ(Y,X).  % precision=1.00 (2/2)"
