import random
from fractions import Fraction
from itertools import combinations

import pytest

from irlab import rules
from irlab.cohesion import f_vector
from irlab.model import Election
from irlab.rules import RuleId, ir_consistency_probe, run_rule

from instance_gen import random_election
from hard_instances import (
    hamming_bait_instance,
    load_bait_instance,
    coverage_bait_instance,
    two_camps_with_bridge,
)


def members(outcome, idx=0):
    return sorted(outcome.committees[idx].members)


def all_members(outcome):
    return [sorted(c.members) for c in outcome.committees]


def test_bridge_profile_av_contains_c3():
    out = run_rule(two_camps_with_bridge(), RuleId("av"))
    assert 2 in out.committee.members


def test_bridge_profile_pav_all_winners_contain_c3():
    out = run_rule(two_camps_with_bridge(), RuleId("pav"), mode="all_tied")
    assert all_members(out) == [[0, 2], [1, 2]]


def test_bridge_profile_sequential_rules_contain_c3():
    e = two_camps_with_bridge()
    for kind in ("sav", "seq_pav", "rev_seq_pav", "seq_phragmen", "rule_x", "seq_cc"):
        out = run_rule(e, RuleId(kind))
        assert 2 in out.committee.members, kind


def test_coverage_bait_cc_monroe_geometric():
    e = coverage_bait_instance()
    for rule in (RuleId("cc"), RuleId("monroe"), RuleId("geom_pav", weight=Fraction(1, 16))):
        out = run_rule(e, rule, mode="all_tied")
        assert all_members(out) == [[0, 1, 2, 3]], rule


def test_load_bait_max_phragmen_loads():
    e = load_bait_instance()
    out = run_rule(e, RuleId("max_phragmen"))
    assert members(out) == [0, 3, 4]
    loads = out.diagnostics["load_vectors"][(0, 3, 4)]
    assert loads == (
        Fraction(3, 5),
        Fraction(0),
        Fraction(3, 5),
        Fraction(3, 5),
        Fraction(3, 5),
        Fraction(3, 5),
    )


def test_load_bait_max_phragmen_avoids_ir_committees():
    e = load_bait_instance()
    out = run_rule(e, RuleId("max_phragmen"), mode="all_tied")
    assert [0, 1, 4] not in all_members(out)
    assert [0, 1, 5] not in all_members(out)


def test_minimax_av_ignores_majority():
    out = run_rule(hamming_bait_instance(), RuleId("minimax_av"), mode="all_tied")
    for committee in out.committees:
        assert not committee.members & {0, 1}
    assert out.diagnostics["max_hamming"] == 4


def test_unanimous_profile_every_rule():
    e = Election.from_approvals([{0, 1, 2}] * 5, m=5, k=3)
    for kind in rules.SEQUENTIAL_RULES + rules.EXACT_RULES:
        rule = RuleId(kind, weight=Fraction(1, 2) if kind == "geom_pav" else None)
        out = run_rule(e, rule)
        assert members(out) == [0, 1, 2], kind


def test_all_tied_rejected_for_sequential():
    with pytest.raises(ValueError):
        run_rule(two_camps_with_bridge(), RuleId("seq_pav"), mode="all_tied")


def test_enumeration_guard():
    e = Election.from_approvals([{0}] * 2, m=40, k=20)
    with pytest.raises(RuntimeError):
        run_rule(e, RuleId("pav"))


def _naive_pav_best(election):
    def score(combo):
        total = Fraction(0)
        for ballot in election.approvals:
            u = len(ballot & set(combo))
            total += sum(Fraction(1, t) for t in range(1, u + 1))
        return total

    return max(score(c) for c in combinations(range(election.m), election.k))


def _naive_cc_best(election):
    return max(
        sum(1 for ballot in election.approvals if ballot & set(combo))
        for combo in combinations(range(election.m), election.k)
    )


def _naive_monroe_best(election):
    # all committees x all balanced assignments, by brute backtracking
    n, k = election.n, election.k
    base, extra = divmod(n, k)

    def best_assignment(combo):
        best = -1
        for extras in (combinations(combo, extra) if extra else [()]):
            quota = {c: base + (1 if c in extras else 0) for c in combo}

            def place(v, score):
                nonlocal best
                if v == n:
                    best = max(best, score)
                    return
                for c in combo:
                    if quota[c] > 0:
                        quota[c] -= 1
                        place(v + 1, score + (1 if c in election.approvals[v] else 0))
                        quota[c] += 1

            place(0, 0)
        return best

    return max(best_assignment(c) for c in combinations(range(election.m), election.k))


def test_exact_rules_match_naive_rescoring():
    rng = random.Random(17)
    for _ in range(25):
        e = random_election(rng, n_max=8, m_max=7, k_max=3)
        out_pav = run_rule(e, RuleId("pav"))
        assert out_pav.diagnostics["score"] == _naive_pav_best(e)
        out_cc = run_rule(e, RuleId("cc"))
        assert out_cc.diagnostics["score"] == _naive_cc_best(e)


def test_monroe_matches_naive_assignment_search():
    rng = random.Random(19)
    for _ in range(8):
        e = random_election(rng, n_max=6, m_max=5, k_max=3)
        out = run_rule(e, RuleId("monroe"))
        assert out.diagnostics["score"] == _naive_monroe_best(e)


def test_rule_x_budgets_nonnegative_and_bounded():
    rng = random.Random(29)
    for _ in range(40):
        e = random_election(rng, n_max=10, m_max=8)
        out = run_rule(e, RuleId("rule_x"))
        balances = out.diagnostics["balances"]
        assert all(b >= 0 for b in balances)
        spent = Fraction(e.k) - sum(balances)  # budgets start at k/n each
        assert 0 <= spent <= e.k


def test_rule_x_completion_flagged():
    # nobody can afford any candidate: one voter approves, budget k/n < 1
    e = Election.from_approvals([{0}] + [set()] * 5, m=3, k=2)
    out = run_rule(e, RuleId("rule_x"))
    assert out.diagnostics["completion"] == "seq_phragmen"
    assert len(out.committee.members) == e.k


def test_seq_pav_marginal_gains_non_increasing_under_unanimity():
    e = Election.from_approvals([{0, 1, 2, 3}] * 4, m=4, k=3)
    out = run_rule(e, RuleId("seq_pav"))
    gains = [g for _, g in out.diagnostics["picks"]]
    assert gains == sorted(gains, reverse=True)


def test_committee_sizes_exact():
    rng = random.Random(33)
    for _ in range(30):
        e = random_election(rng, n_max=8, m_max=7)
        for kind in ("av", "seq_phragmen", "rule_x", "greedy_monroe", "rev_seq_pav"):
            out = run_rule(e, RuleId(kind))
            assert len(out.committee.members) == e.k, kind


def test_probe_bridge_profile_seq_phragmen():
    e = two_camps_with_bridge()
    fvec = tuple(f_vector(e))
    probe = ir_consistency_probe(e, RuleId("seq_phragmen"), fvec)
    assert probe == {
        "rule_found_ir": False,
        "rule_found_ssjr": False,
        "ir_exists": True,
        "ssjr_exists": True,
        "undecided": False,
    }


def test_probe_trivial_when_entitlements_zero():
    e = Election.from_approvals([set()] * 4, m=4, k=2)
    fvec = tuple(f_vector(e))
    probe = ir_consistency_probe(e, RuleId("av"), fvec)
    assert probe["rule_found_ir"] and probe["ir_exists"]
