"""Approval-based committee voting rules with exact arithmetic.

Sequential rules (seq-PAV, seq-CC, reverse seq-PAV, seq-Phragmen, Rule X,
greedy Monroe) run their greedy iteration under a fixed tie-break: the
lowest candidate index wins every tie (for deletion rules the highest index
is removed, so low indices survive).  Exact optimization rules (AV, SAV,
PAV, CC, Monroe, minimax-AV, max-Phragmen, geometric PAV) enumerate size-k
committees, guarded by a committee-count cap, and can report either the
lexicographically first optimum or all tied optima.

All scores, loads and budgets are exact `fractions.Fraction` values; ties
are therefore detected exactly, which the counterexample fixtures rely on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .cohesion import CohesionCertificate
from .model import Committee, Election
from .search import DEFAULT_NODE_CAP

SEQUENTIAL_RULES = (
    "seq_pav",
    "rev_seq_pav",
    "seq_cc",
    "greedy_monroe",
    "seq_phragmen",
    "rule_x",
)
EXACT_RULES = (
    "av",
    "sav",
    "pav",
    "cc",
    "monroe",
    "max_phragmen",
    "minimax_av",
    "geom_pav",
)
MAX_ENUMERATED_COMMITTEES = 10**7


@dataclass(frozen=True)
class RuleId:
    """A rule identifier; geometric PAV carries its weight base 0 < w < 1."""

    kind: str
    weight: Fraction | None = None

    def __post_init__(self):
        if self.kind not in SEQUENTIAL_RULES + EXACT_RULES:
            raise ValueError(f"unknown rule {self.kind!r}")
        if self.kind == "geom_pav":
            if self.weight is None or not 0 < self.weight < 1:
                raise ValueError("geom_pav requires a weight base in (0, 1)")
        elif self.weight is not None:
            raise ValueError(f"{self.kind} does not take a weight")

    @property
    def is_sequential(self) -> bool:
        return self.kind in SEQUENTIAL_RULES

    def __str__(self) -> str:
        if self.kind == "geom_pav":
            return f"geom_pav[{self.weight}]"
        return self.kind


@dataclass(frozen=True)
class RuleOutcome:
    """Winning committees plus per-committee exact diagnostics."""

    rule: RuleId
    committees: tuple[Committee, ...]
    diagnostics: dict = field(default_factory=dict)

    @property
    def committee(self) -> Committee:
        return self.committees[0]


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _mask(members: Iterable[int]) -> int:
    out = 0
    for c in members:
        out |= 1 << c
    return out


# --------------------------------------------------------------------------
# score functions
# --------------------------------------------------------------------------


def _harmonic_weights(upto: int) -> list[Fraction]:
    return [Fraction(1, t) for t in range(1, upto + 1)]


def _geometric_weights(upto: int, base: Fraction) -> list[Fraction]:
    return [base ** (t - 1) for t in range(1, upto + 1)]


def _thiele_score(election: Election, wmask: int, weights: Sequence[Fraction]) -> Fraction:
    total = Fraction(0)
    for b in election.ballot_masks:
        u = (b & wmask).bit_count()
        for t in range(u):
            total += weights[t]
    return total


def _cc_score(election: Election, wmask: int) -> int:
    return sum(1 for b in election.ballot_masks if b & wmask)


def _av_candidate_scores(election: Election) -> list[Fraction]:
    return [Fraction(m.bit_count()) for m in election.candidate_voters]


def _sav_candidate_scores(election: Election) -> list[Fraction]:
    scores = [Fraction(0)] * election.m
    for ballot in election.approvals:
        if not ballot:
            continue
        share = Fraction(1, len(ballot))
        for c in ballot:
            scores[c] += share
    return scores


def _minimax_score(election: Election, wmask: int) -> int:
    worst = 0
    for b in election.ballot_masks:
        dist = (b & ~wmask).bit_count() + (wmask & ~b).bit_count()
        worst = max(worst, dist)
    return worst


def _monroe_score(election: Election, members: Sequence[int]) -> int:
    """Maximum number of voters assigned to an approved committee member under
    a balanced assignment: member loads are floor(n/k) with n mod k members
    allowed one extra voter (the unassigned rest never scores)."""
    n, k = election.n, election.k
    base, extra = divmod(n, k)
    source, sink = 0, 1
    member_node = {c: 2 + j for j, c in enumerate(members)}
    extra_node = 2 + len(members)
    voter_node0 = extra_node + 1
    size = voter_node0 + n
    cap: dict[tuple[int, int], int] = {}

    def add(u, v, c):
        cap[(u, v)] = cap.get((u, v), 0) + c

    for v in range(n):
        add(source, voter_node0 + v, 1)
        for c in election.approvals[v]:
            if c in member_node:
                add(voter_node0 + v, member_node[c], 1)
    for c in members:
        add(member_node[c], sink, base)
        if extra:
            add(member_node[c], extra_node, 1)
    if extra:
        add(extra_node, sink, extra)
    return _max_flow(size, cap, source, sink)


def _max_flow(size: int, cap: dict[tuple[int, int], int], s: int, t: int) -> int:
    # Edmonds-Karp; the graphs here are tiny
    for u, v in list(cap.keys()):
        cap.setdefault((v, u), 0)
    adj: list[list[int]] = [[] for _ in range(size)]
    seen_edges = set()
    flow: dict[tuple[int, int], int] = {}
    for u, v in cap:
        flow[(u, v)] = 0
        if (u, v) not in seen_edges:
            seen_edges.add((u, v))
            adj[u].append(v)
    total = 0
    while True:
        parent = [-1] * size
        parent[s] = s
        queue = [s]
        while queue and parent[t] == -1:
            u = queue.pop(0)
            for v in adj[u]:
                if parent[v] == -1 and cap[(u, v)] - flow[(u, v)] > 0:
                    parent[v] = u
                    queue.append(v)
        if parent[t] == -1:
            return total
        # residual capacities on this path are all >= 1
        path = []
        v = t
        while v != s:
            path.append((parent[v], v))
            v = parent[v]
        bottleneck = min(cap[e] - flow[e] for e in path)
        for u, v in path:
            flow[(u, v)] += bottleneck
            flow[(v, u)] -= bottleneck
        total += bottleneck


def max_phragmen_load_vector(
    election: Election, members: Sequence[int]
) -> tuple[int, tuple[Fraction, ...], list[Fraction]]:
    """Leximax-optimal load distribution for a fixed committee.

    Each member spreads one unit of load over its approvers.  Returns
    (number of members with no approvers at all, the per-voter loads sorted
    in descending order, the per-voter loads in voter order).  The optimal
    distribution is found by repeatedly extracting the bottleneck subset
    X maximizing |X| / |supporters(X)|; those supporters all carry exactly
    that ratio.
    """
    n = election.n
    loads = [Fraction(0)] * n
    active = [c for c in members if election.candidate_voters[c] != 0]
    dead = len(members) - len(active)
    remaining_voters = election.all_voters_mask()
    remaining = list(active)
    while remaining:
        best_ratio: Fraction | None = None
        best_union = 0
        for r in range(1, len(remaining) + 1):
            for sub in combinations(remaining, r):
                union = 0
                for c in sub:
                    union |= election.candidate_voters[c] & remaining_voters
                if union == 0:
                    continue
                ratio = Fraction(len(sub), union.bit_count())
                if best_ratio is None or ratio > best_ratio:
                    best_ratio, best_union, best_sub = ratio, union, set(sub)
                elif ratio == best_ratio:
                    # tight sets are closed under union; accumulate the maximal one
                    merged = best_union | union
                    merged_sub = best_sub | set(sub)
                    if Fraction(len(merged_sub), merged.bit_count()) == ratio:
                        best_union, best_sub = merged, merged_sub
        if best_ratio is None:
            # remaining members have no remaining approvers; their load is
            # forced onto already-saturated voters, which max-Phragmen
            # never prefers when any alternative exists
            dead += len(remaining)
            break
        for v in _bits(best_union):
            loads[v] = best_ratio
        remaining_voters &= ~best_union
        remaining = [c for c in remaining if c not in best_sub]
    return dead, tuple(sorted(loads, reverse=True)), loads


# --------------------------------------------------------------------------
# sequential rules
# --------------------------------------------------------------------------


def _seq_thiele(election: Election, weights: Sequence[Fraction]) -> tuple[list[int], list]:
    k = election.k
    chosen_mask = 0
    chosen: list[int] = []
    counts = [0] * election.n
    history = []
    for _ in range(k):
        best_c, best_gain = -1, None
        for c in range(election.m):
            if chosen_mask >> c & 1:
                continue
            gain = Fraction(0)
            for v in _bits(election.candidate_voters[c]):
                gain += weights[counts[v]] if counts[v] < len(weights) else Fraction(0)
            if best_gain is None or gain > best_gain:
                best_c, best_gain = c, gain
        chosen.append(best_c)
        chosen_mask |= 1 << best_c
        for v in _bits(election.candidate_voters[best_c]):
            counts[v] += 1
        history.append((best_c, best_gain))
    return chosen, history


def _rev_seq_thiele(election: Election, weights: Sequence[Fraction]) -> tuple[list[int], list]:
    committee = set(range(election.m))
    counts = [b.bit_count() for b in election.ballot_masks]
    history = []
    while len(committee) > election.k:
        losses = []
        for c in sorted(committee):
            loss = Fraction(0)
            for v in _bits(election.candidate_voters[c]):
                if counts[v] - 1 < len(weights):
                    loss += weights[counts[v] - 1]
            losses.append((loss, c))
        min_loss = min(loss for loss, _ in losses)
        # remove the largest index among least-loss candidates: low indices survive
        drop = max(c for loss, c in losses if loss == min_loss)
        committee.remove(drop)
        for v in _bits(election.candidate_voters[drop]):
            counts[v] -= 1
        history.append((drop, min_loss))
    return sorted(committee), history


def _seq_phragmen(
    election: Election,
    start_loads: list[Fraction] | None = None,
    partial: Iterable[int] = (),
) -> tuple[list[int], list[Fraction]]:
    n, k = election.n, election.k
    loads = list(start_loads) if start_loads is not None else [Fraction(0)] * n
    committee = list(partial)
    chosen_mask = _mask(committee)
    unreachable = Fraction(k + 1)  # worse than any genuine load
    while len(committee) < k:
        best_c, best_load = -1, None
        for c in range(election.m):
            if chosen_mask >> c & 1:
                continue
            sup = election.candidate_voters[c]
            weight = sup.bit_count()
            if weight == 0:
                new_load = unreachable
            else:
                new_load = (1 + sum(loads[v] for v in _bits(sup))) / weight
            if best_load is None or new_load < best_load:
                best_c, best_load = c, new_load
        committee.append(best_c)
        chosen_mask |= 1 << best_c
        if best_load != unreachable:
            for v in _bits(election.candidate_voters[best_c]):
                loads[v] = best_load
    return committee, loads


def _rule_x(election: Election) -> tuple[list[int], dict]:
    """Method of Equal Shares with unit prices and k/n starting budgets,
    completed by continuing seq-Phragmen on the residual budgets."""
    n, k = election.n, election.k
    budgets = [Fraction(k, n)] * n
    committee: list[int] = []
    chosen_mask = 0
    rhos: list[Fraction] = []
    while len(committee) < k:
        best_c, best_rho = -1, None
        for c in range(election.m):
            if chosen_mask >> c & 1:
                continue
            rho = _affordable_rho(election, budgets, c)
            if rho is None:
                continue
            if best_rho is None or rho < best_rho:
                best_c, best_rho = c, rho
        if best_c == -1:
            break  # no candidate affordable; complete via seq-Phragmen
        committee.append(best_c)
        chosen_mask |= 1 << best_c
        rhos.append(best_rho)
        for v in _bits(election.candidate_voters[best_c]):
            budgets[v] -= min(budgets[v], best_rho)
    completed = False
    if len(committee) < k:
        completed = True
        start_loads = [-b for b in budgets]
        committee, _ = _seq_phragmen(election, start_loads=start_loads, partial=committee)
    meta = {
        "balances": tuple(budgets),
        "rhos": tuple(rhos),
        "completion": "seq_phragmen" if completed else None,
    }
    return committee, meta


def _affordable_rho(election: Election, budgets: list[Fraction], c: int) -> Fraction | None:
    """Smallest per-voter payment rho with sum_{approvers} min(b_v, rho) = 1."""
    sup = [v for v in _bits(election.candidate_voters[c])]
    if not sup:
        return None
    if sum(budgets[v] for v in sup) < 1:
        return None
    rich = set(sup)
    poor_paid = Fraction(0)
    while rich:
        rho = (1 - poor_paid) / len(rich)
        newly_poor = {v for v in rich if budgets[v] < rho}
        if not newly_poor:
            return rho
        poor_paid += sum(budgets[v] for v in newly_poor)
        rich -= newly_poor
    return None


def _greedy_monroe(election: Election) -> tuple[list[int], list]:
    n, k = election.n, election.k
    remaining_voters = list(range(n))
    remaining_cands = set(range(election.m))
    committee = []
    assignment = []
    for t in range(k):
        quota = n // k + (1 if t < n % k else 0)
        best_c, best_approvals = -1, -1
        for c in sorted(remaining_cands):
            approvals = sum(
                1 for v in remaining_voters if c in election.approvals[v]
            )
            if approvals > best_approvals:
                best_c, best_approvals = c, approvals
        approvers = [v for v in remaining_voters if best_c in election.approvals[v]]
        removed = approvers[:quota]
        assignment.append((best_c, tuple(removed)))
        remaining_voters = [v for v in remaining_voters if v not in removed]
        remaining_cands.remove(best_c)
        committee.append(best_c)
    return committee, assignment


# --------------------------------------------------------------------------
# exact optimization rules
# --------------------------------------------------------------------------


def _enumerate_guard(election: Election) -> None:
    total = 1
    m, k = election.m, election.k
    for i in range(k):
        total = total * (m - i) // (i + 1)
        if total > MAX_ENUMERATED_COMMITTEES:
            raise RuntimeError(
                f"C({m},{k}) exceeds the committee enumeration cap"
            )


def _optimize(
    election: Election, score, maximize: bool, all_tied: bool
) -> tuple[list[tuple[int, ...]], object]:
    """Enumerate size-k committees lexicographically and keep the optimum."""
    _enumerate_guard(election)
    best_score = None
    best: list[tuple[int, ...]] = []
    for combo in combinations(range(election.m), election.k):
        s = score(combo)
        if best_score is None:
            best_score, best = s, [combo]
            continue
        better = s > best_score if maximize else s < best_score
        if better:
            best_score, best = s, [combo]
        elif s == best_score and all_tied:
            best.append(combo)
    return best, best_score


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------


def run_rule(election: Election, rule: RuleId, mode: str = "single") -> RuleOutcome:
    """Run one ABC rule; `all_tied` is available for exact-optimization rules."""
    if mode not in ("single", "all_tied"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "all_tied" and rule.is_sequential:
        raise ValueError(f"{rule} is sequential; all_tied applies to exact rules only")
    all_tied = mode == "all_tied"
    k = election.k

    if rule.kind in ("av", "sav"):
        scores = (
            _av_candidate_scores(election)
            if rule.kind == "av"
            else _sav_candidate_scores(election)
        )
        ranked = sorted(range(election.m), key=lambda c: (-scores[c], c))
        threshold = scores[ranked[k - 1]]
        mandatory = [c for c in range(election.m) if scores[c] > threshold]
        optional = [c for c in range(election.m) if scores[c] == threshold]
        if all_tied:
            slots = k - len(mandatory)
            from math import comb

            if comb(len(optional), slots) > MAX_ENUMERATED_COMMITTEES:
                raise RuntimeError("too many tied committees")
            committees = [
                tuple(sorted(mandatory + list(extra)))
                for extra in combinations(optional, slots)
            ]
        else:
            committees = [tuple(sorted(mandatory + optional[: k - len(mandatory)]))]
        diag = {
            "candidate_scores": tuple(scores),
            "committee_scores": {
                w: sum(scores[c] for c in w) for w in committees
            },
        }
        return _outcome(election, rule, committees, diag)

    if rule.kind in ("pav", "cc", "geom_pav"):
        if rule.kind == "cc":
            score = lambda combo: _cc_score(election, _mask(combo))
        else:
            weights = (
                _harmonic_weights(k)
                if rule.kind == "pav"
                else _geometric_weights(k, rule.weight)
            )
            score = lambda combo: _thiele_score(election, _mask(combo), weights)
        best, best_score = _optimize(election, score, maximize=True, all_tied=all_tied)
        return _outcome(election, rule, best, {"score": best_score})

    if rule.kind == "monroe":
        score = lambda combo: _monroe_score(election, combo)
        best, best_score = _optimize(election, score, maximize=True, all_tied=all_tied)
        return _outcome(election, rule, best, {"score": best_score})

    if rule.kind == "minimax_av":
        score = lambda combo: _minimax_score(election, _mask(combo))
        best, best_score = _optimize(election, score, maximize=False, all_tied=all_tied)
        return _outcome(election, rule, best, {"max_hamming": best_score})

    if rule.kind == "max_phragmen":
        score = lambda combo: max_phragmen_load_vector(election, combo)[:2]
        best, best_score = _optimize(election, score, maximize=False, all_tied=all_tied)
        loads = {w: max_phragmen_load_vector(election, w)[2] for w in best}
        return _outcome(
            election, rule, best, {"load_vectors": {w: tuple(l) for w, l in loads.items()}}
        )

    if rule.kind == "seq_pav":
        chosen, history = _seq_thiele(election, _harmonic_weights(k))
        return _outcome(election, rule, [tuple(sorted(chosen))], {"picks": history})
    if rule.kind == "seq_cc":
        chosen, history = _seq_thiele(election, [Fraction(1)])
        return _outcome(election, rule, [tuple(sorted(chosen))], {"picks": history})
    if rule.kind == "rev_seq_pav":
        chosen, history = _rev_seq_thiele(election, _harmonic_weights(election.m))
        return _outcome(election, rule, [tuple(sorted(chosen))], {"removals": history})
    if rule.kind == "seq_phragmen":
        chosen, loads = _seq_phragmen(election)
        return _outcome(
            election, rule, [tuple(sorted(chosen))], {"loads": tuple(loads), "order": tuple(chosen)}
        )
    if rule.kind == "rule_x":
        chosen, meta = _rule_x(election)
        return _outcome(election, rule, [tuple(sorted(chosen))], meta)
    if rule.kind == "greedy_monroe":
        chosen, assignment = _greedy_monroe(election)
        return _outcome(
            election, rule, [tuple(sorted(chosen))], {"assignment": tuple(assignment)}
        )
    raise AssertionError(rule.kind)


def _outcome(election, rule, combos, diagnostics) -> RuleOutcome:
    committees = tuple(Committee.of(c, election) for c in combos)
    return RuleOutcome(rule=rule, committees=committees, diagnostics=diagnostics)


def ir_consistency_probe(
    election: Election,
    rule: RuleId,
    fvec: Sequence[CohesionCertificate],
    node_cap: int = DEFAULT_NODE_CAP,
) -> dict:
    """Does the rule find an IR (and semi-strong JR) committee when one exists?

    Exact rules are probed over all tied winners, sequential rules over their
    single fixed-tie-break output.
    """
    from . import solver

    mode = "single" if rule.is_sequential else "all_tied"
    outcome = run_rule(election, rule, mode=mode)
    deficits_ir = [cert.f for cert in fvec]
    deficits_ssjr = [min(cert.f, 1) for cert in fvec]

    def meets(deficits) -> bool:
        for committee in outcome.committees:
            wmask = committee.mask()
            if all(
                (b & wmask).bit_count() >= d
                for b, d in zip(election.ballot_masks, deficits)
            ):
                return True
        return False

    ir_request = solver.SolveRequest(
        election=election, fvec=tuple(fvec), objective="FIND_IR", node_cap=node_cap
    )
    ssjr_request = solver.SolveRequest(
        election=election, fvec=tuple(fvec), objective="FIND_SSJR", node_cap=node_cap
    )
    ir_res = solver.find_committee(ir_request)
    ssjr_res = solver.find_committee(ssjr_request)
    return {
        "rule_found_ir": meets(deficits_ir),
        "rule_found_ssjr": meets(deficits_ssjr),
        "ir_exists": ir_res.status == "found",
        "ssjr_exists": ssjr_res.status == "found",
        "undecided": ir_res.status == "undecided" or ssjr_res.status == "undecided",
    }
