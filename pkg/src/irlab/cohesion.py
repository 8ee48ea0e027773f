"""Per-voter seat entitlements with witnesses.

The entitlement of voter i is the largest size of a set S inside her ballot
that is backed by enough like-minded voters, i.e.

    f_i = max { |S| : S subseteq A_i and |N(S)|*k >= |S|*n }.

``f_certificate_exact`` decides this by a pruned depth-first search over
subsets of the ballot (the problem is NP-hard in general, hence the node cap).
``f_certificate_vi`` computes the same value in O(n^2 m) time when a
voter-interval witness order is available, by scanning all position intervals
that contain the voter.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

from .model import Election, VoterGroup, mask_to_set
from .search import DEFAULT_NODE_CAP, NodeBudget


@dataclass(frozen=True)
class CohesionCertificate:
    """A voter's entitlement f together with a witnessing candidate set.

    Invariants: ``witness_set`` is part of the voter's ballot, has exactly
    ``f`` candidates, and its supporter group satisfies |N|*k >= f*n.
    """

    voter: int
    f: int
    witness_set: frozenset[int]
    witness_supporters: VoterGroup

    def verify(self, election: Election) -> bool:
        """Re-check the certificate by direct counting, independent of the search."""
        if self.witness_set - election.approvals[self.voter]:
            return False
        if len(self.witness_set) != self.f:
            return False
        mask = election.supporters_mask(self.witness_set)
        if mask != self.witness_supporters.mask():
            return False
        return mask.bit_count() * election.k >= self.f * election.n


@dataclass(frozen=True)
class IntervalSupport:
    """Shape of a voter's witness supporters on a voter-interval profile.

    Positions refer to the witness order (0-based).  ``below`` covers
    positions [left, pos-1], ``above`` covers [pos, right] where ``pos`` is
    the voter's own position; the two parts are disjoint and contiguous.
    """

    voter: int
    pos: int
    left: int
    right: int

    @property
    def below_size(self) -> int:
        return self.pos - self.left

    @property
    def above_size(self) -> int:
        return self.right - self.pos + 1


def _eligible_candidates(election: Election, voter: int) -> list[int]:
    """Ballot candidates that could appear in any cohesive set, ordered by
    descending approval count (ties by index)."""
    n, k = election.n, election.k
    cands = [
        c
        for c in sorted(election.approvals[voter])
        if election.candidate_voters[c].bit_count() * k >= n
    ]
    cands.sort(key=lambda c: (-election.candidate_voters[c].bit_count(), c))
    return cands


def f_certificate_exact(
    election: Election, voter: int, node_cap: int = DEFAULT_NODE_CAP
) -> CohesionCertificate:
    """Exact f_i by depth-first search over subsets of the voter's ballot.

    A branch is cut when even taking every remaining candidate cannot beat the
    best size found, or when the current supporters are already too few to
    back one more candidate.  The witness is the lexicographically smallest
    candidate set among those of maximum size.

    Raises :class:`~irlab.search.BudgetExceededError` when the cap is hit;
    a wrong answer is never returned.
    """
    if not 0 <= voter < election.n:
        raise ValueError(f"voter index {voter} out of range")
    budget = NodeBudget(node_cap)
    n, k = election.n, election.k
    order = _eligible_candidates(election, voter)
    cand_voters = election.candidate_voters

    best_size = 0

    def dfs(start: int, size: int, supp: int) -> None:
        nonlocal best_size
        budget.tick()
        if size > best_size:
            best_size = size
        # supporters already too few to back a (size+1)-set
        if supp.bit_count() * k < (size + 1) * n:
            return
        remaining = len(order) - start
        if size + remaining <= best_size:
            return
        for idx in range(start, len(order)):
            if size + (len(order) - idx) <= best_size:
                break
            new_supp = supp & cand_voters[order[idx]]
            if new_supp.bit_count() * k >= (size + 1) * n:
                dfs(idx + 1, size + 1, new_supp)

    dfs(0, 0, election.all_voters_mask())

    witness = _lex_min_witness(election, order, best_size, budget)
    supp_mask = election.supporters_mask(witness)
    return CohesionCertificate(
        voter=voter,
        f=best_size,
        witness_set=frozenset(witness),
        witness_supporters=VoterGroup.from_mask(supp_mask),
    )


def _lex_min_witness(
    election: Election, order: Sequence[int], target: int, budget: NodeBudget
) -> list[int]:
    """Lexicographically smallest feasible candidate set of size ``target``."""
    if target == 0:
        return []
    n, k = election.n, election.k
    cand_voters = election.candidate_voters
    pool = sorted(order)

    def extends(prefix_supp: int, size: int, start: int) -> bool:
        # can `prefix` be completed to a feasible set of size `target`
        # using pool[start:]?
        budget.tick()
        if size == target:
            return True
        if size + (len(pool) - start) < target:
            return False
        for idx in range(start, len(pool)):
            if size + (len(pool) - idx) < target:
                return False
            supp = prefix_supp & cand_voters[pool[idx]]
            if supp.bit_count() * k >= (size + 1) * n and extends(supp, size + 1, idx + 1):
                return True
        return False

    chosen: list[int] = []
    supp = election.all_voters_mask()
    start = 0
    while len(chosen) < target:
        for idx in range(start, len(pool)):
            new_supp = supp & cand_voters[pool[idx]]
            if new_supp.bit_count() * k >= (len(chosen) + 1) * n and extends(
                new_supp, len(chosen) + 1, idx + 1
            ):
                chosen.append(pool[idx])
                supp = new_supp
                start = idx + 1
                break
        else:
            raise AssertionError("witness reconstruction failed")  # unreachable
    return chosen


def vi_order_positions(election: Election, order: Sequence[int]) -> list[int]:
    """Validate ``order`` as a voter-interval witness and return position-of-voter.

    Raises ValueError if ``order`` is not a permutation of the voters or some
    candidate's supporters are not contiguous under it.
    """
    n = election.n
    if sorted(order) != list(range(n)):
        raise ValueError("order is not a permutation of the voters")
    pos = [0] * n
    for p, v in enumerate(order):
        pos[v] = p
    for c in range(election.m):
        mask = election.candidate_voters[c]
        if mask == 0:
            continue
        positions = [pos[v] for v in mask_to_set(mask)]
        if max(positions) - min(positions) + 1 != len(positions):
            raise ValueError(
                f"order is not a VI witness: supporters of candidate {c} are not contiguous"
            )
    return pos


def f_certificate_vi(
    election: Election, order: Sequence[int], voter: int
) -> CohesionCertificate:
    """Polynomial f_i on a voter-interval profile (interval scan).

    Every candidate set's supporters form a contiguous block of ``order``
    containing the voter, so it suffices to scan all position intervals
    [xl, xr] around the voter: the interval commonly approves some set S and
    is large enough to claim l* = floor(len*k/n) seats, contributing
    min(l*, |S|).  The first interval in scan order (xl ascending, then xr
    ascending) that attains the maximum provides the witness.
    """
    if not 0 <= voter < election.n:
        raise ValueError(f"voter index {voter} out of range")
    pos = vi_order_positions(election, order)
    return _vi_certificate_from_positions(election, order, pos, voter)


def _candidate_position_spans(
    election: Election, pos: Sequence[int]
) -> list[tuple[int, int]]:
    """(lo, hi) position span of each candidate's supporters; (-1, -1) if none."""
    spans = []
    for c in range(election.m):
        mask = election.candidate_voters[c]
        if mask == 0:
            spans.append((-1, -1))
            continue
        positions = [pos[v] for v in mask_to_set(mask)]
        spans.append((min(positions), max(positions)))
    return spans


def _vi_certificate_from_positions(
    election: Election,
    order: Sequence[int],
    pos: Sequence[int],
    voter: int,
    spans: list[tuple[int, int]] | None = None,
) -> CohesionCertificate:
    n, k = election.n, election.k
    if spans is None:
        spans = _candidate_position_spans(election, pos)
    p = pos[voter]

    best = 0
    best_interval: tuple[int, int] | None = None
    for xl in range(0, p + 1):
        for xr in range(p, n):
            length = xr - xl + 1
            l_star = (length * k) // n
            if l_star <= best:
                continue
            common = [
                c for c, (lo, hi) in enumerate(spans) if lo != -1 and lo <= xl and hi >= xr
            ]
            value = min(l_star, len(common))
            if value > best:
                best = value
                best_interval = (xl, xr)
    if best == 0:
        return CohesionCertificate(
            voter=voter,
            f=0,
            witness_set=frozenset(),
            witness_supporters=VoterGroup.from_mask(election.all_voters_mask()),
        )
    xl, xr = best_interval
    common = sorted(
        c for c, (lo, hi) in enumerate(spans) if lo != -1 and lo <= xl and hi >= xr
    )
    witness = frozenset(common[:best])
    supp = election.supporters_mask(witness)
    return CohesionCertificate(
        voter=voter,
        f=best,
        witness_set=witness,
        witness_supporters=VoterGroup.from_mask(supp),
    )


def interval_support(
    election: Election, order: Sequence[int], certificate: CohesionCertificate
) -> IntervalSupport:
    """Locate the witness supporters of ``certificate`` as a position interval."""
    pos = vi_order_positions(election, order)
    p = pos[certificate.voter]
    positions = sorted(pos[v] for v in certificate.witness_supporters.members)
    left, right = positions[0], positions[-1]
    if right - left + 1 != len(positions) or not left <= p <= right:
        raise ValueError("witness supporters do not form an interval containing the voter")
    return IntervalSupport(voter=certificate.voter, pos=p, left=left, right=right)


FMethod = Literal["exact", "vi"]


def f_vector(
    election: Election,
    method: FMethod = "exact",
    order: Sequence[int] | None = None,
    node_cap: int = DEFAULT_NODE_CAP,
) -> list[CohesionCertificate]:
    """All n certificates, in voter order.

    Voters with identical ballots share the same f value and witness, so the
    search runs once per distinct ballot.
    """
    if method == "exact":
        cache: dict[frozenset[int], CohesionCertificate] = {}
        result = []
        for i, ballot in enumerate(election.approvals):
            hit = cache.get(ballot)
            if hit is None:
                hit = f_certificate_exact(election, i, node_cap=node_cap)
                cache[ballot] = hit
            if hit.voter != i:
                hit = CohesionCertificate(
                    voter=i,
                    f=hit.f,
                    witness_set=hit.witness_set,
                    witness_supporters=hit.witness_supporters,
                )
            result.append(hit)
        return result
    if method == "vi":
        if order is None:
            raise ValueError("method 'vi' requires a witness order")
        pos = vi_order_positions(election, order)
        spans = _candidate_position_spans(election, pos)
        return [
            _vi_certificate_from_positions(election, order, pos, i, spans)
            for i in range(election.n)
        ]
    raise ValueError(f"unknown method {method!r}")
