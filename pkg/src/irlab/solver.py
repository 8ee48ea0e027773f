"""Exact existence and approximation search for representative committees.

Deciding whether an IR committee exists is NP-hard, so the search is a
depth-first branch-and-bound over candidates guarded by a node cap:
``infeasible`` means the whole space was exhausted, ``undecided`` is only
reported when the cap was hit.  The optimization objectives reduce to
feasibility solves: MIN_BETA binary-searches the additive slack over the
integers, MIN_ALPHA binary-searches the multiplicative slack over the finite
grid of ratios (f_i - beta)/q with q <= k.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from . import axioms
from .cohesion import CohesionCertificate
from .model import Committee, Election
from .search import DEFAULT_NODE_CAP, BudgetExceededError, NodeBudget

OBJECTIVES = ("FIND_IR", "FIND_SSJR", "MIN_BETA", "MIN_ALPHA")


@dataclass(frozen=True)
class SolveRequest:
    election: Election
    fvec: tuple[CohesionCertificate, ...]
    objective: str = "FIND_IR"
    alpha: Fraction = Fraction(1)  # fixed multiplicative slack for MIN_BETA
    beta: Fraction = Fraction(0)  # fixed additive slack for MIN_ALPHA
    node_cap: int = DEFAULT_NODE_CAP

    def __post_init__(self):
        if self.objective not in OBJECTIVES:
            raise ValueError(f"unknown objective {self.objective!r}")
        if len(self.fvec) != self.election.n:
            raise ValueError("f-vector length must equal the number of voters")
        if self.node_cap <= 0:
            raise ValueError("node cap must be positive")
        if self.alpha < 1 or self.beta < 0:
            raise ValueError("alpha must be >= 1 and beta >= 0")


@dataclass(frozen=True)
class SolveResult:
    status: str  # 'found' | 'infeasible' | 'undecided'
    committee: Committee | None
    achieved_alpha: Fraction | None
    achieved_beta: Fraction | None
    nodes: int


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _deficits_for(
    fvec: Sequence[CohesionCertificate], alpha: Fraction, beta: Fraction
) -> list[int]:
    """Per-voter demand: the least w with alpha*w + beta >= f_i."""
    out = []
    for cert in fvec:
        need = Fraction(cert.f) - beta
        if need <= 0:
            out.append(0)
        else:
            q = need / alpha
            out.append(-(-q.numerator // q.denominator))
    return out


def _cover_search(
    election: Election, deficits: Sequence[int], budget: NodeBudget
) -> list[int] | None:
    """A candidate set of size <= k giving voter i at least deficits[i] of her
    approved candidates; None when none exists (exact).

    Branches on the candidates of a most-constrained unmet voter, cutting a
    branch as soon as some unmet voter cannot be topped up from her remaining
    approved pool within the remaining seats.
    """
    n, m, k = election.n, election.m, election.k
    ballots = election.ballot_masks
    cand_voters = election.candidate_voters
    need = list(deficits)
    if max(need, default=0) > k:
        return None
    unmet_mask = 0
    for i in range(n):
        if need[i] > 0:
            unmet_mask |= 1 << i
    chosen: list[int] = []

    def include(c: int) -> list[int]:
        nonlocal unmet_mask
        decremented = []
        for i in _bits(cand_voters[c] & unmet_mask):
            need[i] -= 1
            decremented.append(i)
            if need[i] == 0:
                unmet_mask &= ~(1 << i)
        chosen.append(c)
        return decremented

    def undo(c: int, decremented: list[int]) -> None:
        nonlocal unmet_mask
        chosen.pop()
        for i in decremented:
            if need[i] == 0:
                unmet_mask |= 1 << i
            need[i] += 1

    def dfs(pool: int, seats: int) -> bool:
        budget.tick()
        if unmet_mask == 0:
            return True
        if seats == 0:
            return False
        pivot = -1
        pivot_avail = m + 1
        for i in _bits(unmet_mask):
            avail = (ballots[i] & pool).bit_count()
            if avail < need[i] or need[i] > seats:
                return False
            if avail < pivot_avail:
                pivot, pivot_avail = i, avail
        options = sorted(
            _bits(ballots[pivot] & pool),
            key=lambda c: (-(cand_voters[c] & unmet_mask).bit_count(), c),
        )
        sub_pool = pool
        for c in options:
            sub_pool &= ~(1 << c)  # later branches must not reuse c
            decremented = include(c)
            if dfs(sub_pool, seats - 1):
                return True
            undo(c, decremented)
        return False

    if dfs((1 << m) - 1, k):
        return list(chosen)
    return None


def _pad_to_k(election: Election, members: list[int]) -> Committee:
    got = set(members)
    for c in range(election.m):
        if len(got) == election.k:
            break
        got.add(c)
    return Committee.of(got, election)


def _feasible(
    request: SolveRequest, alpha: Fraction, beta: Fraction, budget: NodeBudget
) -> Committee | None:
    deficits = _deficits_for(request.fvec, alpha, beta)
    hit = _cover_search(request.election, deficits, budget)
    if hit is None:
        return None
    return _pad_to_k(request.election, hit)


def find_committee(request: SolveRequest) -> SolveResult:
    """Solve the request exactly; `undecided` is only ever due to the node cap."""
    election = request.election
    budget = NodeBudget(request.node_cap)
    try:
        if request.objective in ("FIND_IR", "FIND_SSJR"):
            if request.objective == "FIND_SSJR":
                deficits = [min(cert.f, 1) for cert in request.fvec]
            else:
                deficits = [cert.f for cert in request.fvec]
            hit = _cover_search(election, deficits, budget)
            if hit is None:
                return SolveResult("infeasible", None, None, None, budget.nodes)
            committee = _pad_to_k(election, hit)
            _assert_entitled(request, committee, Fraction(1), Fraction(0), ssjr=request.objective == "FIND_SSJR")
            return SolveResult("found", committee, Fraction(1), Fraction(0), budget.nodes)

        if request.objective == "MIN_BETA":
            fmax = max((cert.f for cert in request.fvec), default=0)
            lo, hi = 0, fmax  # beta = fmax always feasible: every demand collapses
            best: Committee | None = _feasible(request, request.alpha, Fraction(fmax), budget)
            if best is None:
                raise AssertionError("beta = max f_i must be feasible")
            while lo < hi:
                mid = (lo + hi) // 2
                committee = _feasible(request, request.alpha, Fraction(mid), budget)
                if committee is not None:
                    best, hi = committee, mid
                else:
                    lo = mid + 1
            _assert_entitled(request, best, request.alpha, Fraction(lo))
            return SolveResult("found", best, request.alpha, Fraction(lo), budget.nodes)

        # MIN_ALPHA: the attainable values of max_i (f_i - beta)/|W cap A_i|
        # live on the grid {p/q : p = f_i - beta > 0, 1 <= q <= k}
        demands = sorted(
            {cert.f - request.beta for cert in request.fvec if cert.f - request.beta > 0}
        )
        if not demands:
            committee = _pad_to_k(election, [])
            return SolveResult("found", committee, Fraction(1), request.beta, budget.nodes)
        grid = sorted(
            {
                Fraction(p) / q
                for p in demands
                for q in range(1, election.k + 1)
                if Fraction(p) / q >= 1
            }
            | {Fraction(1)}
        )
        feas = [None] * len(grid)
        best_idx = None
        lo, hi = 0, len(grid) - 1
        committee = _feasible(request, grid[hi], request.beta, budget)
        if committee is None:
            return SolveResult("infeasible", None, None, None, budget.nodes)
        feas[hi], best_idx = committee, hi
        while lo < hi:
            mid = (lo + hi) // 2
            committee = _feasible(request, grid[mid], request.beta, budget)
            if committee is not None:
                feas[mid], best_idx = committee, mid
                hi = mid
            else:
                lo = mid + 1
        best = feas[best_idx]
        _assert_entitled(request, best, grid[best_idx], request.beta)
        return SolveResult("found", best, grid[best_idx], request.beta, budget.nodes)
    except BudgetExceededError:
        return SolveResult("undecided", None, None, None, budget.nodes)


def _assert_entitled(
    request: SolveRequest,
    committee: Committee,
    alpha: Fraction,
    beta: Fraction,
    ssjr: bool = False,
) -> None:
    # independent re-check through the axioms module; a failure is a bug
    axiom = axioms.SSJR if ssjr else (
        axioms.IR if alpha == 1 and beta == 0 else axioms.alpha_beta_ir(alpha, beta)
    )
    verdict = axioms.check(request.election, committee, axiom, fvec=request.fvec)
    if verdict.status != "satisfied":
        raise AssertionError(f"solver returned a committee failing {axiom}")


def enumerate_committees(
    election: Election,
    fvec: Sequence[CohesionCertificate],
    objective: str = "FIND_IR",
) -> list[Committee]:
    """All size-k committees meeting the objective, by full enumeration.

    Exponential; intended for fixtures and as an oracle for the search.
    """
    from itertools import combinations

    if objective == "FIND_SSJR":
        deficits = [min(cert.f, 1) for cert in fvec]
    elif objective == "FIND_IR":
        deficits = [cert.f for cert in fvec]
    else:
        raise ValueError("enumeration supports FIND_IR and FIND_SSJR only")
    out = []
    for combo in combinations(range(election.m), election.k):
        wmask = 0
        for c in combo:
            wmask |= 1 << c
        if all(
            (ballot & wmask).bit_count() >= d
            for ballot, d in zip(election.ballot_masks, deficits)
        ):
            out.append(Committee.of(combo, election))
    return out
