"""Restricted preference domains: recognition, witnesses and constructions.

Recognition decides whether a profile lies in a structured domain and, if so,
produces a machine-checkable witness (an ordering, a partition or per-set
end flags).  Constructions consume a witness and build a committee with the
domain's representation guarantee:

=========  =====================  ==================
domain     committee guarantee    semi-strong JR
=========  =====================  ==================
t-PART     exact (1,0)            yes
alpha-TR   exact (1,0)            yes
CEI / VEI  (2,0)                  yes
VI         (2,4)                  no
WSC        none                   yes
=========  =====================  ==================
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Sequence

from . import c1p
from .cohesion import (
    CohesionCertificate,
    f_vector,
    interval_support,
    vi_order_positions,
)
from .model import Committee, Election, mask_to_set

DomainId = Literal["CI", "VI", "CEI", "VEI", "T_PART", "WSC", "ALPHA_TR", "DUE"]

RECOGNIZABLE_DOMAINS: tuple[DomainId, ...] = ("CI", "VI", "CEI", "VEI", "T_PART", "WSC")


class InvalidWitnessError(ValueError):
    """The supplied witness does not certify membership in the domain."""


class ConstructionInfeasibleError(RuntimeError):
    """The domain construction cannot honor its guarantee on this input."""


@dataclass(frozen=True)
class GuaranteeTag:
    """Approximation level promised for the constructed committee."""

    alpha: Fraction | None
    beta: Fraction | None
    ssjr_guaranteed: bool


GUARANTEES: dict[str, GuaranteeTag] = {
    "T_PART": GuaranteeTag(Fraction(1), Fraction(0), True),
    "ALPHA_TR": GuaranteeTag(Fraction(1), Fraction(0), True),
    "CEI": GuaranteeTag(Fraction(2), Fraction(0), True),
    "VEI": GuaranteeTag(Fraction(2), Fraction(0), True),
    "VI": GuaranteeTag(Fraction(2), Fraction(4), False),
    "WSC": GuaranteeTag(None, None, True),
}


# --------------------------------------------------------------------------
# witnesses
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CIWitness:
    candidate_order: tuple[int, ...]


@dataclass(frozen=True)
class VIWitness:
    voter_order: tuple[int, ...]


@dataclass(frozen=True)
class CEIWitness:
    candidate_order: tuple[int, ...]
    voter_side: tuple[str, ...]  # 'prefix' | 'suffix' per voter


@dataclass(frozen=True)
class VEIWitness:
    voter_order: tuple[int, ...]
    candidate_side: tuple[str, ...]  # 'prefix' | 'suffix' per candidate


@dataclass(frozen=True)
class TPartWitness:
    blocks: tuple[frozenset[int], ...]
    voter_block: tuple[int, ...]  # block index per voter, -1 for an empty ballot


@dataclass(frozen=True)
class WSCWitness:
    voter_order: tuple[int, ...]


@dataclass(frozen=True)
class TreeWitness:
    """Rooted candidate tree: parent[c] is a candidate index or -1 for the root x."""

    parent: tuple[int, ...]


DomainWitness = (
    CIWitness | VIWitness | CEIWitness | VEIWitness | TPartWitness | WSCWitness | TreeWitness
)


# --------------------------------------------------------------------------
# witness validity
# --------------------------------------------------------------------------


def _is_end_block(positions: list[int], total: int) -> str | None:
    """'prefix'/'suffix' if sorted positions hug an end of [0, total); else None."""
    if not positions:
        return "prefix"
    if max(positions) - min(positions) + 1 != len(positions):
        return None
    if min(positions) == 0:
        return "prefix"
    if max(positions) == total - 1:
        return "suffix"
    return None


def verify_witness(election: Election, domain: DomainId, witness: DomainWitness) -> bool:
    """Re-check a witness against its domain invariants by direct evaluation."""
    n, m = election.n, election.m
    if domain == "CI":
        if not isinstance(witness, CIWitness) or sorted(witness.candidate_order) != list(range(m)):
            return False
        return c1p.is_consecutive_under(witness.candidate_order, election.approvals)
    if domain == "VI":
        if not isinstance(witness, VIWitness) or sorted(witness.voter_order) != list(range(n)):
            return False
        try:
            vi_order_positions(election, witness.voter_order)
        except ValueError:
            return False
        return True
    if domain == "CEI":
        if not isinstance(witness, CEIWitness) or sorted(witness.candidate_order) != list(range(m)):
            return False
        if len(witness.voter_side) != n:
            return False
        pos = {c: p for p, c in enumerate(witness.candidate_order)}
        for ballot, side in zip(election.approvals, witness.voter_side):
            if side not in ("prefix", "suffix"):
                return False
            if not _matches_side([pos[c] for c in ballot], m, side):
                return False
        return True
    if domain == "VEI":
        if not isinstance(witness, VEIWitness) or sorted(witness.voter_order) != list(range(n)):
            return False
        if len(witness.candidate_side) != m:
            return False
        pos = {v: p for p, v in enumerate(witness.voter_order)}
        for c in range(m):
            side = witness.candidate_side[c]
            if side not in ("prefix", "suffix"):
                return False
            sup = [pos[v] for v in mask_to_set(election.candidate_voters[c])]
            if not _matches_side(sup, n, side):
                return False
        return True
    if domain == "T_PART":
        if not isinstance(witness, TPartWitness):
            return False
        union: set[int] = set()
        for block in witness.blocks:
            if not block or union & block:
                return False
            union |= block
        if union != set(range(m)) or len(witness.voter_block) != n:
            return False
        for ballot, b in zip(election.approvals, witness.voter_block):
            if b == -1:
                if ballot:
                    return False
            elif not 0 <= b < len(witness.blocks) or ballot != witness.blocks[b]:
                return False
        return True
    if domain == "WSC":
        if not isinstance(witness, WSCWitness) or sorted(witness.voter_order) != list(range(n)):
            return False
        return _wsc_order_valid(election, witness.voter_order)
    if domain == "ALPHA_TR":
        if not isinstance(witness, TreeWitness):
            return False
        try:
            return verify_tree(election, witness)
        except ValueError:
            return False
    raise ValueError(f"no witness verification for domain {domain!r}")


def _matches_side(positions: list[int], total: int, side: str) -> bool:
    if not positions:
        return True
    if max(positions) - min(positions) + 1 != len(positions):
        return False
    return min(positions) == 0 if side == "prefix" else max(positions) == total - 1


def _wsc_order_valid(election: Election, order: Sequence[int]) -> bool:
    """Direct check of the weakly single-crossing condition for every pair."""
    n = election.n
    pos = [0] * n
    for p, v in enumerate(order):
        pos[v] = p
    masks = election.candidate_voters
    for c in range(election.m):
        for d in range(c + 1, election.m):
            only_c = masks[c] & ~masks[d]
            only_d = masks[d] & ~masks[c]
            runs = _collapsed_runs(only_c, only_d, pos, n)
            if runs not in _WSC_RUN_PATTERNS:
                return False
    return True


def _collapsed_runs(only_c: int, only_d: int, pos: Sequence[int], n: int) -> tuple[int, ...]:
    symbols = [3] * n
    mask = only_c
    while mask:
        low = mask & -mask
        symbols[pos[low.bit_length() - 1]] = 1
        mask ^= low
    mask = only_d
    while mask:
        low = mask & -mask
        symbols[pos[low.bit_length() - 1]] = 2
        mask ^= low
    runs: list[int] = []
    for s in symbols:
        if not runs or runs[-1] != s:
            runs.append(s)
    return tuple(runs)


def _subsequences(seq: tuple[int, ...]) -> set[tuple[int, ...]]:
    out = {()}
    for x in seq:
        out |= {prefix + (x,) for prefix in out}
    return out


_WSC_RUN_PATTERNS = _subsequences((1, 3, 2)) | _subsequences((2, 3, 1))


# --------------------------------------------------------------------------
# recognition
# --------------------------------------------------------------------------


def recognize(election: Election, domain: DomainId) -> DomainWitness | None:
    """Find a domain witness, or None when the profile is provably outside.

    DUE recognition is out of scope and ALPHA_TR witnesses are verified
    rather than searched (use :func:`verify_tree`).
    """
    if domain == "CI":
        order = c1p.consecutive_ones_order(election.m, election.approvals)
        return None if order is None else CIWitness(candidate_order=tuple(order))
    if domain == "VI":
        supporter_sets = [
            mask_to_set(election.candidate_voters[c]) for c in range(election.m)
        ]
        order = c1p.consecutive_ones_order(election.n, supporter_sets)
        return None if order is None else VIWitness(voter_order=tuple(order))
    if domain == "CEI":
        layout = _prefix_suffix_layout(election.m, list(election.approvals))
        if layout is None:
            return None
        order, side_of = layout
        sides = tuple(side_of.get(ballot, "prefix") for ballot in election.approvals)
        return CEIWitness(candidate_order=tuple(order), voter_side=sides)
    if domain == "VEI":
        supporter_sets = [
            mask_to_set(election.candidate_voters[c]) for c in range(election.m)
        ]
        layout = _prefix_suffix_layout(election.n, supporter_sets)
        if layout is None:
            return None
        order, side_of = layout
        sides = tuple(side_of.get(s, "prefix") for s in supporter_sets)
        return VEIWitness(voter_order=tuple(order), candidate_side=sides)
    if domain == "T_PART":
        return _recognize_tpart(election)
    if domain == "WSC":
        return _recognize_wsc(election)
    if domain in ("DUE", "ALPHA_TR"):
        raise ValueError(f"recognition for domain {domain} is not supported")
    raise ValueError(f"unknown domain {domain!r}")


def _recognize_tpart(election: Election) -> TPartWitness | None:
    blocks: list[frozenset[int]] = []
    index_of: dict[frozenset[int], int] = {}
    voter_block: list[int] = []
    for ballot in election.approvals:
        if not ballot:
            voter_block.append(-1)
            continue
        if ballot not in index_of:
            for other in blocks:
                if other & ballot and other != ballot:
                    return None
            index_of[ballot] = len(blocks)
            blocks.append(ballot)
        voter_block.append(index_of[ballot])
    leftover = frozenset(range(election.m)) - frozenset().union(*blocks)
    if leftover:
        blocks.append(leftover)
    return TPartWitness(blocks=tuple(blocks), voter_block=tuple(voter_block))


def _recognize_wsc(election: Election) -> WSCWitness | None:
    n = election.n
    all_mask = election.all_voters_mask()
    family: list[frozenset[int]] = []
    seen: set[frozenset[int]] = set()
    forced_diff: list[tuple[frozenset[int], frozenset[int]]] = []

    def intern(mask: int) -> frozenset[int] | None:
        if mask == 0 or mask == all_mask:
            return None  # empty or full sets sit at an end of any order
        s = mask_to_set(mask)
        if s not in seen:
            seen.add(s)
            family.append(s)
        return s

    masks = election.candidate_voters
    for c in range(election.m):
        for d in range(c + 1, election.m):
            x = intern(masks[c] & ~masks[d])
            y = intern(masks[d] & ~masks[c])
            if x is not None and y is not None:
                forced_diff.append((x, y))
    layout = _prefix_suffix_layout(n, family, forced_diff)
    if layout is None:
        return None
    order, _ = layout
    if not _wsc_order_valid(election, order):
        return None
    return WSCWitness(voter_order=tuple(order))


def _prefix_suffix_layout(
    num_columns: int,
    sets: Sequence[frozenset[int]],
    forced_diff: Sequence[tuple[frozenset[int], frozenset[int]]] = (),
) -> tuple[list[int], dict[frozenset[int], str]] | None:
    """Assign each set to an end ('prefix'/'suffix') of a single column order.

    Two sets can share an end only if nested; sets at opposite ends must
    intersect in exactly max(0, |A|+|B|-num_columns) columns.  These pairwise
    constraints induce a parity two-coloring; the order itself follows from
    the two containment chains.
    """
    fam: list[frozenset[int]] = []
    seen: set[frozenset[int]] = set()
    for s in sets:
        if s and s not in seen:
            seen.add(s)
            fam.append(s)

    idx = {s: i for i, s in enumerate(fam)}
    edges: list[list[tuple[int, int]]] = [[] for _ in fam]  # (neighbor, parity)

    def add_edge(i: int, j: int, parity: int) -> None:
        edges[i].append((j, parity))
        edges[j].append((i, parity))

    for i in range(len(fam)):
        for j in range(i + 1, len(fam)):
            a, b = fam[i], fam[j]
            same_ok = a <= b or b <= a
            cross_ok = len(a & b) == max(0, len(a) + len(b) - num_columns)
            if not same_ok and not cross_ok:
                return None
            if same_ok and not cross_ok:
                add_edge(i, j, 0)
            elif cross_ok and not same_ok:
                add_edge(i, j, 1)
    for a, b in forced_diff:
        i, j = idx[a], idx[b]
        if len(a & b) != max(0, len(a) + len(b) - num_columns):
            return None
        add_edge(i, j, 1)

    color = [-1] * len(fam)
    for start in range(len(fam)):
        if color[start] != -1:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            u = stack.pop()
            for v, parity in edges[u]:
                want = color[u] ^ parity
                if color[v] == -1:
                    color[v] = want
                    stack.append(v)
                elif color[v] != want:
                    return None

    prefixes = sorted((s for i, s in enumerate(fam) if color[i] == 0), key=len)
    suffixes = sorted((s for i, s in enumerate(fam) if color[i] == 1), key=len)

    def layer(chains: list[frozenset[int]], col: int) -> float:
        for rank, s in enumerate(chains):
            if col in s:
                return rank
        return float("inf")

    order = sorted(
        range(num_columns),
        key=lambda col: (layer(prefixes, col), -layer(suffixes, col), col),
    )
    side_of: dict[frozenset[int], str] = {}
    for i, s in enumerate(fam):
        side = "prefix" if color[i] == 0 else "suffix"
        positions = [order.index(col) for col in s]
        if not _matches_side(positions, num_columns, side):
            return None  # pairwise-consistent but globally infeasible; caught here
        side_of[s] = side
    return order, side_of


# --------------------------------------------------------------------------
# candidate trees
# --------------------------------------------------------------------------


def verify_tree(election: Election, tree: TreeWitness) -> bool:
    """True iff every ballot is exactly a root path of the candidate tree.

    Raises ValueError when the tree itself is malformed (bad parent index,
    cycle, disconnected vertex).
    """
    m = election.m
    if len(tree.parent) != m:
        raise ValueError("parent vector length differs from candidate count")
    depth = [0] * m
    for c in range(m):
        p = tree.parent[c]
        if p != -1 and not 0 <= p < m:
            raise ValueError(f"candidate {c}: parent index {p} out of range")
    for c in range(m):
        seen = set()
        cur = c
        d = 0
        while cur != -1:
            if cur in seen:
                raise ValueError(f"cycle through candidate {c}")
            seen.add(cur)
            d += 1
            cur = tree.parent[cur]
            if d > m:
                raise ValueError("parent chain too long; tree malformed")
        depth[c] = d
    path_sets = []
    for c in range(m):
        path = set()
        cur = c
        while cur != -1:
            path.add(cur)
            cur = tree.parent[cur]
        path_sets.append(frozenset(path))
    valid = set(path_sets)
    for ballot in election.approvals:
        if ballot and ballot not in valid:
            return False
    return True


def _tree_depths(tree: TreeWitness) -> list[int]:
    depth = []
    for c in range(len(tree.parent)):
        d = 0
        cur = c
        while cur != -1:
            d += 1
            cur = tree.parent[cur]
        depth.append(d)
    return depth


# --------------------------------------------------------------------------
# constructions
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class VIRoundStep:
    """One iteration of a round of the two-pass voter-interval algorithm."""

    voter: int
    position: int
    support_below: int  # |N_<i|, witness supporters strictly before the voter
    support_above: int  # |N_>=i|, witness supporters from the voter on
    target: int
    added: tuple[int, ...]
    accumulated: int  # |W_i| resp. |W-hat_i| after this iteration


@dataclass(frozen=True)
class VITrace:
    round1: tuple[VIRoundStep, ...]
    round2: tuple[VIRoundStep, ...]
    padding: tuple[int, ...]
    certificates: tuple[CohesionCertificate, ...]


@dataclass(frozen=True)
class ConstructResult:
    committee: Committee
    guarantee: GuaranteeTag
    trace: VITrace | None = None
    metadata: dict = field(default_factory=dict)


def construct(
    election: Election, domain: DomainId, witness: DomainWitness
) -> ConstructResult:
    """Build a committee with the domain's guarantee; the witness is re-verified."""
    if domain == "VI":
        return construct_vi(election, witness)
    if domain == "CEI":
        return _construct_cei(election, witness)
    if domain == "VEI":
        return _construct_vei(election, witness)
    if domain == "T_PART":
        return _construct_tpart(election, witness)
    if domain == "WSC":
        return _construct_wsc(election, witness)
    if domain == "ALPHA_TR":
        return _construct_atr(election, witness)
    raise ValueError(f"no construction for domain {domain!r}")


def _pad_committee(election: Election, members: set[int]) -> tuple[int, ...]:
    pad = []
    for c in range(election.m):
        if len(members) + len(pad) == election.k:
            break
        if c not in members:
            pad.append(c)
    return tuple(pad)


def construct_vi(election: Election, witness: VIWitness) -> ConstructResult:
    """Two-pass committee construction with the (2,4) guarantee on VI profiles.

    Round 1 walks the witness order forward and tops up each voter to
    floor(|N_>=i| * k / 2n) approved members, drawing fresh candidates from
    the voter's own witness set; round 2 walks backwards with the mirrored
    target floor(|N_<i| * k / 2n), avoiding round-1 picks where possible.
    When a witness set is exhausted the voter already holds all of it, which
    meets the guarantee outright.
    """
    if not isinstance(witness, VIWitness):
        raise InvalidWitnessError("expected a VIWitness")
    order = list(witness.voter_order)
    try:
        certs = f_vector(election, "vi", order=order)  # validates the order
    except ValueError as exc:
        raise InvalidWitnessError(str(exc)) from None
    n, k = election.n, election.k
    intervals = [interval_support(election, order, certs[v]) for v in range(n)]

    committee: set[int] = set()
    round1: list[VIRoundStep] = []
    for p in range(n):
        v = order[p]
        iv = intervals[v]
        # a wide supporter interval can ask for more than the witness set
        # holds; capping at f_i keeps the request servable (a voter holding
        # all of her witness set is fully represented already)
        target = min((iv.above_size * k) // (2 * n), certs[v].f)
        ballot = election.approvals[v]
        have = len(committee & ballot)
        added: tuple[int, ...] = ()
        if have < target:
            fresh = sorted(certs[v].witness_set - committee)
            added = tuple(fresh[: target - have])
            committee.update(added)
        round1.append(
            VIRoundStep(
                voter=v,
                position=p,
                support_below=iv.below_size,
                support_above=iv.above_size,
                target=target,
                added=added,
                accumulated=len(committee),
            )
        )

    round1_set = frozenset(committee)
    hat: set[int] = set()
    round2: list[VIRoundStep] = []
    for p in range(n - 1, -1, -1):
        v = order[p]
        iv = intervals[v]
        target = min((iv.below_size * k) // (2 * n), certs[v].f)
        ballot = election.approvals[v]
        have = len(hat & ballot)
        added = ()
        if have < target:
            need = target - have
            fresh = sorted(certs[v].witness_set - hat - round1_set)
            overlap = sorted((certs[v].witness_set & round1_set) - hat)
            added = tuple((fresh + overlap)[:need])
            hat.update(added)
        round2.append(
            VIRoundStep(
                voter=v,
                position=p,
                support_below=iv.below_size,
                support_above=iv.above_size,
                target=target,
                added=added,
                accumulated=len(hat),
            )
        )

    members = committee | hat
    if len(members) > k:
        raise AssertionError("two-pass selection exceeded the committee size")
    padding = _pad_committee(election, members)
    members.update(padding)
    trace = VITrace(
        round1=tuple(round1),
        round2=tuple(round2),
        padding=padding,
        certificates=tuple(certs),
    )
    return ConstructResult(
        committee=Committee.of(members, election),
        guarantee=GUARANTEES["VI"],
        trace=trace,
    )


def _universally_approved(election: Election) -> list[int]:
    full = election.all_voters_mask()
    return [c for c in range(election.m) if election.candidate_voters[c] == full]


def _ends_committee(election: Election, order: Sequence[int]) -> set[int]:
    k = election.k
    head = list(order[: k // 2])
    tail = list(order[len(order) - (k - k // 2) :])
    return set(head) | set(tail)


def _construct_cei(election: Election, witness: CEIWitness) -> ConstructResult:
    if not isinstance(witness, CEIWitness) or not verify_witness(election, "CEI", witness):
        raise InvalidWitnessError("invalid CEI witness")
    common = _universally_approved(election)
    if len(common) >= election.k:
        members = set(common[: election.k])
    else:
        members = _ends_committee(election, witness.candidate_order)
    return ConstructResult(
        committee=Committee.of(members, election), guarantee=GUARANTEES["CEI"]
    )


def vei_candidate_order(election: Election, witness: VEIWitness) -> list[int]:
    """The candidate order used by the VEI construction: prefix-supported
    candidates sorted by last approving voter descending, then
    suffix-supported ones by first approving voter descending."""
    pos = [0] * election.n
    for p, v in enumerate(witness.voter_order):
        pos[v] = p
    prefix_cands: list[tuple[int, int]] = []
    suffix_cands: list[tuple[int, int]] = []
    for c in range(election.m):
        sup = [pos[v] for v in mask_to_set(election.candidate_voters[c])]
        side = witness.candidate_side[c]
        if not sup:
            prefix_cands.append((-1, c))
        elif side == "prefix" or min(sup) == 0 and max(sup) == election.n - 1:
            prefix_cands.append((max(sup), c))
        else:
            suffix_cands.append((min(sup), c))
    prefix_cands.sort(key=lambda t: (-t[0], t[1]))
    suffix_cands.sort(key=lambda t: (-t[0], t[1]))
    return [c for _, c in prefix_cands] + [c for _, c in suffix_cands]


def _construct_vei(election: Election, witness: VEIWitness) -> ConstructResult:
    if not isinstance(witness, VEIWitness) or not verify_witness(election, "VEI", witness):
        raise InvalidWitnessError("invalid VEI witness")
    common = _universally_approved(election)
    if len(common) >= election.k:
        members = set(common[: election.k])
    else:
        members = _ends_committee(election, vei_candidate_order(election, witness))
    return ConstructResult(
        committee=Committee.of(members, election), guarantee=GUARANTEES["VEI"]
    )


def _construct_tpart(election: Election, witness: TPartWitness) -> ConstructResult:
    if not isinstance(witness, TPartWitness) or not verify_witness(election, "T_PART", witness):
        raise InvalidWitnessError("invalid t-PART witness")
    n, k = election.n, election.k
    members: set[int] = set()
    for block in witness.blocks:
        backing = election.supporters_mask(block).bit_count()
        quota = (backing * k) // n
        members.update(sorted(block)[: min(quota, len(block))])
    if len(members) > k:
        raise AssertionError("block quotas exceeded the committee size")
    members.update(_pad_committee(election, members))
    return ConstructResult(
        committee=Committee.of(members, election), guarantee=GUARANTEES["T_PART"]
    )


def _singleton_demands(election: Election) -> list[tuple[int, int]]:
    """(voter, candidate) for single-candidate ballots whose voter has f_i >= 1."""
    out = []
    for v, ballot in enumerate(election.approvals):
        if len(ballot) == 1:
            c = next(iter(ballot))
            if election.candidate_voters[c].bit_count() * election.k >= election.n:
                out.append((v, c))
    return out


def _construct_wsc(election: Election, witness: WSCWitness) -> ConstructResult:
    if not isinstance(witness, WSCWitness) or not verify_witness(election, "WSC", witness):
        raise InvalidWitnessError("invalid WSC witness")
    k = election.k
    members: set[int] = set()
    wide = [v for v in witness.voter_order if len(election.approvals[v]) >= 2]
    if wide:
        c_star = min(election.approvals[wide[0]])
        members.add(c_star)
        crossing = next(
            (v for v in wide if c_star not in election.approvals[v]), None
        )
        if crossing is not None:
            members.add(min(election.approvals[crossing]))
    # single-candidate voters are excluded from the crossing argument; cover
    # the entitled ones directly while seats remain
    for v, c in _singleton_demands(election):
        if c not in members:
            if len(members) >= k:
                raise ConstructionInfeasibleError(
                    f"no seat left for entitled single-candidate voter {v}"
                )
            members.add(c)
    if len(members) > k:
        raise ConstructionInfeasibleError("guaranteed candidates exceed committee size")
    members.update(_pad_committee(election, members))
    committee = Committee.of(members, election)
    # the guarantee is semi-strong JR; re-check it rather than assuming
    for v, ballot in enumerate(election.approvals):
        entitled = any(
            election.candidate_voters[c].bit_count() * k >= election.n for c in ballot
        )
        if entitled and not (ballot & committee.members):
            raise ConstructionInfeasibleError(
                f"voter {v} with positive entitlement left unrepresented"
            )
    return ConstructResult(committee=committee, guarantee=GUARANTEES["WSC"])


def _construct_atr(election: Election, witness: TreeWitness) -> ConstructResult:
    if not isinstance(witness, TreeWitness):
        raise InvalidWitnessError("expected a TreeWitness")
    if not verify_tree(election, witness):
        raise InvalidWitnessError("ballots are not root paths of the tree")
    n, k = election.n, election.k
    depth = _tree_depths(witness)
    children: dict[int, list[int]] = {}
    for c, p in enumerate(witness.parent):
        children.setdefault(p, []).append(c)
    # breadth-first traversal from the root keeps the voter-assignment
    # argument auditable; any traversal order selects the same set
    queue = sorted(children.get(-1, []))
    bfs: list[int] = []
    while queue:
        c = queue.pop(0)
        bfs.append(c)
        queue.extend(sorted(children.get(c, [])))
    members = {
        c
        for c in bfs
        if election.candidate_voters[c].bit_count() * k >= n * depth[c]
    }
    if len(members) > k:
        raise AssertionError("tree selection exceeded the committee size")
    members.update(_pad_committee(election, members))
    return ConstructResult(
        committee=Committee.of(members, election), guarantee=GUARANTEES["ALPHA_TR"]
    )
