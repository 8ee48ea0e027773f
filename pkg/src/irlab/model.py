"""Core election data types, validation, supporter queries and the .avp file format.

Conventions used throughout the package:

* candidate and voter indices are 0-based in memory and 1-based in ``.avp`` files;
* all proportionality thresholds are evaluated with exact integer arithmetic,
  i.e. ``|V| >= l*n/k`` is always written as ``|V|*k >= l*n`` (n/k is never
  materialized as a float);
* every type in this module is immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator


class ProfileFormatError(ValueError):
    """Raised when a ``.avp`` stream violates the format; carries the line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Election:
    """An approval-based committee election: n voters, m candidates, committee size k.

    ``approvals[i]`` is the (frozen) set of candidate indices approved by voter i.
    """

    n: int
    m: int
    k: int
    approvals: tuple[frozenset[int], ...]

    # bitmask caches, derived in __post_init__ (voter bit i / candidate bit c)
    candidate_voters: tuple[int, ...] = field(init=False, repr=False, compare=False)
    ballot_masks: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError(f"voter count must be positive, got {self.n}")
        if self.m <= 0:
            raise ValueError(f"candidate count must be positive, got {self.m}")
        if not 1 <= self.k <= self.m:
            raise ValueError(f"committee size k={self.k} not in [1, {self.m}]")
        if len(self.approvals) != self.n:
            raise ValueError(
                f"expected {self.n} approval sets, got {len(self.approvals)}"
            )
        cand_voters = [0] * self.m
        ballots = []
        for i, ballot in enumerate(self.approvals):
            mask = 0
            for c in ballot:
                if not 0 <= c < self.m:
                    raise ValueError(f"voter {i}: candidate index {c} out of range")
                cand_voters[c] |= 1 << i
                mask |= 1 << c
            ballots.append(mask)
        object.__setattr__(self, "candidate_voters", tuple(cand_voters))
        object.__setattr__(self, "ballot_masks", tuple(ballots))

    @staticmethod
    def from_approvals(approvals: Iterable[Iterable[int]], m: int, k: int) -> "Election":
        sets = tuple(frozenset(a) for a in approvals)
        return Election(n=len(sets), m=m, k=k, approvals=sets)

    def all_voters_mask(self) -> int:
        return (1 << self.n) - 1

    def supporters_mask(self, candidates: Iterable[int]) -> int:
        """Bitmask of voters approving every candidate in ``candidates``."""
        mask = self.all_voters_mask()
        for c in candidates:
            if not 0 <= c < self.m:
                raise ValueError(f"candidate index {c} out of range")
            mask &= self.candidate_voters[c]
        return mask


@dataclass(frozen=True)
class Committee:
    """A candidate subset of size at most ``target_size`` under evaluation."""

    members: frozenset[int]
    target_size: int

    def __post_init__(self):
        if len(self.members) > self.target_size:
            raise ValueError(
                f"committee has {len(self.members)} members, target size {self.target_size}"
            )

    @staticmethod
    def of(members: Iterable[int], election: Election) -> "Committee":
        members = frozenset(members)
        for c in members:
            if not 0 <= c < election.m:
                raise ValueError(f"candidate index {c} out of range")
        return Committee(members=members, target_size=election.k)

    def mask(self) -> int:
        m = 0
        for c in self.members:
            m |= 1 << c
        return m

    def sorted_members(self) -> list[int]:
        return sorted(self.members)


@dataclass(frozen=True)
class VoterGroup:
    """A set of voter indices, e.g. the supporters N(S) of a candidate set S."""

    members: frozenset[int]

    @staticmethod
    def from_mask(mask: int) -> "VoterGroup":
        return VoterGroup(members=frozenset(_iter_bits(mask)))

    def mask(self) -> int:
        m = 0
        for v in self.members:
            m |= 1 << v
        return m

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members))


def _iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_to_set(mask: int) -> frozenset[int]:
    return frozenset(_iter_bits(mask))


def supporters(election: Election, candidates: Iterable[int]) -> VoterGroup:
    """N(S): the voters whose ballot contains every candidate of ``candidates``.

    ``supporters(e, [])`` is the full electorate.
    """
    return VoterGroup.from_mask(election.supporters_mask(candidates))


def parse_profile(text: str) -> Election:
    """Parse a ``.avp`` character stream into a validated :class:`Election`.

    Format: line 1 is ``n m k``; the next n non-comment lines hold the 1-based
    candidate indices approved by voters 1..n (an empty line is an empty
    ballot).  ``#`` starts a comment line, trailing whitespace is ignored,
    LF and CRLF are both accepted.
    """
    header: tuple[int, int, int] | None = None
    approvals: list[frozenset[int]] = []
    header_values: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if line.lstrip().startswith("#"):
            continue
        if header is None:
            if not line.strip():
                continue  # leading blank lines before the header are harmless
            parts = line.split()
            if len(parts) != 3:
                raise ProfileFormatError(
                    f"header must be 'n m k', got {line.strip()!r}", lineno
                )
            try:
                header_values = [int(p) for p in parts]
            except ValueError:
                raise ProfileFormatError(
                    f"header must contain integers, got {line.strip()!r}", lineno
                ) from None
            n, m, k = header_values
            if n <= 0 or m <= 0:
                raise ProfileFormatError(f"n and m must be positive, got n={n} m={m}", lineno)
            if not 1 <= k <= m:
                raise ProfileFormatError(f"k={k} out of range [1, {m}]", lineno)
            header = (n, m, k)
            continue
        n, m, k = header
        if len(approvals) == n:
            raise ProfileFormatError(
                f"unexpected extra content after {n} voter lines: {line.strip()!r}", lineno
            )
        ballot: set[int] = set()
        for token in line.split():
            try:
                idx = int(token)
            except ValueError:
                raise ProfileFormatError(
                    f"invalid candidate index {token!r}", lineno
                ) from None
            if not 1 <= idx <= m:
                raise ProfileFormatError(
                    f"candidate index {idx} out of range [1, {m}]", lineno
                )
            if idx - 1 in ballot:
                raise ProfileFormatError(f"duplicate candidate index {idx}", lineno)
            ballot.add(idx - 1)
        approvals.append(frozenset(ballot))
    if header is None:
        raise ProfileFormatError("missing header line 'n m k'")
    n, m, k = header
    if len(approvals) < n:
        raise ProfileFormatError(
            f"expected {n} voter lines, found only {len(approvals)}"
        )
    return Election(n=n, m=m, k=k, approvals=tuple(approvals))


def serialize_profile(election: Election) -> str:
    """Canonical ``.avp`` text: sorted 1-based indices, one voter per line."""
    lines = [f"{election.n} {election.m} {election.k}"]
    for ballot in election.approvals:
        lines.append(" ".join(str(c + 1) for c in sorted(ballot)))
    return "\n".join(lines) + "\n"
