"""Individual representation in approval-based committee elections.

Core objects: :class:`~irlab.model.Election` profiles, per-voter entitlement
certificates (:mod:`irlab.cohesion`), axiom checks with witnesses
(:mod:`irlab.axioms`), ABC voting rules (:mod:`irlab.rules`), restricted
domains (:mod:`irlab.domains`), exact committee search (:mod:`irlab.solver`),
profile generators (:mod:`irlab.gen`) and the experiment harness
(:mod:`irlab.experiment`).
"""

from .model import Committee, Election, VoterGroup, parse_profile, serialize_profile, supporters

__all__ = [
    "Committee",
    "Election",
    "VoterGroup",
    "parse_profile",
    "serialize_profile",
    "supporters",
]
