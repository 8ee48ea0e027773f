"""Shared node-count budget for the exponential searches in this package."""

from __future__ import annotations


class BudgetExceededError(RuntimeError):
    """An exact search hit its node cap before producing a provably correct answer."""

    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"exact computation infeasible within node cap {cap}")


class NodeBudget:
    """Counts explored search nodes and raises once ``cap`` is exceeded."""

    __slots__ = ("cap", "nodes")

    def __init__(self, cap: int):
        if cap <= 0:
            raise ValueError("node cap must be positive")
        self.cap = cap
        self.nodes = 0

    def tick(self, amount: int = 1) -> None:
        self.nodes += amount
        if self.nodes > self.cap:
            raise BudgetExceededError(self.cap)


DEFAULT_NODE_CAP = 10**7
