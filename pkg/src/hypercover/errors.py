from __future__ import annotations


class BudgetExceeded(RuntimeError):
    """A computation hit its configured size or node cap."""

    def __init__(self, msg: str, nodes: int = 0, partial: dict | None = None):
        super().__init__(msg)
        self.nodes = nodes
        self.partial = partial or {}
