"""A uniform triviality/equality service over different group backends.

Girth scans and Cayley-ball construction only ever see this seam, never
the backend.  Oracles are immutable and pure; no caching happens inside
(memoization is the caller's concern).
"""

from __future__ import annotations

from typing import Callable, Hashable, Sequence

from freelike import smallcancel
from freelike.words import Word, concat, invert

__all__ = ["GroupOracle"]


class GroupOracle:
    """Capability record: a triviality test plus an optional normal form.

    ``canonical_key`` returns a hashable normal form of the word's group
    element when the backend has one (free group: the reduced word; finite
    table: the evaluated element), else None.  Callers may use it to skip
    pairwise equality scans; correctness never depends on it.
    """

    __slots__ = ("rank", "kind", "_trivial", "_key")

    def __init__(
        self,
        rank: int,
        kind: str,
        trivial: Callable[[Word], bool],
        key: Callable[[Word], Hashable] | None = None,
    ):
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "_trivial", trivial)
        object.__setattr__(self, "_key", key)

    def __setattr__(self, name, value):
        raise AttributeError("GroupOracle is immutable")

    def __repr__(self):
        return f"<GroupOracle {self.kind}, rank={self.rank}>"

    def is_trivial(self, w: Word) -> bool:
        if w.rank != self.rank:
            raise ValueError(f"word rank {w.rank} != oracle rank {self.rank}")
        return self._trivial(w)

    def are_equal(self, u: Word, v: Word) -> bool:
        return self.is_trivial(concat(u, invert(v)))

    def canonical_key(self, w: Word) -> Hashable | None:
        if self._key is None:
            return None
        if w.rank != self.rank:
            raise ValueError(f"word rank {w.rank} != oracle rank {self.rank}")
        return self._key(w)

    # -- constructors ---------------------------------------------------------

    @classmethod
    def free(cls, rank: int) -> "GroupOracle":
        """The free group: trivial means empty after free reduction."""
        return cls(rank, "free", lambda w: not w, key=lambda w: w.data)

    @classmethod
    def small_cancellation(cls, p: smallcancel.Presentation) -> "GroupOracle":
        """Dehn-algorithm backend; requires verified C'(1/6)."""
        p.require_verified()
        return cls(
            p.rank,
            "small-cancellation",
            lambda w: smallcancel.dehn_trivial(w, p),
        )

    @classmethod
    def finite_table(cls, group, assignment: Sequence[int]) -> "GroupOracle":
        """Multiplication-table backend: alphabet letter i maps to
        ``group`` element ``assignment[i]``."""
        assignment = tuple(assignment)
        if any(not 0 <= g < group.order for g in assignment):
            raise ValueError("assignment indices out of range")
        rank = len(assignment)

        def evaluate(w: Word) -> int:
            return group.evaluate_word(w, assignment)

        return cls(
            rank,
            "finite-table",
            lambda w: evaluate(w) == group.identity,
            key=evaluate,
        )
