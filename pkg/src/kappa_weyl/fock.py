"""Truncated occupation-number bases for d bosonic modes.

States are labelled by occupation tuples (n_1, ..., n_d).  The truncation
keeps every state whose total sum(n) is at most ``n_max``, so each grade
(set of states with a fixed total) is either fully present or fully absent.
Grade-complete truncation matters because every operator built on this
basis shifts or preserves the total, and the Hamiltonian is grade-diagonal.

The canonical ordering is graded lexicographic: ascending total first,
ascending occupation tuple within a grade.  A grade of total n holds
C(n + d - 1, n) states and the whole truncated basis C(n_max + d, d).
"""

import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from functools import cached_property

from .errors import CapacityError, DomainError

MultiIndex = tuple[int, ...]
"""Occupation tuple (n_1, ..., n_d); entry i is the quanta in mode i."""

DEFAULT_STATE_CAP = 1_000_000


def degeneracy(d: int, n: int) -> int:
    """Number of d-mode occupation tuples with total quanta n: C(n+d-1, n)."""
    if d < 1:
        raise DomainError(f"mode count must be >= 1, got {d}")
    if n < 0:
        raise DomainError(f"total quanta must be >= 0, got {n}")
    return math.comb(n + d - 1, n)


def _compositions(n: int, d: int) -> Iterator[MultiIndex]:
    # weak compositions of n into d parts, lexicographically ascending
    if d == 1:
        yield (n,)
        return
    for head in range(n + 1):
        for tail in _compositions(n - head, d - 1):
            yield (head, *tail)


@dataclass(frozen=True)
class FockBasis:
    """An enumerated, indexed truncation of the d-mode occupation basis.

    ``states`` maps ordinals to occupation tuples and ``index_of`` inverts
    it.  Instances produced by :func:`enumerate_basis` are in graded
    lexicographic order; operator builders and projectors only rely on the
    ordinal <-> state bijection, never on the ordering itself.
    """

    d: int
    n_max: int
    states: tuple[MultiIndex, ...]
    index_of: dict[MultiIndex, int] = field(repr=False)

    def __post_init__(self):
        if self.d < 1:
            raise DomainError(f"mode count must be >= 1, got {self.d}")
        if self.n_max < 0:
            raise DomainError(f"truncation cutoff must be >= 0, got {self.n_max}")
        if len(self.index_of) != len(self.states):
            raise DomainError("duplicate states in basis")
        for ordinal, state in enumerate(self.states):
            if len(state) != self.d or any(x < 0 for x in state):
                raise DomainError(f"invalid occupation tuple {state}")
            if sum(state) > self.n_max:
                raise DomainError(f"state {state} exceeds the truncation n_max={self.n_max}")
            if self.index_of.get(state) != ordinal:
                raise DomainError("index_of is inconsistent with the state list")

    @cached_property
    def totals(self) -> tuple[int, ...]:
        """Total quanta of each state, by ordinal."""
        return tuple(sum(s) for s in self.states)

    @property
    def size(self) -> int:
        return len(self.states)

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self) -> Iterator[MultiIndex]:
        return iter(self.states)

    def rank(self, m: Iterable[int]) -> int:
        """Ordinal of the state ``m``; raises DomainError outside the truncation."""
        key = tuple(m)
        ordinal = self.index_of.get(key)
        if ordinal is None:
            raise DomainError(
                f"state {key} is not in the truncated basis (d={self.d}, n_max={self.n_max})"
            )
        return ordinal

    def unrank(self, ordinal: int) -> MultiIndex:
        """State at position ``ordinal``; inverse of :meth:`rank`."""
        if not 0 <= ordinal < len(self.states):
            raise DomainError(f"ordinal {ordinal} out of range [0, {len(self.states)})")
        return self.states[ordinal]


def enumerate_basis(d: int, n_max: int, max_states: int | None = DEFAULT_STATE_CAP) -> FockBasis:
    """Enumerate all d-mode occupation tuples with total <= n_max.

    The result is in graded lexicographic order.  ``max_states`` bounds the
    basis size up front (pass None to disable the cap).
    """
    if d < 1:
        raise DomainError(f"mode count must be >= 1, got {d}")
    if n_max < 0:
        raise DomainError(f"truncation cutoff must be >= 0, got {n_max}")
    size = math.comb(n_max + d, d)
    if max_states is not None and size > max_states:
        raise CapacityError(
            f"basis for d={d}, n_max={n_max} holds {size} states, "
            f"above the cap of {max_states}"
        )
    states = tuple(s for n in range(n_max + 1) for s in _compositions(n, d))
    index_of = {s: i for i, s in enumerate(states)}
    return FockBasis(d=d, n_max=n_max, states=states, index_of=index_of)
