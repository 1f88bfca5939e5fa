"""Integer finite domains, the variable store, and trail-based backtracking.

A domain is an anchored bitmask: bit ``i`` of ``mask`` set means the value
``anchor + i`` is present.  Python ints are immutable, so a trail snapshot
is just the old mask reference; restoring a level re-installs saved masks
in reverse order, which makes restoration exact by construction.
"""

from __future__ import annotations

import enum
import math
from typing import Iterable, Iterator, Sequence

VarId = int


class ChangeOutcome(enum.Enum):
    """Result of a domain-shrinking operation."""

    UNCHANGED = 0
    SHRUNK = 1
    WOULD_EMPTY = 2


UNCHANGED = ChangeOutcome.UNCHANGED
SHRUNK = ChangeOutcome.SHRUNK
WOULD_EMPTY = ChangeOutcome.WOULD_EMPTY

# memoized ln(k) for domain sizes; grown on demand
_LOG: list[float] = [0.0, 0.0]


def _log_of(size: int) -> float:
    if size >= len(_LOG):
        _LOG.extend(math.log(k) for k in range(len(_LOG), size + 1))
    return _LOG[size]


class FiniteDomain:
    """Non-empty set of integers with cached ``min``, ``max`` and ``size``.

    Mutation goes through the owning :class:`DomainStore` so every change
    is trailed.
    """

    __slots__ = ("anchor", "mask", "size", "min", "max")

    def __init__(self, lo: int, hi: int):
        if hi < lo:
            raise ValueError(f"empty domain [{lo}, {hi}]")
        self.anchor = lo
        self._set_mask((1 << (hi - lo + 1)) - 1)

    @classmethod
    def from_values(cls, values: Iterable[int]) -> "FiniteDomain":
        vals = sorted(set(values))
        if not vals:
            raise ValueError("empty domain")
        d = cls(vals[0], vals[0])
        mask = 0
        for v in vals:
            mask |= 1 << (v - vals[0])
        d._set_mask(mask)
        return d

    def _set_mask(self, mask: int) -> None:
        self.mask = mask
        self.size = mask.bit_count()
        self.min = self.anchor + ((mask & -mask).bit_length() - 1)
        self.max = self.anchor + (mask.bit_length() - 1)

    def __contains__(self, v: int) -> bool:
        i = v - self.anchor
        return i >= 0 and (self.mask >> i) & 1 == 1

    def contains(self, v: int) -> bool:
        return v in self

    def values(self) -> Iterator[int]:
        """Iterate present values in ascending order."""
        m = self.mask
        a = self.anchor
        while m:
            low = m & -m
            yield a + low.bit_length() - 1
            m ^= low

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(self.values())

    def is_bound(self) -> bool:
        return self.size == 1

    def value(self) -> int:
        if self.size != 1:
            raise ValueError("domain is not a singleton")
        return self.min

    def __repr__(self) -> str:
        if self.size > 12:
            return f"FiniteDomain(min={self.min}, max={self.max}, size={self.size})"
        return f"FiniteDomain({{{', '.join(map(str, self.values()))}}})"


class Trail:
    """Chronological undo log: per-level segments of (var, old mask) pairs.

    A variable is snapshotted at most once per level segment; segments are
    identified by a monotonically increasing epoch so a re-pushed level
    never aliases a popped one.
    """

    __slots__ = ("entries", "_marks", "_epochs", "_counter", "_stamps")

    def __init__(self, nvars: int):
        self.entries: list[tuple[int, int]] = []
        self._marks: list[int] = []
        self._epochs: list[int] = [0]
        self._counter = 0
        self._stamps = [-1] * nvars

    @property
    def level(self) -> int:
        return len(self._marks)

    def record(self, x: int, mask: int) -> None:
        epoch = self._epochs[-1]
        if self._stamps[x] != epoch:
            self._stamps[x] = epoch
            self.entries.append((x, mask))

    def push(self) -> int:
        self._counter += 1
        self._epochs.append(self._counter)
        self._marks.append(len(self.entries))
        return len(self._marks)

    def pop_to(self, k: int) -> list[tuple[int, int]]:
        """Drop levels ``k`` and deeper; return their entries (in push order)."""
        if not 1 <= k <= self.level:
            raise ValueError(f"cannot restore to level {k} from level {self.level}")
        target = self._marks[k - 1]
        undo = self.entries[target:]
        del self.entries[target:]
        del self._marks[k - 1:]
        del self._epochs[k:]
        return undo


class DomainStore:
    """All variable domains plus the trail; the single mutable solver state.

    ``restore_to(k)`` rewinds every domain to the exact state it had when
    ``push_level`` returned ``k`` and leaves the store at level ``k - 1``.
    Changes made at level 0 (the root) are permanent.
    """

    __slots__ = ("domains", "trail")

    def __init__(self, domains: Sequence[FiniteDomain]):
        self.domains: list[FiniteDomain] = list(domains)
        self.trail = Trail(len(self.domains))

    @classmethod
    def from_specs(cls, specs: Sequence[tuple[int, int]]) -> "DomainStore":
        """Build from (anchor, mask) pairs, e.g. a model's initial domains."""
        doms = []
        for anchor, mask in specs:
            d = FiniteDomain(anchor, anchor)
            d._set_mask(mask)
            doms.append(d)
        return cls(doms)

    def __len__(self) -> int:
        return len(self.domains)

    @property
    def level(self) -> int:
        return self.trail.level

    def domain(self, x: VarId) -> FiniteDomain:
        return self.domains[x]

    def push_level(self) -> int:
        return self.trail.push()

    def restore_to(self, k: int) -> None:
        domains = self.domains
        for x, mask in reversed(self.trail.pop_to(k)):
            domains[x]._set_mask(mask)

    def size_snapshot(self) -> list[int]:
        return [d.size for d in self.domains]

    # -- shrinking operations; WOULD_EMPTY always leaves the store untouched --

    def remove_value(self, x: VarId, v: int) -> ChangeOutcome:
        d = self.domains[x]
        i = v - d.anchor
        if i < 0 or (d.mask >> i) & 1 == 0:
            return UNCHANGED
        if d.size == 1:
            return WOULD_EMPTY
        self.trail.record(x, d.mask)
        d._set_mask(d.mask & ~(1 << i))
        return SHRUNK

    def remove_bits(self, x: VarId, bits: int) -> ChangeOutcome:
        """Remove every value whose anchored bit is set in ``bits``."""
        d = self.domains[x]
        new = d.mask & ~bits
        if new == d.mask:
            return UNCHANGED
        if new == 0:
            return WOULD_EMPTY
        self.trail.record(x, d.mask)
        d._set_mask(new)
        return SHRUNK

    def remove_values(self, x: VarId, values: Iterable[int]) -> ChangeOutcome:
        d = self.domains[x]
        bits = 0
        for v in values:
            i = v - d.anchor
            if i >= 0:
                bits |= 1 << i
        return self.remove_bits(x, bits)

    def assign(self, x: VarId, v: int) -> ChangeOutcome:
        d = self.domains[x]
        i = v - d.anchor
        if i < 0 or (d.mask >> i) & 1 == 0:
            return WOULD_EMPTY
        if d.size == 1:
            return UNCHANGED
        self.trail.record(x, d.mask)
        d._set_mask(1 << i)
        return SHRUNK

    def tighten_min(self, x: VarId, lb: int) -> ChangeOutcome:
        d = self.domains[x]
        if lb <= d.min:
            return UNCHANGED
        if lb > d.max:
            return WOULD_EMPTY
        self.trail.record(x, d.mask)
        d._set_mask(d.mask & ~((1 << (lb - d.anchor)) - 1))
        return SHRUNK

    def tighten_max(self, x: VarId, ub: int) -> ChangeOutcome:
        d = self.domains[x]
        if ub >= d.max:
            return UNCHANGED
        if ub < d.min:
            return WOULD_EMPTY
        self.trail.record(x, d.mask)
        d._set_mask(d.mask & ((1 << (ub - d.anchor + 1)) - 1))
        return SHRUNK

    # -- queries --

    def search_space_log_size(self) -> float:
        """ln of the product of all domain sizes (log form avoids overflow)."""
        total = 0.0
        for d in self.domains:
            total += _log_of(d.size)
        return total

    def all_bound(self) -> bool:
        return all(d.size == 1 for d in self.domains)

    def assignment(self) -> list[int]:
        """Values of all variables; every domain must be a singleton."""
        vals = []
        for x, d in enumerate(self.domains):
            if d.size != 1:
                raise ValueError(f"variable {x} is not bound")
            vals.append(d.min)
        return vals
