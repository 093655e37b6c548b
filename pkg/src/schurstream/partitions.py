"""Young labels and Young's lattice combinatorics.

Everything in this module is exact integer/rational arithmetic; no floats.
Partitions are stored padded to exactly ``d`` parts so that row indices
``j in {0, ..., d-1}`` are always addressable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterator


class InvalidPartitionError(ValueError):
    """Raised when a box addition would break the non-increasing property."""


@dataclass(frozen=True, order=True)
class Partition:
    """A partition of n into at most d parts, padded with trailing zeros."""

    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if len(parts) < 2:
            raise ValueError(f"need at least 2 rows, got {parts}")
        if any(p < 0 for p in parts):
            raise ValueError(f"negative row length in {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"rows must be non-increasing: {parts}")

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def d(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        return ",".join(str(p) for p in self.parts)

    @classmethod
    def from_string(cls, s: str) -> "Partition":
        return cls(tuple(int(t) for t in s.split(",")))

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]


def add_box(lam: Partition, j: int) -> Partition:
    """Return lam + e_j, raising InvalidPartitionError when the result
    would not be non-increasing (e.g. (1,1) + e_1)."""
    if not 0 <= j < lam.d:
        raise InvalidPartitionError(f"row index {j} out of range for d={lam.d}")
    if j >= 1 and lam.parts[j - 1] == lam.parts[j]:
        raise InvalidPartitionError(f"{lam} + e_{j} is not a valid partition")
    parts = list(lam.parts)
    parts[j] += 1
    return Partition(tuple(parts))


def valid_rows(lam: Partition) -> list[int]:
    """Row indices j for which lam + e_j is a valid partition, ascending."""
    return [j for j in range(lam.d)
            if j == 0 or lam.parts[j - 1] > lam.parts[j]]


def one_box(d: int) -> Partition:
    """The partition (1, 0, ..., 0) every lattice path starts from."""
    return Partition((1,) + (0,) * (d - 1))


@dataclass(frozen=True)
class LatticePath:
    """A path in Young's lattice from (1, 0, ...) encoded by its steps."""

    steps: tuple[int, ...]

    def __str__(self) -> str:
        return ",".join(str(s) for s in self.steps)

    @classmethod
    def from_string(cls, s: str) -> "LatticePath":
        if not s:
            return cls(())
        return cls(tuple(int(t) for t in s.split(",")))

    def partitions(self, d: int) -> list[Partition]:
        """The induced sequence lam^1 = (1,0,...), ..., lam^n."""
        seq = [one_box(d)]
        for j in self.steps:
            seq.append(add_box(seq[-1], j))
        return seq

    def endpoint(self, d: int) -> Partition:
        return self.partitions(d)[-1]


def _hooks(lam: Partition) -> Iterator[int]:
    parts = [p for p in lam.parts if p > 0]
    ncols = parts[0] if parts else 0
    col_heights = [sum(1 for p in parts if p > c) for c in range(ncols)]
    for r, row_len in enumerate(parts):
        for c in range(row_len):
            yield (row_len - c - 1) + (col_heights[c] - r - 1) + 1


def dim_symmetric(lam: Partition) -> int:
    """dim P_lam by the hook length formula, exact."""
    if lam.n < 1:
        raise ValueError("need at least one box")
    num = factorial(lam.n)
    den = 1
    for h in _hooks(lam):
        den *= h
    q, rem = divmod(num, den)
    if rem:
        raise ArithmeticError("hook product does not divide n!")
    return q


def dim_unitary(lam: Partition, d: int | None = None) -> int:
    """dim Q^d_lam by the hook-content product formula, exact."""
    if d is None:
        d = lam.d
    if d != lam.d:
        raise ValueError(f"partition has {lam.d} rows, expected {d}")
    num = 1
    den = 1
    for i in range(d):
        for j in range(i + 1, d):
            num *= lam.parts[i] - lam.parts[j] + j - i
            den *= j - i
    q, rem = divmod(num, den)
    if rem:
        raise ArithmeticError("hook-content product is not integral")
    return q


def partitions_of(n: int, d: int) -> list[Partition]:
    """All partitions of n with at most d parts, descending lex order."""
    out: list[tuple[int, ...]] = []

    def rec(remaining: int, maxpart: int, prefix: tuple[int, ...]):
        if len(prefix) == d:
            if remaining == 0:
                out.append(prefix)
            return
        lo = -(-remaining // (d - len(prefix)))  # ceil: keep non-increasing
        for p in range(min(maxpart, remaining), lo - 1, -1):
            rec(remaining - p, p, prefix + (p,))

    rec(n, n, ())
    return [Partition(p) for p in out]


def enumerate_paths(lam: Partition) -> list[LatticePath]:
    """All lattice paths from (1,0,...) to lam, lexicographic in their
    step sequences (j ascending at each level)."""
    if lam.n < 1:
        raise ValueError("need at least one box")
    d = lam.d
    target = lam.parts
    out: list[LatticePath] = []

    def rec(cur: list[int], steps: list[int]):
        if len(steps) == lam.n - 1:
            out.append(LatticePath(tuple(steps)))
            return
        for j in range(d):
            if j >= 1 and cur[j - 1] == cur[j]:
                continue
            if cur[j] + 1 > target[j]:
                continue
            cur[j] += 1
            steps.append(j)
            rec(cur, steps)
            steps.pop()
            cur[j] -= 1

    rec([1] + [0] * (d - 1), [])
    return out


@lru_cache(maxsize=None)
def _path_index_map(lam: Partition) -> dict[tuple[int, ...], int]:
    return {p.steps: i for i, p in enumerate(enumerate_paths(lam))}


def path_index(lam: Partition, path: LatticePath) -> int:
    """Canonical multiplicity index p_lam of a path ending at lam."""
    idx = _path_index_map(lam).get(path.steps)
    if idx is None:
        raise ValueError(f"path {path} does not end at {lam}")
    return idx


def schur_weyl_weight(lam: Partition, d: int | None = None) -> Fraction:
    """Probability of lam under the maximally mixed n-qudit state:
    dim P_lam * dim Q^d_lam / d^n, exact."""
    if d is None:
        d = lam.d
    return Fraction(dim_symmetric(lam) * dim_unitary(lam, d), d ** lam.n)
