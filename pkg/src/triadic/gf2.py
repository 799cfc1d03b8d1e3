"""Linear systems over GF(2) with int bitsets.

A row is a pair ``(mask, rhs)`` where bit ``j`` of ``mask`` is the
coefficient of variable ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


@dataclass(frozen=True)
class Gf2System:
    n_vars: int
    rows: tuple[tuple[int, int], ...]

    @classmethod
    def from_lists(cls, n_vars: int, rows: Iterable[tuple[Iterable[int], int]]) -> "Gf2System":
        """Build from ``(variable indices, rhs)`` pairs; repeated indices cancel."""
        out = []
        for idx, rhs in rows:
            mask = 0
            for j in idx:
                mask ^= 1 << j
            out.append((mask, int(rhs) & 1))
        return cls(n_vars, tuple(out))

    def satisfied_by(self, x: Sequence[int] | int) -> bool:
        xm = x if isinstance(x, int) else vec_to_mask(x)
        return all(bin(mask & xm).count("1") % 2 == rhs for mask, rhs in self.rows)


@dataclass(frozen=True)
class Gf2Solution:
    """A particular solution plus a basis of the homogeneous solution space."""

    assignment: tuple[int, ...]
    kernel: tuple[tuple[int, ...], ...] = field(default=())

    def __bool__(self) -> bool:
        return True

    def forced(self, j: int) -> int | None:
        """Value shared by every solution at variable ``j``, or None if it varies."""
        if any(k[j] for k in self.kernel):
            return None
        return self.assignment[j]

    def has_solution_with(self, j: int, value: int) -> bool:
        f = self.forced(j)
        return f is None or f == value


@dataclass(frozen=True)
class Gf2Unsat:
    """Row indices whose sum reads ``0 = 1``."""

    certificate: tuple[int, ...]

    def __bool__(self) -> bool:
        return False


def vec_to_mask(v: Sequence[int]) -> int:
    return sum(1 << i for i, x in enumerate(v) if x)


def mask_to_vec(m: int, n: int) -> tuple[int, ...]:
    return tuple((m >> i) & 1 for i in range(n))


def solve_gf2(system: Gf2System) -> Gf2Solution | Gf2Unsat:
    """Gauss-Jordan elimination. Free variables are set to 0 in the particular solution."""
    n = system.n_vars
    # (coefficients, rhs, which original rows were combined)
    work = [[m, r, 1 << i] for i, (m, r) in enumerate(system.rows)]
    pivots: list[tuple[int, int]] = []  # (column, row index in work)
    row = 0
    for col in range(n):
        bit = 1 << col
        p = next((i for i in range(row, len(work)) if work[i][0] & bit), None)
        if p is None:
            continue
        work[row], work[p] = work[p], work[row]
        pm, pr, po = work[row]
        for i in range(len(work)):
            if i != row and work[i][0] & bit:
                work[i][0] ^= pm
                work[i][1] ^= pr
                work[i][2] ^= po
        pivots.append((col, row))
        row += 1
    for m, r, origin in work[row:]:
        if r and not m:
            return Gf2Unsat(tuple(i for i in range(len(system.rows)) if origin >> i & 1))
    x = 0
    for col, i in pivots:
        if work[i][1]:
            x |= 1 << col
    pivot_cols = {c for c, _ in pivots}
    kernel = []
    for f in range(n):
        if f in pivot_cols:
            continue
        k = 1 << f
        for col, i in pivots:
            if work[i][0] >> f & 1:
                k |= 1 << col
        kernel.append(mask_to_vec(k, n))
    return Gf2Solution(mask_to_vec(x, n), tuple(kernel))
