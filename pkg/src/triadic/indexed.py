"""Set of small ints with O(1) add, remove and uniform sampling by position."""

from __future__ import annotations

from typing import Iterable, Iterator


class IndexedSet:
    """Members live in a list; removal swaps the last element into the hole.

    Sampling by position (``items[rng.randrange(len(s))]``) is deterministic
    given the sequence of adds and removes, which keeps seeded runs of
    different processes comparable step for step.
    """

    __slots__ = ("items", "pos")

    def __init__(self, universe: int, members: Iterable[int] = ()):
        self.items: list[int] = []
        self.pos: list[int] = [-1] * universe
        for x in members:
            self.add(x)

    def __len__(self) -> int:
        return len(self.items)

    def __contains__(self, x: int) -> bool:
        return self.pos[x] >= 0

    def __iter__(self) -> Iterator[int]:
        return iter(self.items)

    def add(self, x: int) -> None:
        if self.pos[x] < 0:
            self.pos[x] = len(self.items)
            self.items.append(x)

    def remove(self, x: int) -> None:
        i = self.pos[x]
        if i < 0:
            return
        last = self.items.pop()
        if last != x:
            self.items[i] = last
            self.pos[last] = i
        self.pos[x] = -1

    def toggle(self, x: int) -> None:
        if self.pos[x] >= 0:
            self.remove(x)
        else:
            self.add(x)
