"""Seeded randomness and parallel trial execution.

Each trial draws from its own ``random.Random`` (Mersenne Twister) stream
whose seed is derived from ``(seed, trial index)`` through numpy's
``SeedSequence``. A trial's result therefore does not depend on how trials
are spread over workers.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

import numpy as np

RNG_ALGORITHM = "python-random-mt19937/seedsequence-v1"
THREADS_ENV = "TRIADIC_THREADS"

T = TypeVar("T")


def derive_seed(seed: int, *path: int) -> int:
    """128-bit child seed for the stream addressed by ``path`` under ``seed``."""
    words = np.random.SeedSequence([int(seed) & (2**64 - 1), *map(int, path)]).generate_state(4)
    return int.from_bytes(words.astype("<u4").tobytes(), "little")


def make_rng(seed: int, *path: int) -> random.Random:
    return random.Random(derive_seed(seed, *path))


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return 1


def _call(args):
    fn, seed, path, payload = args
    return fn(make_rng(seed, *path), *payload)


def run_trials(fn: Callable[..., T], trials: int, seed: int, payload: Sequence = (),
               threads: int | None = None, stream: Sequence[int] = ()) -> list[T]:
    """Call ``fn(rng_i, *payload)`` for ``i`` in ``range(trials)``.

    Trial ``i`` draws from ``make_rng(seed, *stream, i)``. ``fn`` and
    ``payload`` must be picklable when ``threads > 1``.
    """
    threads = default_threads() if threads is None else max(1, threads)
    jobs = [(fn, seed, (*stream, i), tuple(payload)) for i in range(trials)]
    if threads == 1 or trials < 2:
        return [_call(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_call, jobs, chunksize=max(1, trials // (4 * threads))))
