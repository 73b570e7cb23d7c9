"""Independent ground-truth engines for small problems, plus Monte Carlo.

None of these touch the power recurrence: the composition sum works with
multinomial coefficients directly, the placement count enumerates every
ball-to-box map, and the simulator throws balls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from joblib import Parallel, delayed

from ._validation import ComputationRefused, as_problem, check_pos_int

MAX_COMPOSITIONS = 10**7
MAX_PLACEMENTS = 10**7
SHARD_TRIALS = 1000
_CHUNK = 1 << 16


def count_bounded_compositions(r: int, n: int, m: int) -> int:
    """Number of ``(r_1..r_n)`` with ``sum r_i = r`` and ``0 <= r_i <= m``."""
    ways = [1] + [0] * r
    for _ in range(n):
        nxt = [0] * (r + 1)
        for total, w in enumerate(ways):
            if w:
                for add in range(min(m, r - total) + 1):
                    nxt[total + add] += w
        ways = nxt
    return ways[r]


def bounded_compositions(r: int, n: int, m: int):
    """Yield compositions of ``r`` into ``n`` parts in ``[0, m]``, lexicographically."""
    parts = [0] * n

    def rec(i, left):
        if i == n - 1:
            if left <= m:
                parts[i] = left
                yield tuple(parts)
            return
        room = (n - 1 - i) * m
        for v in range(max(0, left - room), min(m, left) + 1):
            parts[i] = v
            yield from rec(i + 1, left - v)

    if n * m >= r:
        yield from rec(0, r)


def brute_force_prob(r, n=None, m=None, *, max_compositions: int = MAX_COMPOSITIONS) -> Fraction:
    """``n**-r * sum r! / (r_1! ... r_n!)`` over compositions with every part at most ``m``."""
    p = as_problem(r, n, m)
    count = count_bounded_compositions(p.r, p.n, p.m)
    if count > max_compositions:
        raise ComputationRefused(
            f"{count} compositions exceed the oracle bound {max_compositions}; use prnm_exact"
        )
    fact = [math.factorial(i) for i in range(p.r + 1)]
    total = 0
    for comp in bounded_compositions(p.r, p.n, p.m):
        denom = 1
        for part in comp:
            denom *= fact[part]
        total += fact[p.r] // denom
    return Fraction(total, p.n**p.r)


def enumerate_placements_prob(r, n=None, m=None, *, max_placements: int = MAX_PLACEMENTS) -> Fraction:
    """Fraction of all ``n**r`` ball-to-box maps whose fullest box holds at most ``m``."""
    p = as_problem(r, n, m)
    total = p.n**p.r
    if total > max_placements:
        raise ComputationRefused(
            f"{total} placements exceed the oracle bound {max_placements}; use prnm_exact"
        )
    if p.r == 0:
        return Fraction(1)
    good = 0
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        loads = np.zeros((len(idx), p.n), dtype=np.int64)
        rows = np.arange(len(idx))
        for _ in range(p.r):
            idx, box = np.divmod(idx, p.n)
            loads[rows, box] += 1
        good += int(np.count_nonzero(loads.max(axis=1) <= p.m))
    return Fraction(good, total)


@dataclass(frozen=True)
class MonteCarloResult:
    estimate: float
    trials: int
    stderr: float
    seed: int

    def to_dict(self) -> dict:
        return {
            "estimate": repr(self.estimate),
            "trials": self.trials,
            "stderr": repr(self.stderr),
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MonteCarloResult":
        return cls(float(data["estimate"]), int(data["trials"]), float(data["stderr"]), int(data["seed"]))


def _shard_successes(r: int, n: int, m: int, trials: int, seed: int, shard: int) -> int:
    # Generator.integers draws bounded ints by rejection, so there is no modulo bias
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(shard,))))
    batch = max(1, min(trials, 2_000_000 // max(r, 1)))
    good = 0
    done = 0
    while done < trials:
        b = min(batch, trials - done)
        boxes = rng.integers(0, n, size=(b, r), dtype=np.int64)
        flat = (boxes + (np.arange(b, dtype=np.int64) * n)[:, None]).ravel()
        loads = np.bincount(flat, minlength=b * n).reshape(b, n)
        good += int(np.count_nonzero(loads.max(axis=1) <= m))
        done += b
    return good


def monte_carlo(r, n=None, m=None, *, trials: int = 10_000, seed: int = 0, n_jobs=None) -> MonteCarloResult:
    """Simulate ``trials`` independent throws; deterministic for a given ``seed``.

    Trials are split into fixed shards of :data:`SHARD_TRIALS`, each with its
    own stream derived from ``(seed, shard index)``, so the estimate does not
    depend on ``n_jobs``.
    """
    p = as_problem(r, n, m)
    trials = check_pos_int(trials, "trials")
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    shards = [
        (i, min(SHARD_TRIALS, trials - i * SHARD_TRIALS))
        for i in range(math.ceil(trials / SHARD_TRIALS))
    ]
    if n_jobs is None or n_jobs == 1:
        counts = [_shard_successes(p.r, p.n, p.m, t, seed, i) for i, t in shards]
    else:
        counts = Parallel(n_jobs=n_jobs)(
            delayed(_shard_successes)(p.r, p.n, p.m, t, seed, i) for i, t in shards
        )
    est = sum(counts) / trials
    return MonteCarloResult(est, trials, math.sqrt(est * (1 - est) / trials), seed)
