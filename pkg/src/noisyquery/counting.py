"""Counting ones in a noisy bit vector.

Three procedures over a :class:`~noisyquery.oracles.BitOracle`:

* ``threshold_count``: decide whether at least k ones are present, via
  one asymmetric bit check per index with early exit at k hits.
* ``counting_one_sided``: exact count. Every index runs the same
  up/down walk, always advancing the currently most-promising index;
  an index is counted once its walk clears a retire barrier, and the
  run ends when even the best remaining walk is hopeless for the
  current count.
* ``counting_two_sided``: orientation wrapper that first cheaply
  estimates whether ones or zeros are the minority and counts the
  minority side, which is what makes the cost symmetric in the answer.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .oracles import ComplementBitOracle
from .streams import as_generator
from .walks import WalkPolicy, _check_delta, asymmetric_check_bit, check_bit, snapped_ceil


@dataclass(frozen=True)
class ThresholdResult:
    """min(k, true count) claim plus the number of queries spent.

    ``value == k`` means "at least k ones"; any smaller value is a
    claimed exact count.
    """

    value: int
    queries: int


@dataclass(frozen=True)
class CountResult:
    """Claimed exact count of ones plus the number of queries spent."""

    value: int
    queries: int


def threshold_count(oracle, k: int, delta: float) -> ThresholdResult:
    """Return min(k, #ones) with error probability at most ``delta``.

    Scans indices once, estimating each bit with error delta/2n on
    zeros and delta/2k on ones, and stops as soon as k ones are
    confirmed.
    """
    n = oracle.n
    if not isinstance(k, int) or not 1 <= k <= n:
        raise ValueError(f"threshold k must be an integer in [1, {n}], got {k!r}")
    _check_delta(delta, "delta")
    delta0 = delta / (2.0 * n)
    delta1 = delta / (2.0 * k)
    policy = WalkPolicy.for_error_bounds(oracle.noise, delta0, delta1)
    start = oracle.ledger.total_queries
    count = 0
    for i in range(n):
        count += asymmetric_check_bit(oracle, i, delta0, delta1, policy=policy).decided_bit
        if count >= k:
            return ThresholdResult(k, oracle.ledger.total_queries - start)
    return ThresholdResult(count, oracle.ledger.total_queries - start)


def counting_one_sided(oracle, delta: float) -> CountResult:
    """Return the exact number of ones with error probability <= ``delta``.

    Cheap when ones are scarce: cost scales with log((#ones + 1)/delta)
    per index rather than log(n/delta).
    """
    _check_delta(delta, "delta")
    n = oracle.n
    if n == 0:
        return CountResult(0, 0)
    log_ratio = oracle.noise.log_ratio
    retire_at = snapped_ceil(math.log(6.0 * n / delta) / log_ratio)
    start = oracle.ledger.total_queries
    query = oracle.query
    push = heapq.heappush
    count = 0
    stop_at = snapped_ceil(math.log(6.0 * (count + 1) / delta) / log_ratio)
    walk = [0] * n
    # one live entry per active index, keyed (-walk value, index) so ties
    # resolve to the lowest index
    heap = [(0, i) for i in range(n)]
    while heap:
        neg_c, i = heap[0]
        if -neg_c <= -stop_at:
            break
        heapq.heappop(heap)
        if query(i):
            c = walk[i] + 1
            walk[i] = c
            if c >= retire_at:
                count += 1
                stop_at = snapped_ceil(math.log(6.0 * (count + 1) / delta) / log_ratio)
            else:
                push(heap, (-c, i))
        else:
            c = walk[i] - 1
            walk[i] = c
            push(heap, (-c, i))
    return CountResult(count, oracle.ledger.total_queries - start)


def counting_two_sided(
    oracle,
    delta: float,
    rng,
    *,
    presample_size: int | None = None,
    presample_error: float | None = None,
    asymptotic_presample: bool = False,
) -> CountResult:
    """Exact count whose cost depends on min(#ones, #zeros), not #ones.

    A presample of indices drawn with replacement estimates the majority
    bit; the one-sided counter then runs either directly or through a
    complemented view of the oracle. The orientation only affects cost:
    either branch returns the exact count with probability >= 1 - delta.

    ``rng`` drives the presample positions only; all noisy answers come
    from the oracle's own stream. The default presample (ceil(sqrt(n))
    checks at error 1/n^2) keeps the overhead negligible at practical
    sizes; ``asymptotic_presample`` switches to the asymptotic-analysis sizing
    of n^0.99 checks at error n^-100.
    """
    _check_delta(delta, "delta")
    n = oracle.n
    if n == 0:
        return CountResult(0, 0)
    if asymptotic_presample:
        if presample_size is None:
            presample_size = math.ceil(n**0.99)
        if presample_error is None:
            # exp(-100 ln n), floored at 1e-300 to stay a normal float;
            # for n where the floor binds, the walk barrier differs by a
            # constant and the wrapper's correctness is unaffected
            presample_error = max(math.exp(-min(100.0 * math.log(max(n, 2)), 690.0)), 1e-300)
    else:
        if presample_size is None:
            presample_size = math.ceil(math.sqrt(n))
        if presample_error is None:
            presample_error = 1.0 / max(n, 2) ** 2
    if not isinstance(presample_size, int) or presample_size < 1:
        raise ValueError(f"presample size must be a positive integer, got {presample_size!r}")
    _check_delta(presample_error, "presample_error")

    gen = as_generator(rng)
    start = oracle.ledger.total_queries
    positions = gen.integers(0, n, size=presample_size)
    ones_seen = 0
    for i in positions:
        ones_seen += check_bit(oracle, int(i), presample_error).decided_bit
    if 2 * ones_seen <= presample_size:
        value = counting_one_sided(oracle, delta).value
    else:
        value = n - counting_one_sided(ComplementBitOracle(oracle), delta).value
    return CountResult(value, oracle.ledger.total_queries - start)
