"""Fixed-block evaluation engine for sums over the rotation orbit {r omega}.

Angles are exact P-bit integers a_r = (r*W + alpha) mod 2^P, advanced by a
single big-integer add per term, so there is no drift to re-anchor.  Each
angle is folded into (0, 1/2] by exact integer symmetry before rounding to
float64; because the fold preserves all P bits, the float conversion keeps
full *relative* precision even for the closest approaches to 0.

Work is cut into fixed blocks of BLOCK terms.  Blocks are pure functions of
their start index, so they can be evaluated by any number of workers; the
merge is math.fsum over the per-block (sum, compensation) pairs in index
order, which makes every result bit-identical for any worker count.

Per-term rigorous error bounds are accumulated alongside every sum.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Sequence

from .errors import PrecisionExhausted

BLOCK = 1 << 16

_EPS = 2.0**-53


def _fold(a: int, half: int, one: int) -> int:
    """Distance of a/2^P from the nearest integer, in mantissa units."""
    return a if a <= half else one - a


def log2sin_block(
    a0: int,
    w: int,
    P: int,
    count: int,
    ang_err: float,
    emit_at: Sequence[int] = (),
) -> tuple[float, float, float, list[tuple[int, float, float]]]:
    """Sum log|2 sin(pi a_i)| for a_i = (a0 + i*w)/2^P, i = 1..count.

    Returns (sum, compensation, err_bound, snapshots) where snapshots holds
    (i, sum, compensation) at each index in emit_at (ascending).
    ``ang_err`` is the caller's absolute bound on the angle error of every
    a_i; it enters the error bound through the cot-conditioned term.
    """
    one = 1 << P
    mask = one - 1
    half = one >> 1
    p2 = 2.0 ** (-P)
    sin = math.sin
    log = math.log
    pi = math.pi
    s_acc = 0.0
    comp = 0.0
    err = 0.0
    snaps: list[tuple[int, float, float]] = []
    emit_iter = iter(emit_at)
    next_emit = next(emit_iter, 0)
    a = a0 % one
    for i in range(1, count + 1):
        a = (a + w) & mask
        u = a if a <= half else one - a
        if u == 0:
            raise PrecisionExhausted("rotation angle indistinguishable from an integer")
        x = float(u) * p2
        sn = sin(pi * x)
        term = log(sn + sn)
        # Per-term budget: the folded conversion keeps x to relative 2^-53
        # and |arg cot arg| <= 1 on (0, pi/2], so the sine keeps ~4.5 eps
        # relative accuracy regardless of how small x is; the log adds up
        # to an ulp of its own magnitude.  ang_err covers the gap between
        # the integer angle and the true orbit point, cot-conditioned.
        err += _EPS * (4.5 + 2.0 * abs(term)) + ang_err / x
        t = s_acc + term
        if abs(s_acc) >= abs(term):
            comp += (s_acc - t) + term
        else:
            comp += (term - t) + s_acc
        s_acc = t
        if i == next_emit:
            snaps.append((i, s_acc, comp))
            next_emit = next(emit_iter, 0)
    return s_acc, comp, err, snaps


def cot_block(
    a0: int,
    w: int,
    P: int,
    count: int,
    ang_err: float,
    emit_at: Sequence[int] = (),
    square: bool = False,
) -> tuple[float, float, float, int, list[tuple[int, float, float]]]:
    """Sum cot(pi {a_i}) (or cot^2 with square=True) over i = 1..count.

    Also returns the minimum folded distance seen (in mantissa units) so
    callers can assert the three-distance precision guard at runtime.
    """
    one = 1 << P
    mask = one - 1
    half = one >> 1
    p2 = 2.0 ** (-P)
    sin = math.sin
    cos = math.cos
    pi = math.pi
    s_acc = 0.0
    comp = 0.0
    err = 0.0
    min_u = one
    snaps: list[tuple[int, float, float]] = []
    emit_iter = iter(emit_at)
    next_emit = next(emit_iter, 0)
    a = a0 % one
    for i in range(1, count + 1):
        a = (a + w) & mask
        if a <= half:
            u = a
            sgn = 1.0
        else:
            u = one - a
            sgn = -1.0
        if u == 0:
            raise PrecisionExhausted("rotation angle indistinguishable from an integer")
        if u < min_u:
            min_u = u
        x = float(u) * p2
        arg = pi * x
        c = cos(arg) / sin(arg)
        # arg (1 + cot^2 arg) <= pi/2 + |cot arg| on (0, pi/2], so the
        # relative-accurate angle keeps the cot error at O(eps |cot|).
        if square:
            term = c * c
            err += _EPS * (6.0 * term + 8.0 * abs(c) + 4.0) + ang_err * 2.0 * pi * (
                c * c + abs(c)
            )
        else:
            term = sgn * c
            err += _EPS * (8.0 * abs(c) + 4.0) + ang_err * pi * (1.0 + c * c)
        t = s_acc + term
        if abs(s_acc) >= abs(term):
            comp += (s_acc - t) + term
        else:
            comp += (term - t) + s_acc
        s_acc = t
        if i == next_emit:
            snaps.append((i, s_acc, comp))
            next_emit = next(emit_iter, 0)
    return s_acc, comp, err, min_u, snaps


def map_blocks(fn, jobs: Iterable[tuple], workers: int = 1) -> list:
    """Evaluate fn(*job) for each job, in order, optionally on a thread pool.

    Results always come back in job order, so the downstream fsum merge is
    independent of the worker count.
    """
    jobs = list(jobs)
    if workers <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))


def merge_partials(parts: Sequence[tuple[float, float]]) -> float:
    """Exact merge of (sum, compensation) pairs in fixed order."""
    flat: list[float] = []
    for s, c in parts:
        flat.append(s)
        flat.append(c)
    return math.fsum(flat)


def block_spans(count: int) -> list[tuple[int, int]]:
    """Fixed partition of 1..count into (start, length) spans of BLOCK terms."""
    spans = []
    start = 0
    while start < count:
        spans.append((start, min(BLOCK, count - start)))
        start += BLOCK
    return spans
