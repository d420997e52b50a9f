"""Finitely supported nonnegative step functions on [0, oo), Lebesgue measure.

A StepFn holds value v_i on [b_{i-1}, b_i) with 0 = b_0 < b_1 < ... < b_n and
is 0 from b_n on.  Internally pieces are (length, value) pairs so that
rearrangement permutes the exact same length floats; reductions use
math.fsum, which returns the correctly rounded sum of the real-number total,
making equimeasurability checks exact rather than order-dependent.

Canonical form: adjacent equal values merged, trailing zero pieces dropped
(interior zero pieces are genuine and kept), so equality of step functions is
decidable exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .phifn import PhiExpr, inverse_eval


class StepFnError(ValueError):
    pass


def _canonical(pieces: Iterable[tuple[float, float]]) -> tuple[tuple[float, float], ...]:
    out: list[tuple[float, float]] = []
    for length, value in pieces:
        if not (length > 0 and math.isfinite(length)):
            raise StepFnError(f"piece length must be positive and finite, got {length}")
        if not (value >= 0 and math.isfinite(value)):
            raise StepFnError(f"piece value must be >= 0 and finite, got {value}")
        if out and out[-1][1] == value:
            out[-1] = (out[-1][0] + length, value)
        else:
            out.append((length, value))
    while out and out[-1][1] == 0.0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class StepFn:
    pieces: tuple[tuple[float, float], ...]  # (length, value), canonical

    @staticmethod
    def from_pieces(pieces: Iterable[tuple[float, float]]) -> "StepFn":
        return StepFn(_canonical(pieces))

    @staticmethod
    def from_breakpoints(breakpoints: Sequence[float], values: Sequence[float]) -> "StepFn":
        """breakpoints are b_1 < ... < b_n (b_0 = 0 implied), values v_1..v_n."""
        if len(breakpoints) != len(values):
            raise StepFnError("breakpoints and values must have equal length")
        prev = 0.0
        pieces = []
        for b, v in zip(breakpoints, values):
            if not b > prev:
                raise StepFnError(f"breakpoints must be strictly increasing, got {b} after {prev}")
            pieces.append((b - prev, v))
            prev = b
        return StepFn.from_pieces(pieces)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        out = []
        acc: list[float] = []
        for length, _ in self.pieces:
            acc.append(length)
            out.append(math.fsum(acc))
        return tuple(out)

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(v for _, v in self.pieces)

    def is_zero(self) -> bool:
        return not self.pieces

    def is_nonincreasing(self) -> bool:
        vs = self.values
        return all(a >= b for a, b in zip(vs, vs[1:]))

    def max_value(self) -> float:
        return max((v for _, v in self.pieces), default=0.0)

    def support_bound(self) -> float:
        """sup of the support (last breakpoint; 0 for the zero function)."""
        return math.fsum(length for length, _ in self.pieces)

    def value_at(self, x: float) -> float:
        if x < 0:
            raise StepFnError("domain is [0, oo)")
        acc = 0.0
        for length, value in self.pieces:
            acc += length
            if x < acc:
                return value
        return 0.0

    def to_json_dict(self) -> dict:
        return {"breakpoints": list(self.breakpoints), "values": list(self.values)}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @staticmethod
    def from_json_dict(d: dict) -> "StepFn":
        return StepFn.from_breakpoints(d["breakpoints"], d["values"])

    @staticmethod
    def from_json(s: str) -> "StepFn":
        return StepFn.from_json_dict(json.loads(s))

    def to_csv_rows(self) -> list[tuple[float, float, float]]:
        """(b_left, b_right, value) rows."""
        rows = []
        left = 0.0
        for right, value in zip(self.breakpoints, self.values):
            rows.append((left, right, value))
            left = right
        return rows


ZERO = StepFn(())


def rearrange(f: StepFn) -> StepFn:
    """Non-increasing rearrangement f*: same value multiset over the same
    total lengths, sorted by value descending.  Idempotent; equimeasurable
    with f by construction."""
    ordered = sorted(f.pieces, key=lambda p: -p[1])
    return StepFn.from_pieces(ordered)


def distribution(f: StepFn, t: float) -> float:
    """Lebesgue measure of {x : f(x) >= t} for t > 0."""
    if not t > 0:
        raise StepFnError("threshold must be positive")
    return math.fsum(length for length, value in f.pieces if value >= t)


def transform_domain(fstar: StepFn, phi: PhiExpr) -> StepFn:
    """x -> fstar(phi(x)) for strictly increasing phi with phi(0) = 0.

    Exact: only the breakpoints move, to phi^-1(b_i); the value multiset is
    preserved (zero-length images are dropped)."""
    if not fstar.is_nonincreasing():
        raise StepFnError("transform_domain expects a non-increasing input")
    prev = 0.0
    pieces = []
    for b, v in zip(fstar.breakpoints, fstar.values):
        nb = inverse_eval(phi, b)
        if nb > prev:
            pieces.append((nb - prev, v))
            prev = nb
    return StepFn.from_pieces(pieces)


def pointwise_product(f: StepFn, g: StepFn) -> StepFn:
    """Exact product on the merged breakpoint grid."""
    fb, gb = f.breakpoints, g.breakpoints
    cuts = sorted(set(fb) | set(gb))
    pieces = []
    left = 0.0
    for right in cuts:
        mid = left + (right - left) / 2
        pieces.append((right - left, f.value_at(mid) * g.value_at(mid)))
        left = right
    return StepFn.from_pieces(pieces) if pieces else ZERO


def integral(f: StepFn) -> float:
    return math.fsum(length * value for length, value in f.pieces)


def power_integral(f: StepFn, q: float) -> float:
    if not q > 0:
        raise StepFnError("exponent must be positive")
    return math.fsum(length * value**q for length, value in f.pieces if value > 0)


def scale(f: StepFn, k: float) -> StepFn:
    if k < 0:
        raise StepFnError("scale factor must be >= 0")
    if k == 0:
        return ZERO
    return StepFn.from_pieces((length, k * value) for length, value in f.pieces)
