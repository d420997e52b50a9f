"""Generators for the step-function test families.

All families are finitely supported step functions, generated exactly:

* reciprocal-valued chains: value 1/a_i on [a_{i-1}, a_i), already
  non-increasing (`t1`);
* their images under F^-1 applied to the values (`tF`), whose alternative
  form reparameterizes the breakpoints instead (both forms are checked
  against each other in tests);
* power-of-4 chains with values 2^-k (`tprime`) and the harmonic-weighted
  family `f_N` whose squared 2-norm is 4 + 3 H_N exactly;
* the two adversarial families used by the dilatory/upper-growth
  characterizations (`lemma522`, `lemma524`);
* seeded random families (log-uniform breakpoints: every lattice phenomenon
  here lives on a multiplicative scale).

Seeded generators are deterministic per (seed, index), so a family of size
1024 extends the size-512 family with the same seed element-for-element.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .phifn import PhiExpr, inverse_eval
from .stepfn import StepFn


class FamilyError(ValueError):
    pass


def t1(breaks: list[float]) -> StepFn:
    """Value 1/a_i on [a_{i-1}, a_i) for 0 < a_1 < ... < a_n."""
    prev = 0.0
    for a in breaks:
        if not a > prev:
            raise FamilyError("breaks must be strictly increasing and positive")
        prev = a
    return StepFn.from_breakpoints(list(breaks), [1.0 / a for a in breaks])


def tF(F: PhiExpr, breaks: list[float]) -> StepFn:
    """F^-1 applied to the values of t1(breaks)."""
    base = t1(breaks)
    return StepFn.from_breakpoints(
        list(base.breakpoints), [inverse_eval(F, v) for v in base.values]
    )


def tF_alt(F: PhiExpr, breaks: list[float]) -> StepFn:
    """The same family element in its reparameterized form: value 1/c_i with
    the breakpoints pushed through the reflection of F."""
    from .phifn import eval_phi, tilde

    tf = tilde(F)
    cs = [inverse_eval(tf, a) for a in breaks]
    return StepFn.from_breakpoints(
        [eval_phi(tf, c) for c in cs], [1.0 / c for c in cs]
    )


def tprime(k_list: list[int]) -> StepFn:
    """Value 2^-k_i on [4^(k_{i-1}), 4^(k_i)), first piece from 0."""
    if not k_list:
        raise FamilyError("k_list must be nonempty")
    if any(b <= a for a, b in zip(k_list, k_list[1:])):
        raise FamilyError("k_list must be strictly increasing")
    return StepFn.from_breakpoints(
        [4.0**k for k in k_list], [2.0**-k for k in k_list]
    )


def f_N(N: int) -> StepFn:
    """1 on [0,4), k^(-1/2) 2^-k on [4^k, 4^(k+1)) for 1 <= k <= N."""
    if N < 1:
        raise FamilyError("N must be >= 1")
    breaks = [4.0] + [4.0 ** (k + 1) for k in range(1, N + 1)]
    values = [1.0] + [k**-0.5 * 2.0**-k for k in range(1, N + 1)]
    return StepFn.from_breakpoints(breaks, values)


def f_N_l2_squared(N: int) -> float:
    """Closed form 4 + 3 H_N for the squared 2-norm of f_N."""
    return 4.0 + 3.0 * math.fsum(1.0 / k for k in range(1, N + 1))


def lemma522(a: float, b: float) -> StepFn:
    """1/a on [0,a), 1/b on [a,b) for b > a > 0."""
    if not (0 < a < b):
        raise FamilyError("need b > a > 0")
    return StepFn.from_breakpoints([a, b], [1.0 / a, 1.0 / b])


def lemma524(d: float, k_list: list[int]) -> StepFn:
    """d^-k_i on [d^(k_{i-1}), d^(k_i)), first piece from 0, for d > 1."""
    if not d > 1:
        raise FamilyError("need d > 1")
    if not k_list or any(y <= x for x, y in zip(k_list, k_list[1:])):
        raise FamilyError("k_list must be nonempty and strictly increasing")
    return StepFn.from_breakpoints(
        [float(d) ** k for k in k_list], [float(d) ** -k for k in k_list]
    )


# ---------------------------------------------------------------------------
# Seeded random families
# ---------------------------------------------------------------------------


def _rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64([seed, index]))


def random_t1(
    seed: int, size: int, scale_range: tuple[float, float] = (1e-3, 1e6)
) -> StepFn:
    """Deterministic t1 element with log-uniform breaks in scale_range."""
    if size < 1:
        raise FamilyError("size must be >= 1")
    lo, hi = scale_range
    g = _rng(seed, 0)
    breaks = np.exp(g.uniform(math.log(lo), math.log(hi), size))
    breaks = np.unique(breaks)
    return t1([float(x) for x in breaks])


def random_t1_family(
    seed: int,
    count: int,
    max_size: int = 24,
    scale_range: tuple[float, float] = (1e-3, 1e6),
) -> Iterator[StepFn]:
    lo, hi = scale_range
    for i in range(count):
        g = _rng(seed, i + 1)
        size = int(g.integers(1, max_size + 1))
        breaks = np.unique(np.exp(g.uniform(math.log(lo), math.log(hi), size)))
        yield t1([float(x) for x in breaks])


def random_tF_family(
    F: PhiExpr,
    seed: int,
    count: int,
    max_size: int = 24,
    scale_range: tuple[float, float] = (1e-3, 1e6),
) -> Iterator[StepFn]:
    for base in random_t1_family(seed, count, max_size, scale_range):
        yield StepFn.from_breakpoints(
            list(base.breakpoints), [inverse_eval(F, v) for v in base.values]
        )


def random_step_family(
    seed: int,
    count: int,
    max_size: int = 24,
    scale_range: tuple[float, float] = (1e-3, 1e6),
    value_range: tuple[float, float] = (1e-3, 1e3),
) -> Iterator[StepFn]:
    """General random step functions: log-uniform breaks, log-uniform values
    in arbitrary order."""
    blo, bhi = scale_range
    vlo, vhi = value_range
    for i in range(count):
        g = _rng(seed, i + 1)
        size = int(g.integers(1, max_size + 1))
        breaks = np.unique(np.exp(g.uniform(math.log(blo), math.log(bhi), size)))
        values = np.exp(g.uniform(math.log(vlo), math.log(vhi), len(breaks)))
        yield StepFn.from_breakpoints(
            [float(x) for x in breaks], [float(v) for v in values]
        )


def truncation_family(F: PhiExpr, half_width: int) -> StepFn:
    """The widening-window member of the F-chain family: geometric breaks
    4^j for j in [-half_width, half_width].  Its values step-snap 1/F~^-1,
    which is the extremal profile of the weak unit ball."""
    if half_width < 1:
        raise FamilyError("half_width must be >= 1")
    breaks = [4.0**j for j in range(-half_width, half_width + 1)]
    return tF(F, breaks)


@dataclass(frozen=True)
class FamilySpec:
    """Replayable description of a family member or a seeded family."""

    kind: str
    params: dict

    def to_json_dict(self) -> dict:
        return {"kind": self.kind, "params": self.params}


def generate(spec: FamilySpec, catalog: dict[str, PhiExpr] | None = None) -> StepFn:
    """Materialize a single family member from its replayable spec."""
    from .phifn import parse_phi

    k = spec.kind
    p = spec.params
    if k == "t1":
        return t1(p["breaks"])
    if k == "tF":
        return tF(parse_phi(p["F"]), p["breaks"])
    if k == "tprime":
        return tprime(p["k_list"])
    if k == "f_N":
        return f_N(p["N"])
    if k == "lemma522":
        return lemma522(p["a"], p["b"])
    if k == "lemma524":
        return lemma524(p["d"], p["k_list"])
    if k == "random-t1":
        return random_t1(p["seed"], p["size"], tuple(p.get("scale_range", (1e-3, 1e6))))
    if k == "random-t1-member":
        fam = random_t1_family(p["seed"], p["index"] + 1, p.get("max_size", 24))
        return list(fam)[p["index"]]
    if k == "random-tF-member":
        fam = random_tF_family(
            parse_phi(p["F"]), p["seed"], p["index"] + 1, p.get("max_size", 24)
        )
        return list(fam)[p["index"]]
    if k == "random-step-member":
        fam = random_step_family(p["seed"], p["index"] + 1, p.get("max_size", 24))
        return list(fam)[p["index"]]
    if k == "truncation":
        return truncation_family(parse_phi(p["F"]), p["half_width"])
    raise FamilyError(f"unknown family kind {k!r}")
