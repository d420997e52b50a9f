"""Expression trees for strictly increasing functions on [0, oo).

The representable functions are exactly the closed-form combinators

    pow(p)  lm  em  compose(A,B)  scalein(k,A)  scaleout(k,A)
    prod(A,B)  tilde(A)  inv(A)

plus log-linearly interpolated lattice tables.  Every expression denotes a
continuous, strictly increasing F with F(0) = 0 and F(t) -> oo, so inverses
and the reflection F~(t) = 1/F(1/t) are well defined and have symbolic rules.

`lm` and `em` are the modified logarithm/exponential:

    lm(t) = 1 + log t        (t >= 1)      em(t) = exp(t - 1)      (t >= 1)
          = 1/(1 + log(1/t)) (0 < t < 1)         = exp(1 - 1/t)    (0 < t < 1)

so lm(1) = em(1) = 1, em = lm^-1, and both are invariant under the
reflection.

Evaluation exists in two forms: plain (`eval_phi`, saturating at 1e300/1e-300
with an inspectable flag) and log-domain (`eval_log`, mapping log t to
log F(t)), which is what lattice work uses so that doubly exponential
functions stay representable across wide windows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Union

SAT_HI = 1e300
SAT_LO = 1e-300
LOG_SAT = math.log(SAT_HI)
LOG_EPS = 1e-9  # comparison slack in the log domain (ratio slack 1 + 1e-9)

_EXP_MAX = 709.0  # beyond this math.exp overflows


class PhiError(ValueError):
    """Invalid expression parameter or violated operation precondition."""


class ValidationError(PhiError):
    """Expression failed the phi-function axioms on a probe grid."""


class UnbracketableError(PhiError):
    """Numeric inversion could not bracket the target value."""


# ---------------------------------------------------------------------------
# Nodes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PhiExpr:
    """Base class; concrete nodes below."""

    def __call__(self, t: float) -> float:
        return eval_phi(self, t)


@dataclass(frozen=True)
class Power(PhiExpr):
    exponent: float

    def __post_init__(self):
        if not (self.exponent > 0 and math.isfinite(self.exponent)):
            raise PhiError("exponent must be positive")


@dataclass(frozen=True)
class Lm(PhiExpr):
    pass


@dataclass(frozen=True)
class Em(PhiExpr):
    pass


@dataclass(frozen=True)
class Compose(PhiExpr):
    outer: PhiExpr
    inner: PhiExpr


@dataclass(frozen=True)
class ScaleIn(PhiExpr):
    """t -> body(factor * t)."""

    factor: float
    body: PhiExpr

    def __post_init__(self):
        if not (self.factor > 0 and math.isfinite(self.factor)):
            raise PhiError("scale factor must be positive")


@dataclass(frozen=True)
class ScaleOut(PhiExpr):
    """t -> factor * body(t)."""

    factor: float
    body: PhiExpr

    def __post_init__(self):
        if not (self.factor > 0 and math.isfinite(self.factor)):
            raise PhiError("scale factor must be positive")


@dataclass(frozen=True)
class Product(PhiExpr):
    left: PhiExpr
    right: PhiExpr


@dataclass(frozen=True)
class Tilde(PhiExpr):
    body: PhiExpr


@dataclass(frozen=True)
class Inverse(PhiExpr):
    body: PhiExpr


@dataclass(frozen=True)
class LogLinearTable(PhiExpr):
    """Values log F(base^n) on the lattice n = n_lo .. n_lo + len - 1.

    Between lattice points the value is interpolated linearly in
    (log t, log F); beyond the ends it is extrapolated with the edge slope,
    which keeps the function strictly increasing and unbounded.
    """

    base: float
    n_lo: int
    log_values: tuple[float, ...]

    def __post_init__(self):
        if not (self.base > 1 and math.isfinite(self.base)):
            raise PhiError("lattice base must be > 1")
        if len(self.log_values) < 2:
            raise PhiError("lattice table needs at least two points")
        for a, b in zip(self.log_values, self.log_values[1:]):
            if not b > a:
                raise PhiError("lattice table values must be strictly increasing")


LM = Lm()
EM = Em()
IDENTITY = Power(1.0)


# ---------------------------------------------------------------------------
# Log-domain evaluation (log t -> log F(t))
# ---------------------------------------------------------------------------


def _lm_log(u: float) -> float:
    # log lm(e^u)
    return math.log1p(u) if u >= 0.0 else -math.log1p(-u)


def _em_log(u: float) -> float:
    # log em(e^u); e^u - 1 overflows only when u itself is enormous
    if u >= 0.0:
        return math.expm1(u) if u < _EXP_MAX else math.inf
    return -math.expm1(-u) if u > -_EXP_MAX else -math.inf


@lru_cache(maxsize=None)
def _log_fn(phi: PhiExpr) -> Callable[[float], float]:
    if isinstance(phi, Power):
        p = phi.exponent
        return lambda u: p * u
    if isinstance(phi, Lm):
        return _lm_log
    if isinstance(phi, Em):
        return _em_log
    if isinstance(phi, Compose):
        fo, fi = _log_fn(phi.outer), _log_fn(phi.inner)
        return lambda u: fo(fi(u))
    if isinstance(phi, ScaleIn):
        lk, f = math.log(phi.factor), _log_fn(phi.body)
        return lambda u: f(u + lk)
    if isinstance(phi, ScaleOut):
        lk, f = math.log(phi.factor), _log_fn(phi.body)
        return lambda u: lk + f(u)
    if isinstance(phi, Product):
        fl, fr = _log_fn(phi.left), _log_fn(phi.right)
        return lambda u: fl(u) + fr(u)
    if isinstance(phi, Tilde):
        f = _log_fn(phi.body)
        return lambda u: -f(-u)
    if isinstance(phi, Inverse):
        g = _log_inv_fn(phi.body)
        return g
    if isinstance(phi, LogLinearTable):
        return _table_log_fn(phi)
    raise PhiError(f"unknown node {type(phi).__name__}")


def _table_log_fn(tab: LogLinearTable) -> Callable[[float], float]:
    la = math.log(tab.base)
    vals = tab.log_values
    n_lo = tab.n_lo
    last = len(vals) - 1

    def f(u: float) -> float:
        x = u / la - n_lo  # fractional lattice index
        if x <= 0.0:
            slope = vals[1] - vals[0]
            return vals[0] + x * slope
        if x >= last:
            slope = vals[last] - vals[last - 1]
            return vals[last] + (x - last) * slope
        i = int(x)
        frac = x - i
        return vals[i] + frac * (vals[i + 1] - vals[i])

    return f


def _table_inv_log_fn(tab: LogLinearTable) -> Callable[[float], float]:
    la = math.log(tab.base)
    vals = tab.log_values
    n_lo = tab.n_lo
    last = len(vals) - 1

    def g(w: float) -> float:
        if w <= vals[0]:
            slope = vals[1] - vals[0]
            x = (w - vals[0]) / slope
        elif w >= vals[last]:
            slope = vals[last] - vals[last - 1]
            x = last + (w - vals[last]) / slope
        else:
            lo, hi = 0, last
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if vals[mid] <= w:
                    lo = mid
                else:
                    hi = mid
            x = lo + (w - vals[lo]) / (vals[hi] - vals[lo])
        return (x + n_lo) * la

    return g


@lru_cache(maxsize=None)
def _log_inv_fn(phi: PhiExpr) -> Callable[[float], float]:
    """log y -> log t with F(t) = y, closed-form where the node allows."""
    if isinstance(phi, Power):
        p = phi.exponent
        return lambda w: w / p
    if isinstance(phi, Lm):
        return _em_log
    if isinstance(phi, Em):
        return _lm_log
    if isinstance(phi, Compose):
        go, gi = _log_inv_fn(phi.outer), _log_inv_fn(phi.inner)
        return lambda w: gi(go(w))
    if isinstance(phi, ScaleIn):
        lk, g = math.log(phi.factor), _log_inv_fn(phi.body)
        return lambda w: g(w) - lk
    if isinstance(phi, ScaleOut):
        lk, g = math.log(phi.factor), _log_inv_fn(phi.body)
        return lambda w: g(w - lk)
    if isinstance(phi, Tilde):
        g = _log_inv_fn(phi.body)
        return lambda w: -g(-w)
    if isinstance(phi, Inverse):
        return _log_fn(phi.body)
    if isinstance(phi, LogLinearTable):
        return _table_inv_log_fn(phi)
    # Product has no node rule: bracketing bisection on the log evaluator.
    f = _log_fn(phi)
    return lambda w: _bisect_log(f, w)


def _bisect_log(f: Callable[[float], float], target: float) -> float:
    """Solve f(u) = target for increasing f by expanding bracket + bisection."""
    lo = hi = 0.0
    flo = fhi = f(0.0)
    step = 1.0
    doublings = 0
    while fhi < target:
        hi += step
        fhi = f(hi)
        step *= 2.0
        doublings += 1
        if doublings > 1024:
            raise UnbracketableError("no upper bracket after 1024 doublings")
    step = 1.0
    doublings = 0
    while flo > target:
        lo -= step
        flo = f(lo)
        step *= 2.0
        doublings += 1
        if doublings > 1024:
            raise UnbracketableError("no lower bracket after 1024 doublings")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if f(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-13 * max(1.0, abs(mid)):
            break
    return 0.5 * (lo + hi)


def eval_log(phi: PhiExpr, logt: float) -> float:
    """log F(t) given log t.  -inf maps to -inf (F(0) = 0)."""
    if logt == -math.inf:
        return -math.inf
    return _log_fn(phi)(logt)


def inverse_eval_log(phi: PhiExpr, logy: float) -> float:
    if logy == -math.inf:
        return -math.inf
    return _log_inv_fn(phi)(logy)


# ---------------------------------------------------------------------------
# Plain evaluation, saturating at SAT_HI / SAT_LO
# ---------------------------------------------------------------------------


def _clamp(x: float) -> float:
    if x != x:  # NaN from inf/inf etc.
        return SAT_HI
    if x > SAT_HI:
        return SAT_HI
    if x < SAT_LO:
        return SAT_LO
    return x


def _lm(t: float) -> float:
    return 1.0 + math.log(t) if t >= 1.0 else 1.0 / (1.0 + math.log(1.0 / t))


def _em(t: float) -> float:
    if t >= 1.0:
        return math.exp(t - 1.0) if t < _EXP_MAX else SAT_HI
    return math.exp(1.0 - 1.0 / t) if t > 1.0 / _EXP_MAX else SAT_LO


@lru_cache(maxsize=None)
def _lin_fn(phi: PhiExpr) -> Callable[[float], float]:
    if isinstance(phi, Power):
        p = phi.exponent

        def f(t: float) -> float:
            try:
                return _clamp(t**p)
            except OverflowError:
                return SAT_HI

        return f
    if isinstance(phi, Lm):
        return lambda t: _clamp(_lm(t))
    if isinstance(phi, Em):
        return lambda t: _clamp(_em(t))
    if isinstance(phi, Compose):
        fo, fi = _lin_fn(phi.outer), _lin_fn(phi.inner)
        return lambda t: fo(fi(t))
    if isinstance(phi, ScaleIn):
        k, f = phi.factor, _lin_fn(phi.body)
        return lambda t: f(_clamp(k * t))
    if isinstance(phi, ScaleOut):
        k, f = phi.factor, _lin_fn(phi.body)
        return lambda t: _clamp(k * f(t))
    if isinstance(phi, Product):
        fl, fr = _lin_fn(phi.left), _lin_fn(phi.right)
        return lambda t: _clamp(fl(t) * fr(t))
    if isinstance(phi, Tilde):
        f = _lin_fn(phi.body)
        return lambda t: _clamp(1.0 / f(_clamp(1.0 / t)))
    if isinstance(phi, Inverse):
        body = phi.body
        return lambda t: inverse_eval(body, t)
    if isinstance(phi, LogLinearTable):
        g = _table_log_fn(phi)

        def f(t: float) -> float:
            w = g(math.log(t))
            return _clamp(math.exp(w)) if w < _EXP_MAX else SAT_HI

        return f
    raise PhiError(f"unknown node {type(phi).__name__}")


def eval_phi(phi: PhiExpr, t: float) -> float:
    """F(t).  Saturates at 1e300 (and 1e-300 for t > 0); see `saturated`."""
    if t < 0 or t != t:
        raise PhiError(f"argument must be >= 0, got {t}")
    if t == 0.0:
        return 0.0
    return _lin_fn(phi)(min(t, SAT_HI))


def saturated(x: float) -> bool:
    """True when a value came out of `eval_phi` clamped at either end."""
    return x >= SAT_HI or (0.0 < x <= SAT_LO)


def inverse_eval(phi: PhiExpr, y: float) -> float:
    """t with F(t) = y, via node rules or bracketing bisection (rel 1e-13)."""
    if y < 0 or y != y:
        raise PhiError(f"argument must be >= 0, got {y}")
    if y == 0.0:
        return 0.0
    w = _log_inv_fn(phi)(math.log(y))
    return _clamp(math.exp(w)) if w < _EXP_MAX else SAT_HI


def tilde(phi: PhiExpr) -> PhiExpr:
    """The reflection F~(t) = 1/F(1/t), simplified symbolically.

    Rules: the reflection is an involution, fixes lm, em and powers,
    distributes over products and compositions, swaps the two scalings'
    factors to their reciprocals, and commutes with inversion.
    """
    if isinstance(phi, Tilde):
        return phi.body
    if isinstance(phi, (Power, Lm, Em)):
        return phi
    if isinstance(phi, Product):
        return Product(tilde(phi.left), tilde(phi.right))
    if isinstance(phi, Compose):
        return Compose(tilde(phi.outer), tilde(phi.inner))
    if isinstance(phi, ScaleIn):
        return ScaleIn(1.0 / phi.factor, tilde(phi.body))
    if isinstance(phi, ScaleOut):
        return ScaleOut(1.0 / phi.factor, tilde(phi.body))
    if isinstance(phi, Inverse):
        return Inverse(tilde(phi.body))
    if isinstance(phi, LogLinearTable):
        n_hi = phi.n_lo + len(phi.log_values) - 1
        vals = tuple(-v for v in reversed(phi.log_values))
        return LogLinearTable(phi.base, -n_hi, vals)
    return Tilde(phi)


def fundamental_inverse(phi: PhiExpr, t: float) -> float:
    """F~^-1(t): the norm of the indicator of a set of measure t in every
    F-based space."""
    return inverse_eval(tilde(phi), t)


# ---------------------------------------------------------------------------
# Probe grids and validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProbeGrid:
    """Geometric grid base**n for n in [n_lo, n_hi], the finite stand-in for
    'for all 0 <= t < oo'."""

    base: float = 2.0
    n_lo: int = -64
    n_hi: int = 64

    def __post_init__(self):
        if not self.base > 1:
            raise PhiError("grid base must be > 1")
        if not self.n_lo < self.n_hi:
            raise PhiError("grid needs n_lo < n_hi")

    def log_points(self) -> list[float]:
        la = math.log(self.base)
        return [n * la for n in range(self.n_lo, self.n_hi + 1)]

    def points(self) -> list[float]:
        return [self.base**n for n in range(self.n_lo, self.n_hi + 1)]


DEFAULT_GRID = ProbeGrid()


def validate_phi(phi: PhiExpr, grid: ProbeGrid = DEFAULT_GRID) -> None:
    """Check the axioms on the grid: F(0)=0, strict increase, growth at the
    top of the doubling grid.  Raises ValidationError with the witness."""
    if eval_phi(phi, 0.0) != 0.0:
        raise ValidationError("F(0) != 0")
    logs = [eval_log(phi, u) for u in grid.log_points()]
    for i, (a, b) in enumerate(zip(logs, logs[1:])):
        if not b > a + LOG_EPS:
            t = grid.base ** (grid.n_lo + i)
            raise ValidationError(f"not strictly increasing near t={t!r}")
    if not logs[-1] > max(0.0, logs[len(logs) // 2]):
        raise ValidationError("no growth toward the top of the grid")


# ---------------------------------------------------------------------------
# Growth verdicts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GrowthVerdict:
    """Window-relative verdict for a growth property.

    `holds` means constants were exhibited on the window; otherwise
    `witness_t` points at where the property degrades.
    """

    holds: bool
    c1: float | None = None
    c2: float | None = None
    witness_t: float | None = None

    def __bool__(self) -> bool:
        return self.holds


_TREND_FACTOR = 0.6  # outer-quarter log-ratio must keep this share of inner


def is_dilatory(phi: PhiExpr, grid: ProbeGrid = DEFAULT_GRID) -> GrowthVerdict:
    """Search c1 in {2, 4, ..., 2^10} for F(c1 t) >= c2 F(t) with c2 > 1 on
    the grid.

    A finite window cannot see a ratio tend to 1, so beyond requiring the
    grid infimum to exceed 1 + 1e-6 the minimum over the outer quarters must
    retain a fixed share of the inner minimum; decaying ratios (e.g. lm)
    fail this trend check and are reported fails-on-window.
    """
    la = math.log(grid.base)
    us = grid.log_points()
    logs = [eval_log(phi, u) for u in us]
    steps = max(1, round(math.log(2.0) / la))  # lattice steps per factor 2
    best_witness = None
    for j in range(1, 11):
        shift = j * steps
        if shift >= len(logs):
            break
        diffs = [logs[i + shift] - logs[i] for i in range(len(logs) - shift)]
        if not all(math.isfinite(d) for d in diffs):
            continue
        m_all = min(diffs)
        i_min = diffs.index(m_all)
        if m_all <= math.log(1.0 + 1e-6):
            best_witness = math.exp(us[i_min])
            continue
        q = len(diffs) // 4
        inner = min(diffs[q : len(diffs) - q])
        outer = min(min(diffs[:q]), min(diffs[len(diffs) - q :]))
        if outer >= _TREND_FACTOR * inner:
            return GrowthVerdict(True, c1=grid.base**shift, c2=math.exp(m_all))
        best_witness = math.exp(us[i_min])
    return GrowthVerdict(False, witness_t=best_witness)


def is_delta2(phi: PhiExpr, grid: ProbeGrid = DEFAULT_GRID) -> GrowthVerdict:
    """F^-1 dilatory (upper growth condition)."""
    return is_dilatory(Inverse(phi), grid)


def is_nfunction(phi: PhiExpr, grid: ProbeGrid = DEFAULT_GRID) -> GrowthVerdict:
    """F(t)/t strictly increasing on the grid, above 1 at the top and below 1
    at the bottom (window stand-ins for the limits)."""
    la = math.log(grid.base)
    ratios = []
    for n in range(grid.n_lo, grid.n_hi + 1):
        u = n * la
        ratios.append(eval_log(phi, u) - u)
    for i, (a, b) in enumerate(zip(ratios, ratios[1:])):
        if not b > a + 1e-12:
            return GrowthVerdict(False, witness_t=grid.base ** (grid.n_lo + i))
    if not (ratios[-1] > 0.0 > ratios[0]):
        return GrowthVerdict(False, witness_t=grid.points()[-1])
    return GrowthVerdict(True)


# ---------------------------------------------------------------------------
# Complementary inverse
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComplementaryInverse:
    """Evaluator for H*^-1(y) = y / H^-1(y), the representative with
    H^-1(t) H*^-1(t) = t exactly (constant 1).

    `star_log` evaluates log H*(z) by inverting this map; H* is only ever
    needed through that inverse.
    """

    h: PhiExpr

    def __call__(self, y: float) -> float:
        if y == 0.0:
            return 0.0
        return _clamp(math.exp(self.log_value(math.log(y))))

    def log_value(self, logy: float) -> float:
        return logy - inverse_eval_log(self.h, logy)

    def star_log(self, logz: float) -> float:
        return _bisect_log(self.log_value, logz)


def complementary_inverse(
    H: PhiExpr, grid: ProbeGrid = DEFAULT_GRID
) -> ComplementaryInverse:
    ci = ComplementaryInverse(H)
    prev = None
    for u in grid.log_points():
        cur = ci.log_value(u)
        if prev is not None and not cur > prev - 1e-12:
            raise PhiError(
                "y/H^-1(y) is not increasing on the probe grid; "
                "H is not an N-function in practice"
            )
        prev = cur
    return ci


# ---------------------------------------------------------------------------
# Dilatory envelope
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EnvelopeResult:
    expr: LogLinearTable
    c: float  # G(t/c) <= F(t) <= G(ct) certified on the interior lattice
    c1: float
    c2: float


def dilatory_envelope(
    F: Union[PhiExpr, Callable[[float], float]],
    c1: float,
    c2: float,
    grid: ProbeGrid = DEFAULT_GRID,
) -> EnvelopeResult:
    """Monotone envelope of a function with the lower doubling bound
    F(c1 t) >= c2 F(t).

    With b = log c2 / log c1 the envelope is the past-looking supremum

        G(t) = sup_{s >= 1} s^b F(t/s) = sup_{u <= t} (t/u)^b F(u),

    tabulated over the c1-lattice inside the grid.  It is strictly
    increasing, satisfies G(c1 t) >= c2 G(t) on the lattice by construction,
    and sandwiches F within the reported factor c.  (The forward-looking
    supremum over F(st) diverges whenever F grows faster than t^b, which
    admissible inputs generally do.)
    """
    if not (c1 > 1 and c2 > 1):
        raise PhiError("need c1 > 1 and c2 > 1")
    lc1 = math.log(c1)
    beta = math.log(c2) / lc1
    if isinstance(F, PhiExpr):
        flog = _log_fn(F)
    else:
        flog = lambda u: math.log(F(math.exp(u)))  # noqa: E731
    span = grid.n_hi * math.log(grid.base)
    n_hi = int(span / lc1)
    n_lo = -int(-grid.n_lo * math.log(grid.base) / lc1)
    ns = range(n_lo, n_hi + 1)
    logF = [flog(n * lc1) for n in ns]
    lc2 = math.log(c2)
    for i in range(len(logF) - 1):
        if logF[i + 1] - logF[i] < lc2 - LOG_EPS:
            t = math.exp((n_lo + i) * lc1)
            raise PhiError(
                f"precondition F(c1 t) >= c2 F(t) fails on the grid at t={t!r}"
            )
    # Running maximum of logF[j] - beta*j*lc1 gives the supremum in O(W).
    m = [logF[i] - beta * (n_lo + i) * lc1 for i in range(len(logF))]
    if m[0] > m[1] + LOG_EPS:
        raise PhiError(
            "window too small: the envelope supremum is still growing at the "
            f"lower edge t={math.exp(n_lo * lc1)!r}"
        )
    run = []
    best = -math.inf
    for v in m:
        best = max(best, v)
        run.append(best)
    logG = [beta * (n_lo + i) * lc1 + run[i] for i in range(len(logF))]
    expr = LogLinearTable(c1, n_lo, tuple(logG))
    # Smallest lattice power c = c1^k with G(t/c) <= F(t) on the interior.
    w = len(logF)
    q = w // 4
    interior = range(q, w - q)
    k = 0
    while True:
        ok = all(
            logG[i - k] <= logF[i] + LOG_EPS for i in interior if i - k >= 0
        )
        if ok:
            break
        k += 1
        if k > w:
            raise PhiError("no sandwich constant found on the window")
    return EnvelopeResult(expr=expr, c=c1**k if k else 1.0, c1=c1, c2=c2)


# ---------------------------------------------------------------------------
# Equivalence of functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EquivalenceVerdict:
    equivalent: bool
    c: float | None = None
    witness_t: float | None = None

    def __bool__(self) -> bool:
        return self.equivalent


def phi_equivalent(
    F1: PhiExpr, F2: PhiExpr, grid: ProbeGrid = DEFAULT_GRID
) -> EquivalenceVerdict:
    """Smallest c <= 2^64 with F1(t/c) <= F2(t) <= F1(ct) on the grid.

    At a single point t the needed constant is exactly
    exp |F1^-1(F2(t)) - t| on the log scale, so the grid constant is a max,
    not a search.  A finite window absorbs any pair of functions if c may
    grow with the window, so the verdict additionally requires the constant
    needed on the outer quarters not to exceed the inner-half constant
    (within 10%); pairs whose gap keeps widening fail with the witness point.
    """
    g1 = _log_inv_fn(F1)
    f2 = _log_fn(F2)
    us = grid.log_points()
    lcs = [abs(g1(f2(u)) - u) for u in us]
    worst = max(lcs)
    witness = math.exp(us[lcs.index(worst)])
    if worst > 64.0 * math.log(2.0):
        return EquivalenceVerdict(False, witness_t=witness)
    q = len(lcs) // 4
    inner = max(lcs[q : len(lcs) - q])
    outer = max(max(lcs[:q]), max(lcs[len(lcs) - q :]))
    if outer > inner + math.log(1.1) and outer > math.log(1.1):
        return EquivalenceVerdict(False, witness_t=witness)
    return EquivalenceVerdict(True, c=max(math.exp(worst), 1.0))


# ---------------------------------------------------------------------------
# Weight functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightFn:
    """Positive weight w with primitive W(t) = int_0^t w.

    `primitive` must satisfy the phi-function axioms.  When a monotone
    direction is declared, `inverse` (and the log-domain forms used by wide
    integration windows) must round-trip on probe grids.
    """

    pointwise: Callable[[float], float]
    primitive: PhiExpr | None
    monotone_direction: str = "none"  # 'increasing' | 'decreasing' | 'none'
    inverse: Callable[[float], float] | None = None
    log_pointwise: Callable[[float], float] | None = None
    log_inverse: Callable[[float], float] | None = None

    def __post_init__(self):
        if self.monotone_direction not in ("increasing", "decreasing", "none"):
            raise PhiError("bad monotone_direction")

    def w_log(self, u: float) -> float:
        if self.log_pointwise is not None:
            return self.log_pointwise(u)
        return math.log(self.pointwise(math.exp(u) if u < _EXP_MAX else SAT_HI))

    def winv_log(self, logy: float) -> float:
        if self.log_inverse is not None:
            return self.log_inverse(logy)
        if self.inverse is None:
            raise PhiError("weight has no inverse evaluator")
        y = math.exp(logy) if logy < _EXP_MAX else SAT_HI
        return math.log(self.inverse(y))


def weight_from_expr(expr: PhiExpr, direction: str = "increasing") -> WeightFn:
    """Strictly monotone increasing weight given directly by an expression
    (its primitive is not needed by the condition checks)."""
    return WeightFn(
        pointwise=lambda t: eval_phi(expr, t),
        primitive=None,
        monotone_direction=direction,
        inverse=lambda y: inverse_eval(expr, y),
        log_pointwise=_log_fn(expr),
        log_inverse=_log_inv_fn(expr),
    )


def constant_weight(k: float = 1.0) -> WeightFn:
    prim = Power(1.0) if k == 1.0 else ScaleOut(k, Power(1.0))
    return WeightFn(pointwise=lambda t: k, primitive=prim)


def power_weight(alpha: float, coeff: float = 1.0) -> WeightFn:
    """w(t) = coeff * t^alpha with alpha > -1, so W(t) = coeff t^(a+1)/(a+1)."""
    if alpha <= -1:
        raise PhiError("alpha must exceed -1 for an integrable weight")
    p = alpha + 1.0
    prim: PhiExpr = Power(p) if coeff == p else ScaleOut(coeff / p, Power(p))
    direction = "increasing" if alpha > 0 else ("decreasing" if alpha < 0 else "none")
    inv = None
    if alpha != 0:
        inv = lambda y: (y / coeff) ** (1.0 / alpha)  # noqa: E731
    lc = math.log(coeff)
    return WeightFn(
        pointwise=lambda t: coeff * t**alpha,
        primitive=prim,
        monotone_direction=direction,
        inverse=inv,
        log_pointwise=lambda u: lc + alpha * u,
        log_inverse=(lambda w: (w - lc) / alpha) if alpha != 0 else None,
    )


def lorentz_example_weight(increasing: bool = False) -> WeightFn:
    """The slowly varying weight t^(+-1/log(1 +- log t)), made strictly
    monotone on all of (0, oo).

    As printed the two branches give a function that increases on (0,1) and
    decreases on (1,oo); the branch for t < 1 is mirrored here so the weight
    is strictly monotone (a jump at t = 1 is harmless: the primitive stays
    continuous and the inverse is set-valued only at the jump).
    """
    sign = 1.0 if increasing else -1.0

    def logw_clean(u: float) -> float:
        if u == 0.0:
            return 0.0
        mag = abs(u) / math.log1p(abs(u))
        return sign * math.copysign(mag, u)

    def loginv(logy: float) -> float:
        # solve logw_clean(u) = logy; logw_clean is increasing iff `increasing`
        target = logy if increasing else -logy
        # target = copysign(|u|/log1p|u|, u): solve in magnitude
        if target == 0.0:
            return 0.0
        mag = abs(target)
        if mag <= 1.0:
            return math.copysign(0.0, target)  # inside the jump at t=1
        lo, hi = 0.0, 2.0
        while hi / math.log1p(hi) < mag:
            hi *= 2.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid / max(math.log1p(mid), 1e-300) < mag:
                lo = mid
            else:
                hi = mid
            if hi - lo < 1e-13 * max(1.0, hi):
                break
        return math.copysign(0.5 * (lo + hi), target)

    return WeightFn(
        pointwise=lambda t: math.exp(logw_clean(math.log(t))),
        primitive=None,
        monotone_direction="increasing" if increasing else "decreasing",
        inverse=lambda y: math.exp(loginv(math.log(y))),
        log_pointwise=logw_clean,
        log_inverse=loginv,
    )


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------


def standard_catalog() -> dict[str, PhiExpr]:
    """The eight functions the test batteries run over."""
    return {
        "t": Power(1.0),
        "t2": Power(2.0),
        "t3": Power(3.0),
        "t_lm": Product(Power(1.0), LM),
        "t2_lm": Product(Power(2.0), LM),
        "em": EM,
        "em_t2": Compose(EM, Power(2.0)),
        "sqrt": Power(0.5),
    }


# ---------------------------------------------------------------------------
# Text grammar
# ---------------------------------------------------------------------------


class ParseError(PhiError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


def parse_phi(text: str) -> PhiExpr:
    """Parse `pow(p) | lm | em | compose(A,B) | scalein(k,A) | scaleout(k,A)
    | prod(A,B) | tilde(A) | inv(A)`; whitespace-insensitive."""
    src = text
    pos = 0

    def skip_ws():
        nonlocal pos
        while pos < len(src) and src[pos].isspace():
            pos += 1

    def expect(ch: str):
        nonlocal pos
        skip_ws()
        if pos >= len(src) or src[pos] != ch:
            raise ParseError(f"expected {ch!r}", pos)
        pos += 1

    def parse_number() -> float:
        nonlocal pos
        skip_ws()
        start = pos
        while pos < len(src) and (src[pos].isdigit() or src[pos] in "+-.eE"):
            pos += 1
        try:
            return float(src[start:pos])
        except ValueError:
            raise ParseError("expected a number", start) from None

    def parse_name() -> str:
        nonlocal pos
        skip_ws()
        start = pos
        while pos < len(src) and src[pos].isalpha():
            pos += 1
        if start == pos:
            raise ParseError("expected a function name", start)
        return src[start:pos]

    def parse_expr() -> PhiExpr:
        nonlocal pos
        start = pos
        name = parse_name()
        if name == "lm":
            return LM
        if name == "em":
            return EM
        if name == "pow":
            expect("(")
            p = parse_number()
            expect(")")
            if not p > 0:
                raise ParseError("exponent must be positive", start)
            return Power(p)
        if name in ("scalein", "scaleout"):
            expect("(")
            k = parse_number()
            expect(",")
            body = parse_expr()
            expect(")")
            if not k > 0:
                raise ParseError("scale factor must be positive", start)
            return ScaleIn(k, body) if name == "scalein" else ScaleOut(k, body)
        if name in ("compose", "prod"):
            expect("(")
            a = parse_expr()
            expect(",")
            b = parse_expr()
            expect(")")
            return Compose(a, b) if name == "compose" else Product(a, b)
        if name in ("tilde", "inv"):
            expect("(")
            a = parse_expr()
            expect(")")
            return Tilde(a) if name == "tilde" else Inverse(a)
        raise ParseError(f"unknown function {name!r}", start)

    expr = parse_expr()
    skip_ws()
    if pos != len(src):
        raise ParseError("trailing input", pos)
    return expr


def format_phi(phi: PhiExpr) -> str:
    """Canonical text form; parse_phi(format_phi(e)) round-trips."""
    if isinstance(phi, Power):
        return f"pow({phi.exponent!r})"
    if isinstance(phi, Lm):
        return "lm"
    if isinstance(phi, Em):
        return "em"
    if isinstance(phi, Compose):
        return f"compose({format_phi(phi.outer)},{format_phi(phi.inner)})"
    if isinstance(phi, ScaleIn):
        return f"scalein({phi.factor!r},{format_phi(phi.body)})"
    if isinstance(phi, ScaleOut):
        return f"scaleout({phi.factor!r},{format_phi(phi.body)})"
    if isinstance(phi, Product):
        return f"prod({format_phi(phi.left)},{format_phi(phi.right)})"
    if isinstance(phi, Tilde):
        return f"tilde({format_phi(phi.body)})"
    if isinstance(phi, Inverse):
        return f"inv({format_phi(phi.body)})"
    raise PhiError(f"{type(phi).__name__} has no text form")
