"""Window-relative decisions of the "almost" growth properties.

A property like almost-convexity asks that for every gap m the set of lattice
sites n where G(a^(n+m)) >= a^(m-N) G(a^n) fails has cardinality below b^m.
The definitions quantify over all of Z; we certify on the finite window
n in [-R, R], m in [1, M] and report counts, never claiming the asymptotic
property.  Two consequences of finiteness are handled explicitly:

* the exception budget b^m exceeds the window capacity 2R+1 for large m, so a
  fit additionally requires every gap to keep at least one non-violating
  site (a gap where the whole window violates can never be "almost" evidence);
* all evaluation is in the log domain, so doubly exponential catalog
  functions stay determinate across the window (cells whose logs are not
  finite are reported as indeterminate, not counted as violations).

The envelope construction turns violation-count evidence into an actual
monotone function: over ascending chains 0 = n_0 < ... < n_K = n the product
of a^N min(a^(n_k - n_{k-1}), G-ratio) is minimised by shortest-path dynamic
programming in the log domain (edges all pairs in-window), with the
sup/longest-path mirror for n < 0 and for the concave side, then extended
log-linearly between lattice points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .phifn import (
    Compose,
    Inverse,
    LM,
    LogLinearTable,
    PhiExpr,
    Power,
    Product,
    eval_log,
)

_N_MAX = 32  # shift-budget search ceiling
_SEV_EPS = 1e-9  # severity slack, in units of N


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class LatticeWindow:
    a: float = 2.0
    R: int = 320
    M: int = 80

    def __post_init__(self):
        if not self.a > 1:
            raise LatticeError("lattice base must be > 1")
        if self.R < 4 * self.M:
            raise LatticeError("window needs R >= 4M")

    @property
    def capacity(self) -> int:
        return 2 * self.R + 1


DEFAULT_WINDOW = LatticeWindow()

ALMOST_KINDS = ("convex", "concave", "linear", "constant", "vertical")


def _log_lattice(G: PhiExpr, a: float, n_lo: int, n_hi: int) -> np.ndarray:
    la = math.log(a)
    return np.array([eval_log(G, n * la) for n in range(n_lo, n_hi + 1)])


def _severity(logs: np.ndarray, window: LatticeWindow, kind: str) -> np.ndarray:
    """severity[m-1, j] = least N at which site n = j - R satisfies the
    defining inequality for gap m (violation iff N < severity)."""
    la = math.log(window.a)
    cap = window.capacity
    base = logs[:cap]
    rows = []
    for m in range(1, window.M + 1):
        delta = (logs[m : m + cap] - base) / la
        if kind == "convex":
            rows.append(m - delta)
        elif kind == "concave":
            rows.append(delta - m)
        elif kind == "constant":
            rows.append(delta)
        elif kind == "linear":
            rows.append(np.maximum(m - delta, delta - m))
        else:
            raise LatticeError(f"unknown kind {kind!r}")
    return np.array(rows)


def _resolve_base(G: PhiExpr, kind: str) -> tuple[PhiExpr, str]:
    # almost vertical of G == almost constant of G^-1
    if kind == "vertical":
        return Inverse(G), "constant"
    return G, kind


@dataclass(frozen=True)
class ViolationProfile:
    kind: str
    a: float
    N: int
    R: int
    M: int
    counts: tuple[int, ...]  # per m = 1..M
    indeterminate: tuple[int, ...]
    capacity: int

    def to_csv_rows(self) -> list[tuple[int, int, int, int]]:
        """m, count, capacity, indeterminate rows."""
        return [
            (m + 1, self.counts[m], self.capacity, self.indeterminate[m])
            for m in range(self.M)
        ]


@dataclass(frozen=True)
class AlmostVerdict:
    kind: str
    holds: bool
    N: int | None = None
    b: float | None = None
    worst_m: int | None = None
    witness_n: int | None = None

    def __bool__(self) -> bool:
        return self.holds


def _counts_and_indet(sev: np.ndarray, N: int) -> tuple[np.ndarray, np.ndarray]:
    finite = np.isfinite(sev)
    viol = finite & (sev > N + _SEV_EPS)
    return viol.sum(axis=1), (~finite).sum(axis=1)


def profile(
    G: PhiExpr,
    window: LatticeWindow = DEFAULT_WINDOW,
    N: int = 0,
    kind: str = "convex",
) -> ViolationProfile:
    """Exact per-gap violation counts at shift budget N."""
    base, k = _resolve_base(G, kind)
    logs = _log_lattice(base, window.a, -window.R, window.R + window.M)
    sev = _severity(logs, window, k)
    counts, indet = _counts_and_indet(sev, N)
    return ViolationProfile(
        kind=kind,
        a=window.a,
        N=N,
        R=window.R,
        M=window.M,
        counts=tuple(int(c) for c in counts),
        indeterminate=tuple(int(c) for c in indet),
        capacity=window.capacity,
    )


def _b_grid(a: float) -> list[float]:
    lo = 0.25 * math.log(2.0)
    hi = 0.875 * math.log(a)
    if hi <= lo:
        return [math.exp(hi)]
    return [math.exp(lo + (hi - lo) * i / 7.0) for i in range(8)]


def _fit_from_severity(sev: np.ndarray, window: LatticeWindow, kind: str) -> AlmostVerdict:
    ms = np.arange(1, window.M + 1, dtype=float)
    cap = window.capacity
    finite = np.isfinite(sev)
    for N in range(_N_MAX + 1):
        viol = finite & (sev > N + _SEV_EPS)
        counts = viol.sum(axis=1)
        if counts.max(initial=0) >= cap:
            continue  # some gap violates across the whole window
        for b in _b_grid(window.a):
            if np.all(counts < np.minimum(b**ms, cap)):
                return AlmostVerdict(kind=kind, holds=True, N=N, b=b)
    # report the worst gap at the maximal budget
    viol = finite & (sev > _N_MAX + _SEV_EPS)
    counts = viol.sum(axis=1)
    bmax = _b_grid(window.a)[-1]
    excess = counts / np.minimum(bmax**ms, cap)
    worst_m = int(np.argmax(excess)) + 1
    row = sev[worst_m - 1]
    witness_j = int(np.argmax(np.where(np.isfinite(row), row, -np.inf)))
    return AlmostVerdict(
        kind=kind, holds=False, worst_m=worst_m, witness_n=witness_j - window.R
    )


def fit_almost(
    G: PhiExpr, window: LatticeWindow = DEFAULT_WINDOW, kind: str = "convex"
) -> AlmostVerdict:
    """Search N in [0, 32] and b below a^(7/8) for a certificate
    count(m) < b^m on the window; `linear` fits both sides at one (N, b),
    `vertical` delegates to the inverse's constant fit."""
    if kind not in ALMOST_KINDS:
        raise LatticeError(f"unknown kind {kind!r}")
    base, k = _resolve_base(G, kind)
    logs = _log_lattice(base, window.a, -window.R, window.R + window.M)
    sev = _severity(logs, window, k)
    return _fit_from_severity(sev, window, kind)


# ---------------------------------------------------------------------------
# Relations between two functions
# ---------------------------------------------------------------------------

RELATION_KINDS = ("less-convex", "more-convex", "equivalent")


def _relation_severity(
    G1: PhiExpr, G2: PhiExpr, window: LatticeWindow, kind: str
) -> np.ndarray:
    la = math.log(window.a)
    cap = window.capacity
    l1 = _log_lattice(G1, window.a, -window.R, window.R + window.M)
    l2 = _log_lattice(G2, window.a, -window.R, window.R + window.M)
    rows = []
    for m in range(1, window.M + 1):
        d1 = (l1[m : m + cap] - l1[:cap]) / la
        d2 = (l2[m : m + cap] - l2[:cap]) / la
        if kind == "less-convex":
            rows.append(d1 - d2)
        elif kind == "more-convex":
            rows.append(d2 - d1)
        elif kind == "equivalent":
            rows.append(np.abs(d1 - d2))
        else:
            raise LatticeError(f"unknown relation kind {kind!r}")
    return np.array(rows)


def relation_profile(
    G1: PhiExpr,
    G2: PhiExpr,
    window: LatticeWindow = DEFAULT_WINDOW,
    N: int = 0,
    kind: str = "less-convex",
) -> ViolationProfile:
    """Counts of sites where the ratio comparison
    G1(a^(n+m))/G1(a^n) <= a^N G2(a^(n+m))/G2(a^n) (or its mirror/two-sided
    form) fails."""
    sev = _relation_severity(G1, G2, window, kind)
    counts, indet = _counts_and_indet(sev, N)
    return ViolationProfile(
        kind=f"relation-{kind}",
        a=window.a,
        N=N,
        R=window.R,
        M=window.M,
        counts=tuple(int(c) for c in counts),
        indeterminate=tuple(int(c) for c in indet),
        capacity=window.capacity,
    )


def fit_relation(
    G1: PhiExpr,
    G2: PhiExpr,
    window: LatticeWindow = DEFAULT_WINDOW,
    kind: str = "less-convex",
) -> AlmostVerdict:
    sev = _relation_severity(G1, G2, window, kind)
    return _fit_from_severity(sev, window, f"relation-{kind}")


def equivalently_more_convex(
    G1: PhiExpr, G2: PhiExpr, window: LatticeWindow = DEFAULT_WINDOW
) -> AlmostVerdict:
    """The zero-exception criterion: G1-ratios dominate G2-ratios up to a^N
    at every window site for some N <= 32."""
    sev = _relation_severity(G1, G2, window, "more-convex")
    finite = np.isfinite(sev)
    worst = float(sev[finite].max()) if finite.any() else 0.0
    if worst <= _N_MAX + _SEV_EPS:
        return AlmostVerdict(
            kind="equivalently-more-convex", holds=True, N=max(0, math.ceil(worst - _SEV_EPS))
        )
    pos = np.unravel_index(
        int(np.argmax(np.where(finite, sev, -np.inf))), sev.shape
    )
    return AlmostVerdict(
        kind="equivalently-more-convex",
        holds=False,
        worst_m=int(pos[0]) + 1,
        witness_n=int(pos[1]) - window.R,
    )


# ---------------------------------------------------------------------------
# Envelopes (chain-product dynamic programming)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EnvelopeTable:
    expr: LogLinearTable
    side: str  # 'convex' | 'concave'
    a: float
    N: int
    advisory: bool  # precondition fit failed; output not backed by a fit
    cert_shift: bool  # L(a^{n+m}) <= a^{m+N} L(a^n)   (>= a^{m-N} on concave side)
    cert_ratio: bool  # L-ratio <= a^N G-ratio         (>= a^-N on concave side)
    cert_slack: float  # worst signed slack of the two certificates (log scale)


def _dp_envelope(logG: np.ndarray, la: float, N: int, side: str) -> np.ndarray:
    """log L on n = -R..R.  Convex side: min over ascending chains of
    sum [N la + min(step*la, dlogG)] for n >= 0 and the sup/max mirror with
    -N la for n < 0; concave side mirrors min<->max."""
    R = (len(logG) - 1) // 2
    mid = R  # index of n = 0
    pos = np.zeros(R + 1)
    neg = np.zeros(R + 1)  # neg[k] = value at n = -k
    nla = N * la
    if side == "convex":
        for n in range(1, R + 1):
            steps = np.arange(n, 0, -1) * la  # n - p for p = 0..n-1
            dG = logG[mid + n] - logG[mid : mid + n]
            cand = pos[:n] + nla + np.minimum(steps, dG)
            pos[n] = cand.min()
        for k in range(1, R + 1):
            steps = -np.arange(k, 0, -1) * la  # (-k) - (-p) for p = 0..k-1
            dG = logG[mid - k] - logG[mid - k + 1 : mid + 1][::-1]
            cand = neg[:k] - nla + np.maximum(steps, dG)
            neg[k] = cand.max()
    else:
        for n in range(1, R + 1):
            steps = np.arange(n, 0, -1) * la
            dG = logG[mid + n] - logG[mid : mid + n]
            cand = pos[:n] - nla + np.maximum(steps, dG)
            pos[n] = cand.max()
        for k in range(1, R + 1):
            steps = -np.arange(k, 0, -1) * la
            dG = logG[mid - k] - logG[mid - k + 1 : mid + 1][::-1]
            cand = neg[:k] + nla + np.minimum(steps, dG)
            neg[k] = cand.min()
    return np.concatenate([neg[::-1][:-1], pos])


def _certify(
    logL: np.ndarray, logG: np.ndarray, la: float, N: int, side: str
) -> tuple[bool, bool, float]:
    """Check L(a^{n+m}) <= a^{m+N} L(a^n) and dlogL <= N la + dlogG (with the
    concave mirrors) on the interior window.

    Pairs with n and n+m on the same side of 0 are held to budget N (they
    follow from chain concatenation); pairs straddling 0 are held to budget
    2N, because splicing the origin into a chain costs one extra a^N factor.
    The construction's two halves are glued at the origin, so the straddling
    bound is the provable one; at N = 0 the distinction vanishes."""
    R = (len(logL) - 1) // 2
    q = max(1, len(logL) // 4)  # outermost 25% excluded
    lo, hi = q, len(logL) - q
    shift_ok = ratio_ok = True
    slack = -math.inf
    for m in range(1, min(R, (hi - lo)) // 2):
        idx = np.arange(lo, hi - m)
        n_left = idx - R
        n_right = n_left + m
        cross = (n_left < 0) & (n_right > 0)
        nla = (N + N * cross) * la  # 2N budget across the origin
        dL = logL[lo + m : hi] - logL[lo : hi - m]
        dG = logG[lo + m : hi] - logG[lo : hi - m]
        if side == "convex":
            s1 = float((dL - (m * la + nla)).max())
            s2 = float((dL - (nla + dG)).max())
        else:
            s1 = float(((m * la - nla) - dL).max())
            s2 = float(((dG - nla) - dL).max())
        slack = max(slack, s1, s2)
        if s1 > 1e-9:
            shift_ok = False
        if s2 > 1e-9:
            ratio_ok = False
    return shift_ok, ratio_ok, slack


def _envelope(
    G: PhiExpr, a: float, N: int, window: LatticeWindow, side: str
) -> EnvelopeTable:
    la = math.log(a)
    R = window.R
    logG = _log_lattice(G, a, -R, R)
    fit = fit_almost(G, window, side)
    logL = _dp_envelope(logG, la, N, side)
    if not np.all(np.diff(logL) > 0):
        raise LatticeError("envelope is not strictly increasing on the window")
    shift_ok, ratio_ok, slack = _certify(logL, logG, la, N, side)
    expr = LogLinearTable(a, -R, tuple(float(v) for v in logL))
    return EnvelopeTable(
        expr=expr,
        side=side,
        a=a,
        N=N,
        advisory=not fit.holds,
        cert_shift=shift_ok,
        cert_ratio=ratio_ok,
        cert_slack=slack,
    )


def envelope_convex(
    G: PhiExpr, a: float, N: int, window: LatticeWindow = DEFAULT_WINDOW
) -> EnvelopeTable:
    """Chain-product lower envelope: the output L has L^-1 equivalent to a
    convex function, L-ratios bounded by a^N G-ratios, and L almost convex
    whenever G is."""
    return _envelope(G, a, N, window, "convex")


def envelope_concave(
    G: PhiExpr, a: float, N: int, window: LatticeWindow = DEFAULT_WINDOW
) -> EnvelopeTable:
    return _envelope(G, a, N, window, "concave")


def build_H_from_envelope(L: PhiExpr, side: str = "convex") -> PhiExpr:
    """Slowly-rising companion of an envelope: L^-1(t lm t) on the convex
    side, L(t) lm L(t) on the concave side."""
    t_lm = Product(Power(1.0), LM)
    if side == "convex":
        return Compose(Inverse(L), t_lm)
    if side == "concave":
        return Compose(t_lm, L)
    raise LatticeError("side must be 'convex' or 'concave'")
