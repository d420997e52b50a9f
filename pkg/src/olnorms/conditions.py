"""Integral criteria for slowly varying weights and slowly rising functions.

Three families of verdicts:

* condition (L) for a strictly monotone weight w: finiteness of
  int_0^infty dt / w^-1(c w(t)) for some constant c.  For increasing
  weights only c > 1 can converge; for decreasing weights только c < 1
  (then w^-1(c w(t)) > t), so the probe grid is inverted in that case.
* condition (J) for an N-function H: finiteness of the gauge of
  1/(H*~)^-1 in the H*-modular, with the complementary representative
  fixed at H*^-1(t) = t/H^-1(t).
* the weak-collapse criterion: finiteness of the gauge of 1/G~^-1 in the
  G-modular, which decides when the two-parameter space collapses onto the
  weak space.

"Finite gauge" is realised as: the modular integral converges and is <= 1
for some c on a doubling grid up to 2^20 (the infimum itself is not needed,
only finiteness).  Verdicts within 10% of the modular threshold are flagged
'marginal' because the complementary-representative convention can shift
borderline modulars.  All integrands are evaluated in log form so that wide
integration windows stay representable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import quad
from .lattice import DEFAULT_WINDOW, AlmostVerdict, LatticeWindow, fit_almost
from .phifn import (
    PhiExpr,
    WeightFn,
    complementary_inverse,
    eval_log,
    inverse_eval_log,
    is_nfunction,
    tilde,
    weight_from_expr,
)


class ConditionError(ValueError):
    pass


DEFAULT_C_GRID = (2.0, 4.0, 16.0, 256.0)
_GAUGE_C_MAX_EXP = 20  # doubling gauge grid 2^0 .. 2^20
_MARGINAL_BAND = 0.1


@dataclass(frozen=True)
class ConditionVerdict:
    kind: str  # 'L' | 'J' | 'weak-collapse' | 'gauge-finite'
    status: str  # 'satisfied' | 'violated-trend' | 'marginal'
    c_used: float | None
    integral: quad.QuadResult | None
    window: str

    @property
    def satisfied(self) -> bool:
        return self.status == "satisfied"

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "status": self.status,
            "c_used": self.c_used,
            "integral": self.integral.to_json_dict() if self.integral else None,
            "window": self.window,
        }


def condition_L(
    w: WeightFn,
    c_grid: tuple[float, ...] = DEFAULT_C_GRID,
    policy: quad.QuadPolicy = quad.DEFAULT_POLICY,
) -> ConditionVerdict:
    """Finiteness of int dt / w^-1(c w(t)) for some c in the grid."""
    if w.monotone_direction not in ("increasing", "decreasing"):
        raise ConditionError("condition (L) needs a strictly monotone weight")
    if w.inverse is None and w.log_inverse is None:
        raise ConditionError("condition (L) needs an inverse evaluator")
    decreasing = w.monotone_direction == "decreasing"
    last = None
    for c in c_grid:
        cc = 1.0 / c if decreasing else c
        lc = math.log(cc)

        def log_g(u: float, _lc=lc) -> float:
            return u - w.winv_log(_lc + w.w_log(u))

        res = quad.improper_integral_log(log_g, policy)
        last = (cc, res)
        if res.converged:
            return ConditionVerdict(
                kind="L",
                status="satisfied",
                c_used=cc,
                integral=res,
                window=f"u0={policy.u0} doublings<={policy.max_doublings}",
            )
    return ConditionVerdict(
        kind="L",
        status="violated-trend",
        c_used=last[0] if last else None,
        integral=last[1] if last else None,
        window=f"u0={policy.u0} doublings<={policy.max_doublings}",
    )


def _gauge_finiteness(
    kind: str,
    log_integrand_at,  # c -> (u -> log integrand)
    policy: quad.QuadPolicy,
) -> ConditionVerdict:
    """Doubling-c sweep for 'modular converges and <= 1 at some c'."""
    window = f"u0={policy.u0} doublings<={policy.max_doublings} c<=2^{_GAUGE_C_MAX_EXP}"
    best: tuple[float, quad.QuadResult] | None = None
    for k in range(_GAUGE_C_MAX_EXP + 1):
        c = 2.0**k
        res = quad.improper_integral_log(log_integrand_at(c), policy)
        if res.converged:
            if best is None or res.value < best[1].value:
                best = (c, res)
            if res.value <= 1.0 - _MARGINAL_BAND:
                return ConditionVerdict(kind, "satisfied", c, res, window)
            if res.value <= 1.0 + _MARGINAL_BAND:
                return ConditionVerdict(kind, "marginal", c, res, window)
    if best is not None:
        status = "satisfied" if best[1].value <= 1.0 - _MARGINAL_BAND else (
            "marginal" if best[1].value <= 1.0 + _MARGINAL_BAND else "violated-trend"
        )
        return ConditionVerdict(kind, status, best[0], best[1], window)
    return ConditionVerdict(kind, "violated-trend", None, None, window)


def condition_J(
    H: PhiExpr, policy: quad.QuadPolicy = quad.DEFAULT_POLICY
) -> ConditionVerdict:
    """Finiteness of the gauge of 1/(H*~)^-1 in the H*-modular.

    With the representative H*^-1(y) = y/H^-1(y) the reflected inverse obeys
    log (H*~)^-1(x) = -lci(-log x) where lci(log y) = log H*^-1(y), so the
    integrand needs only lci and its functional inverse (log H* itself)."""
    if not is_nfunction(H).holds:
        raise ConditionError("condition (J) is defined for N-functions")
    ci = complementary_inverse(H)

    def at(c: float):
        lc = math.log(c)

        def log_g(u: float) -> float:
            logarg = ci.log_value(-u) - lc
            return ci.star_log(logarg) + u

        return log_g

    return _gauge_finiteness("J", at, policy)


def weak_collapse(
    G: PhiExpr, policy: quad.QuadPolicy = quad.DEFAULT_POLICY
) -> ConditionVerdict:
    """Finiteness of the gauge of 1/G~^-1 in the G-modular."""
    tG = tilde(G)

    def at(c: float):
        lc = math.log(c)

        def log_g(u: float) -> float:
            logarg = -inverse_eval_log(tG, u) - lc
            return eval_log(G, logarg) + u

        return log_g

    return _gauge_finiteness("weak-collapse", at, policy)


def _reciprocal_tilde_gauge(
    G: PhiExpr, policy: quad.QuadPolicy
) -> ConditionVerdict:
    """Finiteness of the gauge of 1/G~ in the G^-1-modular."""

    def at(c: float):
        lc = math.log(c)

        def log_g(u: float) -> float:
            logarg = eval_log(G, -u) - lc  # log (1/G~(x)) = log G(1/x)
            return inverse_eval_log(G, logarg) + u

        return log_g

    return _gauge_finiteness("gauge-finite", at, policy)


@dataclass(frozen=True)
class ThreeWayReport:
    """Almost-constant lattice verdict, reciprocal-gauge finiteness, and
    condition (L) of the reflected function as a weight must agree."""

    function: str
    almost_constant: AlmostVerdict
    reciprocal_gauge: ConditionVerdict
    reflected_condition_L: ConditionVerdict
    agree: bool

    def to_json_dict(self) -> dict:
        return {
            "function": self.function,
            "almost_constant": self.almost_constant.holds,
            "reciprocal_gauge": self.reciprocal_gauge.to_json_dict(),
            "reflected_condition_L": self.reflected_condition_L.to_json_dict(),
            "agree": self.agree,
        }


def lemma551_consistency(
    G: PhiExpr,
    window: LatticeWindow = DEFAULT_WINDOW,
    policy: quad.QuadPolicy = quad.DEFAULT_POLICY,
    name: str = "",
) -> ThreeWayReport:
    constant = fit_almost(G, window, "constant")
    gauge = _reciprocal_tilde_gauge(G, policy)
    condL = condition_L(weight_from_expr(tilde(G), "increasing"), policy=policy)
    agree = constant.holds == gauge.satisfied == condL.satisfied
    return ThreeWayReport(
        function=name,
        almost_constant=constant,
        reciprocal_gauge=gauge,
        reflected_condition_L=condL,
        agree=agree,
    )
