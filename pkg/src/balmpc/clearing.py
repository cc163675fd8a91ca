"""Quarter-hour clearing-approximation market model (the MPC benchmark).

Estimates the imbalance price from a single merit-order lookup at the
quarter-hour mean system imbalance, net of the battery action; no minute
resolution. The swept price-vs-action curve is piecewise constant, and
the dispatch optimizer consumes the lower convex envelope of the implied
cost p * price(p).
"""

import numpy as np

from .battery import Action
from .curves import ApproxPriceCurve, CostSegments, convex_cost_envelope
from .market_sim import LadderExhaustedError, LadderSet, marginal_price


def approx_price(ladders: LadderSet, mean_si_mw: float, action: Action) -> float:
    """Clearing-approximation price for one quarter hour and action."""
    return marginal_price(
        ladders, mean_si_mw - action.charge_mw + action.discharge_mw
    )


def approx_price_curve(ladders: LadderSet, mean_si_mw: float, direction: int,
                       p_max_mw: float) -> ApproxPriceCurve:
    """Sweep the action over [0, p_max] at fixed mean SI.

    Breakpoints sit at the merged cumulative-volume boundaries shifted by
    the mean SI (plus the net-zero crossing); the price is constant in
    between.
    """
    if direction not in (1, -1):
        raise ValueError("direction must be +1 (charge) or -1 (discharge)")
    m = ladders.merged
    worst = abs(mean_si_mw) + p_max_mw
    if worst > ladders.up_depth_mw():
        raise LadderExhaustedError("up", worst, ladders.up_depth_mw(),
                                   float(m["up_price"][-1]))
    if worst > ladders.down_depth_mw():
        raise LadderExhaustedError("down", worst, ladders.down_depth_mw(),
                                   float(m["dn_price"][-1]))
    if direction == 1:
        cand = np.concatenate((
            [mean_si_mw], mean_si_mw + m["up_cum"], mean_si_mw - m["dn_cum"]
        ))
    else:
        cand = np.concatenate((
            [-mean_si_mw], m["dn_cum"] - mean_si_mw, -mean_si_mw - m["up_cum"]
        ))
    bps = np.unique(cand[(cand > 0.0) & (cand < p_max_mw)])
    curve = ApproxPriceCurve(
        direction=direction, mean_si_mw=mean_si_mw, p_max_mw=p_max_mw,
        up_cum=m["up_cum"], up_price=m["up_price"],
        dn_cum=m["dn_cum"], dn_price=m["dn_price"], mid_price=m["mid_price"],
        breakpoints_mw=bps, segment_prices=np.empty(0),
    )
    edges = np.concatenate(([0.0], bps, [p_max_mw]))
    mids = 0.5 * (edges[:-1] + edges[1:])
    object.__setattr__(curve, "segment_prices", curve.evaluate(mids))
    return curve


def approx_cost_segments(ladders: LadderSet, mean_si_mw: float, direction: int,
                         p_max_mw: float) -> CostSegments:
    """Convexified dispatch cost for the benchmark MPC, one direction.

    Charging pays the price, discharging earns it, so the discharge-side
    cost enters with the price negated.
    """
    curve = approx_price_curve(ladders, mean_si_mw, direction, p_max_mw)
    return convex_cost_envelope(curve, p_max_mw, price_sign=float(direction))
