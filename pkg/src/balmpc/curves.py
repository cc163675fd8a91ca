"""Piecewise price and cost curves shared by the market models and the solver.

``PwlCurve`` is the continuous piecewise-linear price-vs-action curve
extracted from the network (convex, nondecreasing). ``ApproxPriceCurve``
is the swept quarter-hour clearing curve: piecewise constant with jumps
at the ladder volume boundaries shifted by the mean SI. Both reduce to
``CostSegments`` for the dispatch optimizers, via the identity

    cost(P_j + r) = cost(P_j) + d_j * r + g_j * r**2,   r in [0, W_j]

with per-segment marginal ``d_j`` nondecreasing across segments whenever
the underlying price curve is nondecreasing (so segment variables fill in
merit order automatically).
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PwlCurve:
    """Continuous piecewise-linear function on [xs[0], xs[-1]]."""

    direction: int  # +1 charge, -1 discharge
    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "xs", np.asarray(self.xs, dtype=float))
        object.__setattr__(self, "ys", np.asarray(self.ys, dtype=float))
        if len(self.xs) != len(self.ys) or len(self.xs) < 2:
            raise ValueError("need at least two aligned knots")
        if np.any(np.diff(self.xs) <= 0):
            raise ValueError("knots must be strictly increasing")

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.ys) / np.diff(self.xs)

    def evaluate(self, x) -> np.ndarray:
        return np.interp(x, self.xs, self.ys)

    def check_convex(self, tol: float = 1e-9) -> bool:
        s = self.slopes
        return bool(np.all(np.diff(s) >= -tol))

    def check_nondecreasing(self, tol: float = 1e-9) -> bool:
        return bool(np.all(self.slopes >= -tol))


@dataclass(frozen=True)
class ApproxPriceCurve:
    """Swept clearing-approximation price as a step function of the action.

    ``breakpoints_mw`` are the action magnitudes (within (0, p_max)) at
    which the marginal bid can change: ladder cumulative-volume boundaries
    shifted by the mean SI, plus the point where the net SI crosses zero.
    ``segment_prices`` holds the price on each open segment between
    consecutive breakpoints; evaluation reproduces the exact marginal rule
    including its boundary closures.
    """

    direction: int
    mean_si_mw: float
    p_max_mw: float
    up_cum: np.ndarray
    up_price: np.ndarray
    dn_cum: np.ndarray
    dn_price: np.ndarray
    mid_price: float
    breakpoints_mw: np.ndarray
    segment_prices: np.ndarray

    def evaluate(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        # charge shifts SI down, discharge shifts it up
        net = self.mean_si_mw - self.direction * p
        out = np.empty_like(net, dtype=float)
        short = net < 0
        surplus = net > 0
        out[short] = self.up_price[
            np.searchsorted(self.up_cum, -net[short], side="left")
        ]
        out[surplus] = self.dn_price[
            np.searchsorted(self.dn_cum, net[surplus], side="left")
        ]
        out[~short & ~surplus] = self.mid_price
        return out


@dataclass(frozen=True)
class CostSegments:
    """Separable convex cost of one action direction, in fill order.

    cost(p) = sum_j d_j r_j + g_j r_j^2 over the filled widths r_j with
    sum r_j = p; marginals d_j are nondecreasing, g_j >= 0.
    """

    widths: np.ndarray
    d: np.ndarray
    g: np.ndarray

    @property
    def p_max(self) -> float:
        return float(self.widths.sum())

    def cost(self, p: float) -> float:
        r = np.clip(p - np.concatenate(([0.0], np.cumsum(self.widths)[:-1])), 0.0,
                    self.widths)
        return float(np.sum(self.d * r + self.g * r * r))


def segments_from_price_curve(curve: PwlCurve, p_max: float) -> CostSegments:
    """Quadratic cost segments of p * price(p) for a convex PWL price curve."""
    xs, ys = curve.xs, curve.ys
    if xs[0] != 0.0:
        raise ValueError("price curve must start at action 0")
    if xs[-1] < p_max - 1e-9:
        raise ValueError("price curve does not cover the action range")
    keep = np.nonzero(xs[:-1] < p_max)[0]
    starts = xs[keep]
    ends = np.minimum(xs[keep + 1], p_max)
    lam = ys[keep]
    g = curve.slopes[keep]
    return CostSegments(widths=ends - starts, d=lam + starts * g, g=g)


def convex_cost_envelope(curve: ApproxPriceCurve, p_max: float,
                         price_sign: float = 1.0) -> CostSegments:
    """Lower convex envelope of p * price_sign * step_price(p) on [0, p_max].

    The raw cost is linear inside each price step and jumps at the step
    boundaries; the envelope is the lower boundary of the convex hull of
    all segment endpoints. ``price_sign=-1`` gives the discharge cost
    (earned revenue enters the objective negated).
    """
    bps = np.concatenate(([0.0], curve.breakpoints_mw, [p_max]))
    pts_x, pts_y = [], []
    for j in range(len(bps) - 1):
        a, b = bps[j], bps[j + 1]
        c = price_sign * curve.segment_prices[j]
        pts_x += [a, b]
        pts_y += [a * c, b * c]
    pts_x = np.asarray(pts_x)
    pts_y = np.asarray(pts_y)
    order = np.lexsort((pts_y, pts_x))
    pts_x, pts_y = pts_x[order], pts_y[order]
    # keep the lowest point per x (sorted by y within x), then lower hull
    _, first = np.unique(pts_x, return_index=True)
    pts_x, pts_y = pts_x[first], pts_y[first]
    hull: list[tuple[float, float]] = []
    for x, y in zip(pts_x, pts_y):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (y - y2) - (y2 - y1) * (x - x2) <= 0:
                hull.pop()
            else:
                break
        hull.append((x, y))
    hx = np.array([p[0] for p in hull])
    hy = np.array([p[1] for p in hull])
    widths = np.diff(hx)
    d = np.diff(hy) / widths
    return CostSegments(widths=widths, d=d, g=np.zeros_like(d))
