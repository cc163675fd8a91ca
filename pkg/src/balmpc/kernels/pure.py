"""Pure-numpy settlement pricing kernels.

Same contracts as the compiled module in ``_core.pyx``; arithmetic is
arranged so both backends produce bit-identical results (price lookups
are array reads, minute sums accumulate in minute order).

Status codes: 0 ok, 1 upward ladder exhausted, 2 downward ladder exhausted.
"""

import numpy as np

BACKEND_NAME = "pure"


def marginal_prices(net_si, up_cum, up_price, dn_cum, dn_price, mid_price, out):
    """Marginal imbalance price per entry of ``net_si`` (MW, surplus positive)."""
    net_si = np.asarray(net_si)
    short = net_si < 0.0
    surplus = net_si > 0.0
    depth_up = -net_si[short]
    depth_dn = net_si[surplus]
    if depth_up.size and depth_up.max() > up_cum[-1]:
        return 1
    if depth_dn.size and depth_dn.max() > dn_cum[-1]:
        return 2
    out[short] = up_price[np.searchsorted(up_cum, depth_up, side="left")]
    out[surplus] = dn_price[np.searchsorted(dn_cum, depth_dn, side="left")]
    out[~short & ~surplus] = mid_price
    return 0


def qh_prices_for_deltas(
    si_minutes, deltas, up_cum, up_price, dn_cum, dn_price, mid_price, out
):
    """Quarter-hour price (mean of minute prices) per perturbation delta."""
    net = np.asarray(si_minutes)[:, None] + np.asarray(deltas)[None, :]
    prices = np.empty_like(net)
    status = marginal_prices(
        net.ravel(), up_cum, up_price, dn_cum, dn_price, mid_price, prices.ravel()
    )
    if status != 0:
        return status
    acc = np.zeros(len(deltas))
    for m in range(prices.shape[0]):  # minute order, matches compiled loop
        acc += prices[m]
    out[:] = acc / float(prices.shape[0])
    return 0
