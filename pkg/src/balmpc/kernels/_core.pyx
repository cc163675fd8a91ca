# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled settlement pricing kernels.

Mirrors ``pure.py`` exactly: same lookup semantics (bisect-left on the
cumulative volume ladder) and the same minute-order accumulation, so the
two backends agree bit for bit.
"""

BACKEND_NAME = "cython"


cdef inline Py_ssize_t _bisect_left(const double[::1] arr, double v) nogil:
    cdef Py_ssize_t lo = 0
    cdef Py_ssize_t hi = arr.shape[0]
    cdef Py_ssize_t mid
    while lo < hi:
        mid = (lo + hi) // 2
        if arr[mid] < v:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline double _price_at(
    double net,
    const double[::1] up_cum, const double[::1] up_price,
    const double[::1] dn_cum, const double[::1] dn_price,
    double mid_price, int* status,
) nogil:
    cdef double depth
    cdef Py_ssize_t idx
    if net < 0.0:
        depth = -net
        if depth > up_cum[up_cum.shape[0] - 1]:
            status[0] = 1
            return 0.0
        idx = _bisect_left(up_cum, depth)
        return up_price[idx]
    elif net > 0.0:
        depth = net
        if depth > dn_cum[dn_cum.shape[0] - 1]:
            status[0] = 2
            return 0.0
        idx = _bisect_left(dn_cum, depth)
        return dn_price[idx]
    return mid_price


def marginal_prices(
    const double[::1] net_si,
    const double[::1] up_cum, const double[::1] up_price,
    const double[::1] dn_cum, const double[::1] dn_price,
    double mid_price,
    double[::1] out,
):
    cdef Py_ssize_t i
    cdef int status = 0
    with nogil:
        for i in range(net_si.shape[0]):
            out[i] = _price_at(
                net_si[i], up_cum, up_price, dn_cum, dn_price, mid_price, &status
            )
            if status != 0:
                break
    return status


def qh_prices_for_deltas(
    const double[::1] si_minutes,
    const double[::1] deltas,
    const double[::1] up_cum, const double[::1] up_price,
    const double[::1] dn_cum, const double[::1] dn_price,
    double mid_price,
    double[::1] out,
):
    cdef Py_ssize_t j, m
    cdef Py_ssize_t n_min = si_minutes.shape[0]
    cdef double acc
    cdef int status = 0
    with nogil:
        for j in range(deltas.shape[0]):
            acc = 0.0
            for m in range(n_min):
                acc += _price_at(
                    si_minutes[m] + deltas[j],
                    up_cum, up_price, dn_cum, dn_price, mid_price, &status,
                )
                if status != 0:
                    break
            if status != 0:
                break
            out[j] = acc / n_min
    return status
