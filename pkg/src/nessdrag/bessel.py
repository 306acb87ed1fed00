"""Modified Bessel functions of the second kind K0, K1, K2 for real x > 0.

Power series for x <= 2. Above, e^x sqrt(x) K_n(x) is a smooth function of
u = 1/x on (0, 1/2]; it is interpolated once, at import, by a Chebyshev series
whose samples come from Steed's continued fraction (CF2).
"""

from __future__ import annotations

import numpy as np

EULER_GAMMA = 0.57721566490153286061

_SERIES_MAX_X = 2.0
_SERIES_TERMS = 17
_CF_MAXIT = 400
_EPS = 1e-17


def _series_k0_k1(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # A&S 9.6.13 / 9.6.11 with psi(k+1) = -gamma + H_k
    t = 0.25 * x * x
    lnx2 = np.log(0.5 * x)
    term0 = np.ones_like(x)  # t^k / (k!)^2
    term1 = np.ones_like(x)  # t^k / (k! (k+1)!)
    i0 = np.zeros_like(x)
    i1s = np.zeros_like(x)
    k0_sum = np.zeros_like(x)
    k1_sum = np.zeros_like(x)
    harmonic = 0.0
    for k in range(_SERIES_TERMS):
        if k > 0:
            harmonic += 1.0 / k
            term0 = term0 * t / (k * k)
            term1 = term1 * t / (k * (k + 1))
        psi1 = -EULER_GAMMA + harmonic
        psi2 = psi1 + 1.0 / (k + 1)
        i0 += term0
        i1s += term1
        k0_sum += psi1 * term0
        k1_sum += (psi1 + psi2) * term1
    k0 = -lnx2 * i0 + k0_sum
    i1 = 0.5 * x * i1s
    k1 = 1.0 / x + lnx2 * i1 - 0.25 * x * k1_sum
    return k0, k1


def _cf2_scaled(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """e^x sqrt(x) K0(x) and e^x sqrt(x) K1(x) from Steed's CF2, x >= 2."""
    a1 = 0.25
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = d.copy()
    delh = d.copy()
    q1 = np.zeros_like(x)
    q2 = np.ones_like(x)
    q = np.full_like(x, a1)
    s = 1.0 + q * delh
    h_out = np.empty_like(x)
    s_out = np.empty_like(x)
    idx = np.arange(x.size)  # positions of still-iterating entries
    c = a1
    a = -a1
    for i in range(1, _CF_MAXIT):
        a -= 2 * i
        c = -a * c / (i + 1.0)
        qnew = (q1 - b * q2) / a
        q1 = q2
        q2 = qnew
        q = q + c * qnew
        b = b + 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h = h + delh
        dels = q * delh
        s = s + dels
        done = np.abs(dels) < _EPS * np.abs(s)
        if np.any(done):
            h_out[idx[done]] = h[done]
            s_out[idx[done]] = s[done]
            keep = ~done
            idx = idx[keep]
            if idx.size == 0:
                break
            b, d, h, delh, q1, q2, q, s = (arr[keep] for arr in (b, d, h, delh, q1, q2, q, s))
    else:
        raise ArithmeticError("Bessel K continued fraction failed to converge")
    h = a1 * h_out
    k0s = np.sqrt(np.pi / 2.0) / s_out
    return k0s, k0s * (x + 0.5 - h) / x


def _cf2_k0_k1(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a, b = _cf2_scaled(x)
    with np.errstate(under="ignore"):
        pre = np.exp(-x) / np.sqrt(x)
    return pre * a, pre * b


_CHEB_DEGREE = 26


def _scaled_cf2(t: np.ndarray) -> np.ndarray:
    # t in [-1, 1] -> u = (t + 1)/4 in [0, 1/2]; u = 0 is the x -> inf limit
    u = 0.25 * (t + 1.0)
    out = np.empty((t.size, 2))
    tiny = u < 1e-12
    out[tiny] = np.sqrt(np.pi / 2.0)
    a, b = _cf2_scaled(1.0 / u[~tiny])
    out[~tiny, 0] = a
    out[~tiny, 1] = b
    return out


def _build_tables():
    nodes = np.cos(np.pi * (np.arange(_CHEB_DEGREE + 1) + 0.5) / (_CHEB_DEGREE + 1))
    samples = _scaled_cf2(nodes)
    return (np.polynomial.chebyshev.chebfit(nodes, samples[:, 0], _CHEB_DEGREE),
            np.polynomial.chebyshev.chebfit(nodes, samples[:, 1], _CHEB_DEGREE))


_CHEB_K0, _CHEB_K1 = _build_tables()


def _large_k0_k1(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    t = 4.0 / x - 1.0
    with np.errstate(under="ignore"):
        pre = np.exp(-x) / np.sqrt(x)
    cheb = np.polynomial.chebyshev.chebval
    return pre * cheb(t, _CHEB_K0), pre * cheb(t, _CHEB_K1)


def k0_k1(x) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(K0(x), K1(x))`` for an array of strictly positive ``x``."""
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise ValueError("modified Bessel K requires x > 0")
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    k0 = np.empty_like(x)
    k1 = np.empty_like(x)
    small = x <= _SERIES_MAX_X
    if np.any(small):
        k0[small], k1[small] = _series_k0_k1(x[small])
    big = ~small
    if np.any(big):
        k0[big], k1[big] = _large_k0_k1(x[big])
    if scalar:
        return k0[0], k1[0]
    return k0, k1


def k0(x):
    return k0_k1(x)[0]


def k1(x):
    return k0_k1(x)[1]


def k2(x):
    """K2 from the upward recurrence K2 = K0 + (2/x) K1 (stable for K)."""
    a, b = k0_k1(x)
    return a + 2.0 * b / np.asarray(x, dtype=float)


def k0_k2(x) -> tuple[np.ndarray, np.ndarray]:
    a, b = k0_k1(x)
    return a, a + 2.0 * b / np.asarray(x, dtype=float)
