"""Pure NumPy fallback for the per-node sampling kernel.

For every ``mu`` the kernel evaluates ``R = num/den`` and the optimal
relative backward error ``delta = (ln R + 2*pi*i*k - mu)/mu`` with the
minimizing unwinding number ``k``.  ``R - 1`` is evaluated from its own
numerator ``dm1 = num - den`` so that ``ln R`` stays accurate near mu = 0.

Outputs, all 1-D and aligned with ``mu``:

* ``k``          int64 unwinding number (0 at singular points)
* ``delta``      complex optimal relative backward error (``inf`` if singular)
* ``r``          complex R(mu) (``inf`` at a pole)
* ``abs_delta``  float ``|delta|``
* ``classical``  bool ``|R| <= 1``
* ``orderstar``  int8 sign of ``|R e^-mu| - 1`` with a 1e-12 dead band
* ``singular``   bool, R(mu) = 0 or mu is a pole
"""
import numpy as np

TWO_PI = 6.283185307179586
TINY = 1e-300
BAND = 1e-12


def _cdiv(ar, ai, br, bi):
    # Smith's algorithm, same branch structure as the compiled kernel
    big = np.abs(br) >= np.abs(bi)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(big, bi / br, br / bi)
        denom = np.where(big, br + bi * ratio, br * ratio + bi)
        outr = np.where(big, (ar + ai * ratio) / denom, (ar * ratio + ai) / denom)
        outi = np.where(big, (ai - ar * ratio) / denom, (ai * ratio - ar) / denom)
    return outr, outi


def _horner(coeffs, xr, xi):
    accr = np.zeros_like(xr)
    acci = np.zeros_like(xr)
    for c in coeffs[::-1]:
        tr = accr * xr - acci * xi + c.real
        acci = accr * xi + acci * xr + c.imag
        accr = tr
    return accr, acci


def sample(num, den, dm1, mu):
    num = np.asarray(num, dtype=np.complex128)
    den = np.asarray(den, dtype=np.complex128)
    dm1 = np.asarray(dm1, dtype=np.complex128)
    mu = np.ascontiguousarray(mu, dtype=np.complex128).ravel()
    xr, xi = mu.real.copy(), mu.imag.copy()
    n = mu.shape[0]

    denr, deni = _horner(den, xr, xi)
    pole = (np.abs(denr) < TINY) & (np.abs(deni) < TINY)
    pole[pole] = np.hypot(denr[pole], deni[pole]) < TINY
    numr, numi = _horner(num, xr, xi)
    rr, ri = _cdiv(numr, numi, denr, deni)
    ri = ri + 0.0
    absr = np.hypot(rr, ri)
    zero = ~pole & (absr < TINY)
    singular = pole | zero
    ok = ~singular

    wr, wi = _horner(dm1, xr, xi)
    wr, wi = _cdiv(wr, wi, denr, deni)
    small = ok & (wr * wr + wi * wi < 0.25)
    large = ok & ~small
    lr = np.zeros(n)
    li = np.zeros(n)
    lr[small] = 0.5 * np.log1p(2.0 * wr[small] + (wr[small] * wr[small] + wi[small] * wi[small]))
    li[small] = np.arctan2(wi[small], 1.0 + wr[small])
    lr[large] = np.log(absr[large])
    li[large] = np.arctan2(ri[large], rr[large])
    a = (xi - li) / TWO_PI
    kk = np.copysign(np.ceil(np.abs(a) - 0.5), a)
    er = lr - xr
    ei = (li - xi) + TWO_PI * kk
    odr, odi = _cdiv(er, ei, xr, xi)
    with np.errstate(over="ignore"):
        v = np.exp(lr - xr)

    k = np.where(ok, kk, 0.0).astype(np.int64)
    delta = np.empty(n, dtype=np.complex128)
    delta.real = np.where(ok, odr, np.inf)
    delta.imag = np.where(ok, odi, 0.0)
    r = np.empty(n, dtype=np.complex128)
    r.real = np.where(pole, np.inf, rr)
    r.imag = np.where(pole, 0.0, ri)
    abs_delta = np.where(ok, np.hypot(odr, odi), np.inf)
    classical = ~pole & (absr <= 1.0)
    orderstar = np.where(np.abs(v - 1.0) <= BAND, 0, np.where(v > 1.0, 1, -1)).astype(np.int8)
    orderstar[pole] = 1
    orderstar[zero] = -1
    return k, delta, r, abs_delta, classical, orderstar, singular
