"""Inner loops for q-power series.

Every infinite series in the library is a sum of terms

    chi[n mod f] * q**(a*n + b) * [x + n]_q**(-w),    n = n_start .. n_stop-1

with real a, b, x > 0 and complex w.  Three interchangeable backends evaluate
such a block of terms:

* ``_block_jit``   numba ``@njit`` loop with Neumaier-compensated accumulation
* ``_block_numpy`` vectorised numpy, exact chunk sums through ``math.fsum``
* ``block_mpfr``   MPFR (gmpy2) loop at a caller-chosen precision

``block_float`` is bound to the jit kernel unless numba is unavailable or the
environment variable ``HQZETA_JIT`` is set to ``0``/``false``/``no``.

The float kernels return ``(re, im, abs_sum, err_sum)``: ``abs_sum`` is the sum
of term magnitudes and ``err_sum * 2**-53`` a first-order bound on the
accumulated rounding error of the computed terms.
"""
from __future__ import annotations

import math
import os

import gmpy2
import numpy as np

_CHUNK = 1 << 16

# Per-term rounding weight: a few ulps for expm1/log/exp/cos/sin and the
# complex product, on top of the exponent-amplified error.
_TERM_ULPS = 8.0


def _block_numpy(lnq, one_minus_q, a, b, x, wr, wi, chi_re, chi_im, n_start, n_stop):
    f = chi_re.shape[0]
    re_parts = []
    im_parts = []
    abs_sum = 0.0
    err_sum = 0.0
    for lo in range(n_start, n_stop, _CHUNK):
        n = np.arange(lo, min(lo + _CHUNK, n_stop), dtype=np.float64)
        idx = np.arange(lo, lo + n.shape[0]) % f
        cr = chi_re[idx]
        ci = chi_im[idx]
        keep = (cr != 0.0) | (ci != 0.0)
        if not keep.all():
            n, cr, ci = n[keep], cr[keep], ci[keep]
        e1 = (a * n + b) * lnq
        log_base = np.log(-np.expm1((x + n) * lnq) / one_minus_q)
        mag = np.exp(e1 - wr * log_base)
        phase = -wi * log_base
        tr = mag * np.cos(phase)
        ti = mag * np.sin(phase)
        re_parts.append(math.fsum(tr * cr - ti * ci))
        im_parts.append(math.fsum(tr * ci + ti * cr))
        cmag = mag * np.hypot(cr, ci)
        abs_sum += float(cmag.sum())
        err_sum += float((cmag * (_TERM_ULPS + abs(wr) + abs(wi) + np.abs(e1) + np.abs(wr * log_base) + np.abs(phase))).sum())
    return math.fsum(re_parts), math.fsum(im_parts), abs_sum, err_sum


def _jit_source(lnq, one_minus_q, a, b, x, wr, wi, chi_re, chi_im, n_start, n_stop):
    f = chi_re.shape[0]
    s_re = 0.0
    c_re = 0.0
    s_im = 0.0
    c_im = 0.0
    abs_sum = 0.0
    err_sum = 0.0
    for n in range(n_start, n_stop):
        j = n % f
        cr = chi_re[j]
        ci = chi_im[j]
        if cr == 0.0 and ci == 0.0:
            continue
        e1 = (a * n + b) * lnq
        log_base = math.log(-math.expm1((x + n) * lnq) / one_minus_q)
        mag = math.exp(e1 - wr * log_base)
        phase = -wi * log_base
        tr = mag * math.cos(phase)
        ti = mag * math.sin(phase)
        vr = tr * cr - ti * ci
        vi = tr * ci + ti * cr
        # Neumaier updates
        t = s_re + vr
        if abs(s_re) >= abs(vr):
            c_re += (s_re - t) + vr
        else:
            c_re += (vr - t) + s_re
        s_re = t
        t = s_im + vi
        if abs(s_im) >= abs(vi):
            c_im += (s_im - t) + vi
        else:
            c_im += (vi - t) + s_im
        s_im = t
        cmag = mag * math.hypot(cr, ci)
        abs_sum += cmag
        err_sum += cmag * (_TERM_ULPS + abs(wr) + abs(wi) + abs(e1) + abs(wr * log_base) + abs(phase))
    return s_re + c_re, s_im + c_im, abs_sum, err_sum


def _jit_requested() -> bool:
    return os.environ.get("HQZETA_JIT", "1").strip().lower() not in {"0", "false", "no", "off"}


try:
    import numba

    _block_jit = numba.njit(cache=True, nogil=True)(_jit_source)
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _block_jit = None
    HAVE_NUMBA = False

USE_JIT = HAVE_NUMBA and _jit_requested()
block_float = _block_jit if USE_JIT else _block_numpy
BACKEND = "numba" if USE_JIT else "numpy"


def block_mpfr(q, a, b, x, w, f, skip, n_start, n_stop):
    """Per-residue-class sums of the same block of terms in MPFR.

    Runs under the caller's gmpy2 context, with 32 guard bits added for the
    multiplicative recurrences q**(a n + b) and q**(x + n).  ``q``, ``a``,
    ``b``, ``x`` are floats converted exactly, ``w`` a complex, ``f`` the class
    count and ``skip`` the set of classes whose character value is zero.
    Returns ``(re, im)`` lists of length ``f``.  The character weights are left
    to the caller so inexact roots of unity never meet the large cancelling
    partial sums.
    """
    prec = gmpy2.get_context().precision + 32
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        mq = gmpy2.mpfr(q)
        lnq = gmpy2.log(mq)
        one_minus_q = 1 - mq
        mx = gmpy2.mpfr(x)
        wr, wi = gmpy2.mpfr(w.real), gmpy2.mpfr(w.imag)
        int_power = -int(w.real) if w.imag == 0 and w.real == int(w.real) else None
        step_a = gmpy2.exp(gmpy2.mpfr(a) * lnq)
        weight = gmpy2.exp((gmpy2.mpfr(a) * n_start + gmpy2.mpfr(b)) * lnq)
        qxn = gmpy2.exp((mx + n_start) * lnq)
        acc_re = [gmpy2.mpfr(0)] * f
        acc_im = [gmpy2.mpfr(0)] * f
        for n in range(n_start, n_stop):
            j = n % f
            if j not in skip:
                if qxn > 0.25:
                    base = -gmpy2.expm1((mx + n) * lnq) / one_minus_q
                else:
                    base = (1 - qxn) / one_minus_q
                if int_power is not None:
                    acc_re[j] += weight * base**int_power
                else:
                    log_base = gmpy2.log(base)
                    mag = weight * gmpy2.exp(-wr * log_base)
                    if wi:
                        phase = -wi * log_base
                        acc_re[j] += mag * gmpy2.cos(phase)
                        acc_im[j] += mag * gmpy2.sin(phase)
                    else:
                        acc_re[j] += mag
            weight *= step_a
            qxn *= mq
    return acc_re, acc_im
