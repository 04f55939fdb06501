"""Thin adaptive-quadrature layer over QUADPACK (Gauss-Kronrod 21).

Oscillatory integrands are split into chunks no longer than a caller-given
length before being handed to :func:`scipy.integrate.quad`; each chunk must
meet the relative tolerance on its own or against the running total.
"""

import math
import warnings

import numpy as np
from scipy import integrate

from .errors import NumericError, QuadratureError

TINY = 1e-300


def _chunk_edges(lo, hi, max_width, breakpoints=()):
    edges = {lo, hi}
    edges.update(b for b in breakpoints if lo < b < hi)
    edges = sorted(edges)
    out = [edges[0]]
    for right in edges[1:]:
        left = out[-1]
        n = max(1, math.ceil((right - left) / max_width)) if max_width else 1
        out.extend(np.linspace(left, right, n + 1)[1:].tolist())
    return out


def integrate_chunked(f, lo, hi, *, rtol=1e-8, max_width=None, breakpoints=(), limit=200):
    """Integrate a real scalar function ``f`` over ``[lo, hi]``.

    Returns ``(value, abs_error_estimate)``.  Raises
    :class:`~dipole_decoherence.errors.QuadratureError` when the summed error
    estimate exceeds ``rtol * |value|`` and
    :class:`~dipole_decoherence.errors.NumericError` on non-finite samples.
    """
    edges = _chunk_edges(lo, hi, max_width, breakpoints)
    pieces, errs = [], []

    def guarded(x):
        y = f(x)
        if not math.isfinite(y):
            raise NumericError(f"non-finite integrand {y!r} at x = {x!r}")
        return y

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for a, b in zip(edges[:-1], edges[1:]):
            val, err = integrate.quad(guarded, a, b, epsabs=0.0, epsrel=rtol * 0.1, limit=limit)
            pieces.append(val)
            errs.append(err)

    total = math.fsum(pieces)
    err = math.fsum(errs)
    scale = max(abs(total), math.fsum(abs(p) for p in pieces) * 1e-12, TINY)
    if err > rtol * scale:
        raise QuadratureError(
            f"quadrature reached relative error {err / scale:.3g}, requested {rtol:.3g}",
            achieved=err / scale,
            requested=rtol,
        )
    return total, err
