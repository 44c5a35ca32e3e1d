"""Truncated multivariate power series built on :class:`Poly`.

Truncation is either by total degree (``total=N`` keeps degrees < N) or by a
per-variable box (``box=(N_1, ..., N_n)`` keeps exponents e_k < N_k).
"""

from __future__ import annotations

from fractions import Fraction

from .polys import Poly
from .scalars import FieldSpec, Scalar


def binomial(alpha: Fraction, m: int) -> Fraction:
    """alpha choose m for rational alpha."""
    out = Fraction(1)
    for i in range(m):
        out = out * (alpha - i) / (i + 1)
    return out


def _order_bound(n: int, total, box) -> int:
    """Smallest M with (nilpotent)^M = 0 under the truncation."""
    bounds = []
    if total is not None:
        bounds.append(total)
    if box is not None:
        bounds.append(sum(b - 1 for b in box) + 1)
    return min(bounds)


def root_series(F: FieldSpec, n: int, k: int, u: Scalar, d: int, total=None, box=None) -> Poly:
    """(1 + x_k/u)^(1/d) - 1 by the binomial series."""
    top = _order_bound(1, total, None if box is None else (box[k],))
    alpha = Fraction(1, d)
    uinv = u.inverse()
    terms = {}
    upow = F.one()
    for m in range(1, top):
        upow = upow * uinv
        c = F(binomial(alpha, m)) * upow
        if not c.is_zero():
            e = [0] * n
            e[k] = m
            terms[tuple(e)] = c
    return Poly.from_dict(F, n, terms).truncate(total, box)


def inverse(S: Poly, total=None, box=None) -> Poly:
    """Inverse of a unit (nonzero constant term) under the truncation."""
    c = S.constant_term()
    if c.is_zero():
        raise ZeroDivisionError("series with zero constant term is not a unit")
    cinv = c.inverse()
    nil = (S - Poly.const(S.field, S.n, c)).scale(-cinv)
    acc = Poly.const(S.field, S.n, 1)
    term = acc
    for _ in range(1, _order_bound(S.n, total, box)):
        term = term.mul(nil, total, box)
        if term.is_zero():
            break
        acc = acc + term
    return acc.scale(cinv).truncate(total, box)


def one_plus(F: FieldSpec, n: int, k: int) -> Poly:
    """1 + x_k."""
    e = [0] * n
    e[k] = 1
    return Poly.from_dict(F, n, {(0,) * n: 1, tuple(e): 1})
