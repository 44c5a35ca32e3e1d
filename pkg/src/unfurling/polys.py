"""Sparse multivariate polynomials over an exact field.

Coefficients are kept as raw field values (see ``FieldSpec.ops``) so the inner
loops avoid wrapping every intermediate in a :class:`Scalar`.  Optional
truncation by total degree and/or per-variable degree turns the same type into
a truncated power series.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .scalars import FieldSpec, Scalar


class DivisionError(ArithmeticError):
    """A division that had to be exact left a remainder."""


def _keep(exps, total, box):
    if total is not None and sum(exps) >= total:
        return False
    if box is not None:
        for e, b in zip(exps, box):
            if e >= b:
                return False
    return True


class Poly:
    __slots__ = ("field", "n", "terms")

    def __init__(self, field: FieldSpec, n: int, terms: Mapping | None = None):
        self.field = field
        self.n = n
        self.terms: dict = dict(terms) if terms else {}

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, F: FieldSpec, n: int) -> "Poly":
        return cls(F, n)

    @classmethod
    def const(cls, F: FieldSpec, n: int, c) -> "Poly":
        c = F(c)
        if c.is_zero():
            return cls(F, n)
        return cls(F, n, {(0,) * n: c.v})

    @classmethod
    def var(cls, F: FieldSpec, n: int, k: int) -> "Poly":
        e = [0] * n
        e[k] = 1
        return cls(F, n, {tuple(e): F.ops.one()})

    @classmethod
    def monomial(cls, F: FieldSpec, exps: Sequence[int], c=1) -> "Poly":
        c = F(c)
        if c.is_zero():
            return cls(F, len(exps))
        return cls(F, len(exps), {tuple(exps): c.v})

    @classmethod
    def from_dict(cls, F: FieldSpec, n: int, coeffs: Mapping) -> "Poly":
        terms = {}
        for e, c in coeffs.items():
            c = F(c)
            if not c.is_zero():
                terms[tuple(e)] = c.v
        return cls(F, n, terms)

    # -- inspection ---------------------------------------------------------

    def coeff(self, exps) -> Scalar:
        v = self.terms.get(tuple(exps))
        return Scalar(self.field, v) if v is not None else self.field.zero()

    def items(self) -> Iterable[tuple[tuple, Scalar]]:
        for e in sorted(self.terms):
            yield e, Scalar(self.field, self.terms[e])

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def min_degree(self) -> int | None:
        return min((sum(e) for e in self.terms), default=None)

    def degree_in(self, k: int) -> int:
        return max((e[k] for e in self.terms), default=-1)

    def weighted_degrees(self, weights: Sequence) -> set:
        return {sum(w * a for w, a in zip(weights, e)) for e in self.terms}

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Scalar:
        return self.coeff((0,) * self.n)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.n == other.n and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.items():
            mon = "*".join(
                (f"x{i + 1}" if a == 1 else f"x{i + 1}^{a}") for i, a in enumerate(e) if a
            )
            cs = str(c)
            if not mon:
                parts.append(cs)
            elif cs == "1":
                parts.append(mon)
            elif cs == "-1":
                parts.append("-" + mon)
            else:
                parts.append(f"({cs})*{mon}")
        return " + ".join(parts)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.n != self.n:
                raise ValueError("variable count mismatch")
            return other
        return Poly.const(self.field, self.n, other)

    def __add__(self, other):
        other = self._coerce(other)
        ops = self.field.ops
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = ops.add(out[e], c)
                if ops.is_zero(s):
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return Poly(self.field, self.n, out)

    __radd__ = __add__

    def __neg__(self):
        ops = self.field.ops
        return Poly(self.field, self.n, {e: ops.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Poly":
        c = self.field(c)
        if c.is_zero():
            return Poly(self.field, self.n)
        ops = self.field.ops
        return Poly(self.field, self.n, {e: ops.mul(v, c.v) for e, v in self.terms.items()})

    def mul(self, other: "Poly", total: int | None = None, box: Sequence[int] | None = None) -> "Poly":
        """Product, discarding monomials outside the truncation region."""
        ops = self.field.ops
        out: dict = {}
        trunc = total is not None or box is not None
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if trunc and not _keep(e, total, box):
                    continue
                p = ops.mul(c1, c2)
                if e in out:
                    out[e] = ops.add(out[e], p)
                else:
                    out[e] = p
        return Poly(self.field, self.n, {e: c for e, c in out.items() if not ops.is_zero(c)})

    def __mul__(self, other):
        if isinstance(other, Poly):
            return self.mul(other)
        return self.scale(other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        return self.pow(k)

    def pow(self, k: int, total: int | None = None, box=None) -> "Poly":
        acc = Poly.const(self.field, self.n, 1)
        base = self
        while k:
            if k & 1:
                acc = acc.mul(base, total, box)
            k >>= 1
            if k:
                base = base.mul(base, total, box)
        return acc

    def truncate(self, total: int | None = None, box: Sequence[int] | None = None) -> "Poly":
        return Poly(
            self.field, self.n, {e: c for e, c in self.terms.items() if _keep(e, total, box)}
        )

    def shift(self, k: int, by: int = 1) -> "Poly":
        """Multiply by x_k^by."""
        out = {}
        for e, c in self.terms.items():
            e2 = list(e)
            e2[k] += by
            out[tuple(e2)] = c
        return Poly(self.field, self.n, out)

    # -- variable manipulation ---------------------------------------------

    def permute(self, perm: Sequence[int]) -> "Poly":
        """Substitute x_i -> x_{perm[i]}."""
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * self.n
            for i, a in enumerate(e):
                e2[perm[i]] += a
            out[tuple(e2)] = c
        return Poly(self.field, self.n, out)

    def swap(self, k: int) -> "Poly":
        """Exchange x_k and x_{k+1} (0-based k)."""
        out = {}
        for e, c in self.terms.items():
            e2 = list(e)
            e2[k], e2[k + 1] = e2[k + 1], e2[k]
            out[tuple(e2)] = c
        return Poly(self.field, self.n, out)

    def embed(self, n: int, positions: Sequence[int]) -> "Poly":
        """Move variable i to position positions[i] in an n-variable ring."""
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * n
            for i, a in enumerate(e):
                e2[positions[i]] += a
            out[tuple(e2)] = c
        return Poly(self.field, n, out)

    def substitute(
        self, values: Sequence["Poly"], total: int | None = None, box=None
    ) -> "Poly":
        """Compose: x_i -> values[i] (all values share a ring)."""
        if not values:
            raise ValueError("need at least one value")
        m = values[0].n
        F = self.field
        cache: list[dict[int, Poly]] = [{0: Poly.const(F, m, 1)} for _ in values]

        def power(i, a):
            d = cache[i]
            if a not in d:
                d[a] = power(i, a - 1).mul(values[i], total, box)
            return d[a]

        acc = Poly(F, m)
        for e, c in self.terms.items():
            term = Poly(F, m, {(0,) * m: c})
            for i, a in enumerate(e):
                if a:
                    term = term.mul(power(i, a), total, box)
            acc = acc + term
        return acc

    def evaluate(self, point: Sequence) -> Scalar:
        F = self.field
        acc = F.zero()
        for e, c in self.terms.items():
            t = Scalar(F, c)
            for x, a in zip(point, e):
                if a:
                    t = t * F(x) ** a
            acc = acc + t
        return acc

    # -- exact division -----------------------------------------------------

    def div_difference(self, a: int, b: int) -> "Poly":
        """Exact quotient self / (x_b - x_a); raises DivisionError on remainder."""
        # coefficients as a polynomial in x_b over the remaining variables
        by_power: dict[int, dict] = {}
        for e, c in self.terms.items():
            j = e[b]
            e2 = list(e)
            e2[b] = 0
            by_power.setdefault(j, {})[tuple(e2)] = c
        if not by_power:
            return Poly(self.field, self.n)
        ops = self.field.ops
        top = max(by_power)
        quot: dict = {}
        carry: dict = {}
        # synthetic division by (x_b - x_a): q_{j-1} = c_j + x_a * q_j
        for j in range(top, -1, -1):
            cur = dict(by_power.get(j, {}))
            for e, c in carry.items():
                e2 = list(e)
                e2[a] += 1
                e2 = tuple(e2)
                if e2 in cur:
                    s = ops.add(cur[e2], c)
                    if ops.is_zero(s):
                        del cur[e2]
                    else:
                        cur[e2] = s
                else:
                    cur[e2] = c
            if j == 0:
                if cur:
                    raise DivisionError("nonzero remainder in exact division")
                break
            for e, c in cur.items():
                e2 = list(e)
                e2[b] = j - 1
                quot[tuple(e2)] = c
            carry = cur
        return Poly(self.field, self.n, quot)

    def divided_difference(self, k: int) -> "Poly":
        """(f^{s_k} - f) / (x_{k+1} - x_k), 0-based k."""
        return (self.swap(k) - self).div_difference(k, k + 1)


def bivar(F: FieldSpec, coeffs: Mapping[tuple[int, int], object]) -> Poly:
    """Polynomial in (u, v) from {(a, b): coeff}."""
    return Poly.from_dict(F, 2, coeffs)
