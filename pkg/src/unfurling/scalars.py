"""Exact coefficient fields.

Four kinds of field are supported: the rationals, cyclotomic fields Q(zeta_m),
prime fields F_p and univariate rational function fields over any of those.
Every element is stored in a canonical form, so ``==`` on :class:`Scalar` is
equality of values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Any, Sequence


class FieldError(ArithmeticError):
    """Raised for field mismatches, missing roots and similar failures."""


class FieldMismatch(FieldError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


# ---------------------------------------------------------------------------
# integer polynomial helpers (cyclotomic polynomials)


def _int_poly_divexact(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = a[k + len(b) - 1] // b[-1]
        out[k] = c
        for i, bc in enumerate(b):
            a[k + i] -= c * bc
    if any(a):
        raise ValueError("inexact division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients (low to high) of the m-th cyclotomic polynomial."""
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly = _int_poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


# ---------------------------------------------------------------------------
# field implementations; each works on raw values, Scalar wraps them


class _RationalOps:
    characteristic = 0

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def coerce(self, x):
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        if isinstance(x, str):
            return Fraction(x)
        raise TypeError(f"cannot coerce {x!r} into the rationals")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero")
        return 1 / a

    def is_zero(self, a):
        return a == 0

    def from_rational(self, q):
        return Fraction(q)

    def rational_value(self, a):
        return a

    def fmt(self, a):
        return str(a)


class _CyclotomicOps:
    def __init__(self, m: int):
        self.m = m
        self.phi_poly = cyclotomic_polynomial(m)
        self.phi = len(self.phi_poly) - 1
        self.characteristic = 0
        # reduction table: x^k mod Phi_m for 0 <= k < max(m, 2*phi - 1)
        top = max(m, 2 * self.phi - 1)
        table = []
        cur = [Fraction(0)] * self.phi
        cur[0] = Fraction(1)
        for _ in range(top):
            table.append(tuple(cur))
            cur = self._times_x(cur)
        self.table = table

    def _times_x(self, v):
        lead = v[-1]
        out = [Fraction(0)] + list(v[:-1])
        if lead:
            for i in range(self.phi):
                out[i] -= lead * self.phi_poly[i]
        return out

    def zero(self):
        return (Fraction(0),) * self.phi

    def one(self):
        return (Fraction(1),) + (Fraction(0),) * (self.phi - 1)

    def reduce_coeffs(self, coeffs: Sequence) -> tuple:
        """Reduce a coefficient list on 1, zeta, zeta^2, ... to canonical form."""
        out = [Fraction(0)] * self.phi
        for k, c in enumerate(coeffs):
            c = Fraction(c)
            if not c:
                continue
            row = self.table[k % self.m]
            for i in range(self.phi):
                if row[i]:
                    out[i] += c * row[i]
        return tuple(out)

    def coerce(self, x):
        if isinstance(x, (int, Fraction, str)):
            return self.from_rational(Fraction(x))
        raise TypeError(f"cannot coerce {x!r} into cyclotomic({self.m})")

    def from_rational(self, q):
        return (Fraction(q),) + (Fraction(0),) * (self.phi - 1)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        phi = self.phi
        if phi == 1:
            return (a[0] * b[0],)
        conv = [0] * (2 * phi - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        out = list(conv[:phi])
        for k in range(phi, 2 * phi - 1):
            c = conv[k]
            if c:
                row = self.table[k]
                for i in range(phi):
                    if row[i]:
                        out[i] += c * row[i]
        return tuple(Fraction(x) for x in out)

    def is_zero(self, a):
        return not any(a)

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("division by zero")
        phi = self.phi
        # columns of the multiplication-by-a matrix are a * zeta^j
        cols = []
        basis = [Fraction(0)] * phi
        for j in range(phi):
            e = list(basis)
            e[j] = Fraction(1)
            cols.append(self.mul(a, tuple(e)))
        mat = [[cols[j][i] for j in range(phi)] + [Fraction(1 if i == 0 else 0)] for i in range(phi)]
        for c in range(phi):
            piv = next(r for r in range(c, phi) if mat[r][c])
            mat[c], mat[piv] = mat[piv], mat[c]
            pv = mat[c][c]
            mat[c] = [x / pv for x in mat[c]]
            for r in range(phi):
                if r != c and mat[r][c]:
                    f = mat[r][c]
                    mat[r] = [x - f * y for x, y in zip(mat[r], mat[c])]
        return tuple(mat[i][phi] for i in range(phi))

    def rational_value(self, a):
        if any(a[1:]):
            return None
        return a[0]

    def fmt(self, a):
        if not any(a[1:]):
            return str(a[0])
        k = self.root_exponent(a)
        if k is not None:
            return "1" if k == 0 else f"z{self.m}^{k}"
        mk = self.root_exponent(self.neg(a))
        if mk is not None:
            return "-1" if mk == 0 else f"-z{self.m}^{mk}"
        terms = []
        for i, c in enumerate(a):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                terms.append(f"{c}*z{self.m}^{i}")
        return "+".join(terms) if terms else "0"

    @property
    def powers(self):
        if not hasattr(self, "_powers"):
            self._powers = [self.reduce_coeffs([0] * k + [1]) for k in range(self.m)]
        return self._powers

    def root_exponent(self, a):
        """Return k if a == zeta^k, else None."""
        for k, p in enumerate(self.powers):
            if p == a:
                return k
        return None


class _PrimeOps:
    def __init__(self, p: int):
        self.p = p
        self.characteristic = p

    def zero(self):
        return 0

    def one(self):
        return 1 % self.p

    def coerce(self, x):
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, (Fraction, str)):
            q = Fraction(x)
            return self.from_rational(q)
        raise TypeError(f"cannot coerce {x!r} into F_{self.p}")

    def from_rational(self, q):
        q = Fraction(q)
        if q.denominator % self.p == 0:
            raise ZeroDivisionError(f"denominator divisible by {self.p}")
        return q.numerator * pow(q.denominator, -1, self.p) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero")
        return pow(a, -1, self.p)

    def is_zero(self, a):
        return a == 0

    def rational_value(self, a):
        return None

    def fmt(self, a):
        return str(a)


class _RatFuncOps:
    """Reduced num/den pairs of coefficient tuples over a base field."""

    def __init__(self, base: "FieldSpec", var: str):
        self.base = base
        self.var = var
        self.characteristic = base.characteristic

    # univariate helpers on tuples of base Scalars, low to high
    def _trim(self, p):
        p = list(p)
        while p and p[-1].is_zero():
            p.pop()
        return tuple(p)

    def _padd(self, a, b):
        n = max(len(a), len(b))
        z = self.base.zero()
        return self._trim(
            (a[i] if i < len(a) else z) + (b[i] if i < len(b) else z) for i in range(n)
        )

    def _pneg(self, a):
        return tuple(-c for c in a)

    def _pmul(self, a, b):
        if not a or not b:
            return ()
        out = [self.base.zero()] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return self._trim(out)

    def _pdivmod(self, a, b):
        a = list(a)
        q = [self.base.zero()] * max(len(a) - len(b) + 1, 0)
        lead_inv = 1 / b[-1]
        while len(a) >= len(b) and a:
            c = a[-1] * lead_inv
            k = len(a) - len(b)
            q[k] = c
            for i, bc in enumerate(b):
                a[k + i] = a[k + i] - c * bc
            a = list(self._trim(a))
        return self._trim(q), tuple(a)

    def _pgcd(self, a, b):
        while b:
            _, r = self._pdivmod(a, b)
            a, b = b, r
        if not a:
            return a
        lead_inv = 1 / a[-1]
        return tuple(c * lead_inv for c in a)

    def _normalize(self, num, den):
        num, den = self._trim(num), self._trim(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return ((), (self.base.one(),))
        g = self._pgcd(num, den)
        if len(g) > 1:
            num, _ = self._pdivmod(num, g)
            den, _ = self._pdivmod(den, g)
        lead_inv = 1 / den[-1]
        return (
            tuple(c * lead_inv for c in num),
            tuple(c * lead_inv for c in den),
        )

    def zero(self):
        return ((), (self.base.one(),))

    def one(self):
        return ((self.base.one(),), (self.base.one(),))

    def coerce(self, x):
        if isinstance(x, Scalar) and x.field == self.base:
            return self._normalize((x,), (self.base.one(),))
        return self._normalize((self.base(x),), (self.base.one(),))

    def from_rational(self, q):
        return self.coerce(Fraction(q))

    def add(self, a, b):
        return self._normalize(
            self._padd(self._pmul(a[0], b[1]), self._pmul(b[0], a[1])), self._pmul(a[1], b[1])
        )

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def neg(self, a):
        return (self._pneg(a[0]), a[1])

    def mul(self, a, b):
        return self._normalize(self._pmul(a[0], b[0]), self._pmul(a[1], b[1]))

    def inv(self, a):
        if not a[0]:
            raise ZeroDivisionError("division by zero")
        return self._normalize(a[1], a[0])

    def is_zero(self, a):
        return not a[0]

    def rational_value(self, a):
        if len(a[0]) <= 1 and len(a[1]) == 1:
            if not a[0]:
                return Fraction(0)
            return a[0][0].rational_value()
        return None

    def _pfmt(self, p):
        terms = []
        for i, c in enumerate(p):
            if c.is_zero():
                continue
            cs = str(c)
            if i == 0:
                terms.append(cs)
            else:
                mon = self.var if i == 1 else f"{self.var}^{i}"
                terms.append(mon if cs == "1" else f"({cs})*{mon}")
        return "+".join(terms) if terms else "0"

    def fmt(self, a):
        num = self._pfmt(a[0])
        if len(a[1]) == 1:
            return num
        return f"({num})/({self._pfmt(a[1])})"


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    """Description of an exact field; also acts as the element constructor."""

    kind: str
    m: int | None = None
    p: int | None = None
    base: "FieldSpec | None" = None
    var: str | None = None
    ops: Any = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if self.kind == "rationals":
            ops = _RationalOps()
        elif self.kind == "cyclotomic":
            if not isinstance(self.m, int) or self.m < 1:
                raise ValueError("cyclotomic order must be a positive integer")
            ops = _CyclotomicOps(self.m)
        elif self.kind == "prime":
            if not isinstance(self.p, int) or not _is_prime(self.p):
                raise ValueError(f"prime field characteristic {self.p!r} is not prime")
            ops = _PrimeOps(self.p)
        elif self.kind == "rational_functions":
            if self.base is None or not self.var:
                raise ValueError("rational function field needs a base field and variable")
            ops = _RatFuncOps(self.base, self.var)
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")
        object.__setattr__(self, "ops", ops)

    @property
    def characteristic(self) -> int:
        return self.ops.characteristic

    def __call__(self, x) -> "Scalar":
        if isinstance(x, Scalar):
            if x.field == self:
                return x
            if self.kind == "rational_functions" and x.field == self.base:
                return Scalar(self, self.ops.coerce(x))
            raise FieldMismatch(f"element of {x.field} used in {self}")
        return Scalar(self, self.ops.coerce(x))

    def zero(self) -> "Scalar":
        return Scalar(self, self.ops.zero())

    def one(self) -> "Scalar":
        return Scalar(self, self.ops.one())

    def gen(self) -> "Scalar":
        """zeta_m for cyclotomic fields, the variable for rational functions."""
        if self.kind == "cyclotomic":
            return Scalar(self, self.ops.reduce_coeffs([0, 1]))
        if self.kind == "rational_functions":
            one = self.base.one()
            return Scalar(self, ((self.base.zero(), one), (one,)))
        raise FieldError(f"{self} has no designated generator")

    def from_coeffs(self, coeffs: Sequence) -> "Scalar":
        """Cyclotomic element sum c_k zeta^k (any number of coefficients)."""
        if self.kind != "cyclotomic":
            raise FieldError("from_coeffs is only defined for cyclotomic fields")
        return Scalar(self, self.ops.reduce_coeffs(coeffs))

    def ratfunc(self, num: Sequence, den: Sequence = (1,)) -> "Scalar":
        if self.kind != "rational_functions":
            raise FieldError("ratfunc is only defined for rational function fields")
        b = self.base
        return Scalar(self, self.ops._normalize(tuple(b(c) for c in num), tuple(b(c) for c in den)))

    def __str__(self):
        if self.kind == "rationals":
            return "QQ"
        if self.kind == "cyclotomic":
            return f"QQ(z{self.m})"
        if self.kind == "prime":
            return f"GF({self.p})"
        return f"{self.base}({self.var})"


def rationals() -> FieldSpec:
    return _field_cache("rationals")


def cyclotomic(m: int) -> FieldSpec:
    return _field_cache("cyclotomic", m=m)


def prime_field(p: int) -> FieldSpec:
    return _field_cache("prime", p=p)


def rational_functions(base: FieldSpec, var: str = "q") -> FieldSpec:
    return _field_cache("rational_functions", base=base, var=var)


@lru_cache(maxsize=None)
def _field_cache(kind, m=None, p=None, base=None, var=None) -> FieldSpec:
    return FieldSpec(kind, m=m, p=p, base=base, var=var)


class Scalar:
    """An immutable field element in canonical form."""

    __slots__ = ("field", "v")

    def __init__(self, field: FieldSpec, v):
        self.field = field
        self.v = v

    def _other(self, b):
        if isinstance(b, Scalar):
            if b.field is not self.field and b.field != self.field:
                raise FieldMismatch(f"cannot combine {self.field} and {b.field}")
            return b.v
        return self.field.ops.coerce(b)

    def __add__(self, b):
        return Scalar(self.field, self.field.ops.add(self.v, self._other(b)))

    __radd__ = __add__

    def __sub__(self, b):
        return Scalar(self.field, self.field.ops.sub(self.v, self._other(b)))

    def __rsub__(self, b):
        return Scalar(self.field, self.field.ops.sub(self._other(b), self.v))

    def __mul__(self, b):
        return Scalar(self.field, self.field.ops.mul(self.v, self._other(b)))

    __rmul__ = __mul__

    def __truediv__(self, b):
        ops = self.field.ops
        return Scalar(self.field, ops.mul(self.v, ops.inv(self._other(b))))

    def __rtruediv__(self, b):
        ops = self.field.ops
        return Scalar(self.field, ops.mul(self._other(b), ops.inv(self.v)))

    def __neg__(self):
        return Scalar(self.field, self.field.ops.neg(self.v))

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("only integer powers are supported")
        ops = self.field.ops
        base = self.v
        if k < 0:
            base = ops.inv(base)
            k = -k
        acc = ops.one()
        while k:
            if k & 1:
                acc = ops.mul(acc, base)
            k >>= 1
            if k:
                base = ops.mul(base, base)
        return Scalar(self.field, acc)

    def inverse(self) -> "Scalar":
        return Scalar(self.field, self.field.ops.inv(self.v))

    def is_zero(self) -> bool:
        return self.field.ops.is_zero(self.v)

    def is_one(self) -> bool:
        return self.v == self.field.ops.one()

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, b):
        if isinstance(b, Scalar):
            return self.field == b.field and self.v == b.v
        try:
            return self.v == self.field.ops.coerce(b)
        except (TypeError, ValueError, ZeroDivisionError):
            return NotImplemented

    def __hash__(self):
        return hash((self.field.kind, self.v))

    def rational_value(self) -> Fraction | None:
        """The value as a Fraction if it lies in the prime subfield Q, else None."""
        return self.field.ops.rational_value(self.v)

    def __str__(self):
        return self.field.ops.fmt(self.v)

    def __repr__(self):
        return f"Scalar({self.field}, {self})"


def as_scalar(F: FieldSpec, x) -> Scalar:
    return F(x)


def field_arithmetic(op: str, a: Scalar, b) -> Scalar | bool:
    """Dispatch one of add/sub/mul/div/pow/eq on two scalars."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow":
        return a ** b
    if op == "eq":
        return a == b
    raise ValueError(f"unknown operation {op!r}")


def primitive_root(F: FieldSpec, k: int) -> Scalar:
    """zeta_m^(m/k), an element of exact multiplicative order k."""
    if k < 1:
        raise ValueError("k must be positive")
    if F.kind == "rationals" and k in (1, 2):
        return F(1 if k == 1 else -1)
    if F.kind != "cyclotomic":
        raise FieldError(f"{F} has no designated roots of unity")
    if F.m % k:
        raise FieldError(f"{k} does not divide the cyclotomic order {F.m}")
    return F.gen() ** (F.m // k)


def multiplicative_order(x: Scalar, bound: int = 1000) -> int | None:
    acc = x
    for j in range(1, bound + 1):
        if acc.is_one():
            return j
        acc = acc * x
    return None


# ---------------------------------------------------------------------------
# root extraction over the unit group (roots of unity times rationals)


def _rational_nth_roots(q: Fraction, n: int) -> list[Fraction]:
    if q == 0:
        return [Fraction(0)]

    def iroot(a: int) -> int | None:
        if a < 0:
            return None
        r = round(a ** (1.0 / n)) if a < 2**52 else _int_nth_root(a, n)
        for c in (r - 1, r, r + 1):
            if c >= 0 and c**n == a:
                return c
        r = _int_nth_root(a, n)
        return r if r**n == a else None

    num, den = q.numerator, q.denominator
    roots = []
    a, b = iroot(abs(num)), iroot(den)
    if a is None or b is None:
        return []
    r = Fraction(a, b)
    if num > 0:
        roots.append(r)
        if n % 2 == 0:
            roots.append(-r)
    elif n % 2 == 1:
        roots.append(-r)
    return roots


def _int_nth_root(a: int, n: int) -> int:
    lo, hi = 0, 1
    while hi**n <= a:
        hi *= 2
    while lo < hi - 1:
        mid = (lo + hi) // 2
        if mid**n <= a:
            lo = mid
        else:
            hi = mid
    return lo


def nth_roots(x: Scalar, n: int) -> list[Scalar]:
    """All n-th roots of x of the form (root of unity) * (rational) in x's field.

    The order of the list is canonical: smallest zeta exponent first, positive
    rational part before negative. For prime fields the search is exhaustive.
    Rational function fields are handled when x is a constant.
    """
    F = x.field
    if n == 1:
        return [x]
    if x.is_zero():
        return [x]
    if F.kind == "rationals":
        return [F(r) for r in _rational_nth_roots(x.v, n)]
    if F.kind == "prime":
        return [F(c) for c in range(1, F.p) if F(c) ** n == x]
    if F.kind == "cyclotomic":
        z = F.gen()
        out: list[Scalar] = []
        zinv_n = z ** (-n)
        shifted = x
        for j in range(F.m):
            q = shifted.rational_value()
            if q is not None:
                for c in _rational_nth_roots(q, n):
                    cand = F(c) * z**j
                    if cand not in out:
                        out.append(cand)
            shifted = shifted * zinv_n
        return out
    if F.kind == "rational_functions":
        q = x.rational_value()
        if q is None:
            num, den = x.v
            if len(den) == 1 and len(num) == 1:
                return [F(r) for r in nth_roots(num[0], n)]
            if len(den) == 1 and all(c.is_zero() for c in num[:-1]):
                k = len(num) - 1
                if k % n == 0:
                    g = F.gen() ** (k // n)
                    return [F(r) * g for r in nth_roots(num[-1], n)]
            return []
        return [F(r) for r in nth_roots(F.base(q), n)]
    raise FieldError(f"no root extraction in {F}")


def canonical_root(x: Scalar, n: int) -> Scalar:
    roots = nth_roots(x, n)
    if not roots:
        raise FieldError(f"no {n}-th root of {x} found in {x.field}")
    return roots[0]


# ---------------------------------------------------------------------------
# JSON literals


def field_to_json(F: FieldSpec) -> dict:
    if F.kind == "rationals":
        return {"kind": "rationals"}
    if F.kind == "cyclotomic":
        return {"kind": "cyclotomic", "m": F.m}
    if F.kind == "prime":
        return {"kind": "prime", "p": F.p}
    return {"kind": "rational_functions", "base": field_to_json(F.base), "var": F.var}


def field_from_json(obj) -> FieldSpec:
    if obj is None:
        return rationals()
    kind = obj.get("kind", "rationals")
    if kind == "rationals":
        return rationals()
    if kind == "cyclotomic":
        return cyclotomic(int(obj["m"]))
    if kind in ("prime", "prime-field"):
        return prime_field(int(obj["p"]))
    if kind in ("rational_functions", "rational-functions"):
        return rational_functions(field_from_json(obj["base"]), obj.get("var", "q"))
    raise ValueError(f"unknown field kind {kind!r}")


def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def scalar_to_json(x: Scalar):
    F = x.field
    if F.kind == "rationals":
        return _frac_str(x.v)
    if F.kind == "prime":
        return str(x.v)
    if F.kind == "cyclotomic":
        return {"zeta_order": F.m, "coeffs": [_frac_str(c) for c in x.v]}
    num, den = x.v
    return {"num": [scalar_to_json(c) for c in num], "den": [scalar_to_json(c) for c in den]}


def scalar_from_json(F: FieldSpec, obj) -> Scalar:
    if isinstance(obj, (int, str)):
        if F.kind == "rationals" or F.kind == "prime":
            return F(Fraction(obj) if isinstance(obj, str) else obj)
        return F(Fraction(obj))
    if isinstance(obj, dict):
        if "zeta_order" in obj:
            if F.kind != "cyclotomic":
                raise FieldMismatch(f"cyclotomic literal used in {F}")
            m = int(obj["zeta_order"])
            coeffs = [Fraction(c) for c in obj["coeffs"]]
            if m != F.m:
                if F.m % m:
                    raise FieldMismatch(f"zeta_{m} is not available in {F}")
                step = F.m // m
                spread = [Fraction(0)] * (len(coeffs) * step)
                for k, c in enumerate(coeffs):
                    spread[k * step] = c
                coeffs = spread
            return F.from_coeffs(coeffs)
        if "num" in obj:
            if F.kind != "rational_functions":
                raise FieldMismatch(f"rational function literal used in {F}")
            num = [scalar_from_json(F.base, c) for c in obj["num"]]
            den = [scalar_from_json(F.base, c) for c in obj.get("den", [1])]
            return F.ratfunc(num, den)
    raise ValueError(f"cannot parse scalar literal {obj!r}")


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)
