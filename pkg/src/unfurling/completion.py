"""Truncated completions and the isomorphism between the unfurled KLR algebra
and the completed KLR algebra, checked on polynomial representations.

Two modules share one index set, the tuples ``comp`` of unfurled vertices
(i_k, u_k):

* the completed representation of the base algebra, where each component is a
  power series ring in t_k = z_k - u_k;
* the completed representation of the unfurled algebra (geometric parameters),
  where each component is a power series ring in its own dots.

Vectors are truncated m-adically (by total degree) and carry their own
precision; only a crossing between two strands with the same label and the
same eigenvalue loses an order.  The elements y^(1/d), A_k and the eigenspace
idempotents are also exposed as exact operators on box-truncated components.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from typing import Sequence

from .cartan_graph import CartanDatum, vertex_label
from .klr_rep import PolyVec, _psi_poly, monomials, relation_instances
from .params import ParamPack, geometric_pack
from .polys import Poly
from .report import PreconditionError, Report
from .scalars import FieldSpec, Scalar
from .series import inverse, one_plus, root_series
from .unfurl import Spectra, build_unfurled

VARIANTS = ("transport", "literal")


# ---------------------------------------------------------------------------
# eigenspace splitting on the polynomial representation


def _upoly_mul(a: list, b: list) -> list:
    out = [a[0].field.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def _upoly_mod(a: list, m: list) -> list:
    """Remainder modulo a monic polynomial m."""
    a = list(a)
    dm = len(m) - 1
    for top in range(len(a) - 1, dm - 1, -1):
        c = a[top]
        if c.is_zero():
            continue
        for k in range(dm + 1):
            a[top - dm + k] = a[top - dm + k] - c * m[k]
    out = a[:dm] if len(a) > dm else a
    while len(out) > 1 and out[-1].is_zero():
        out.pop()
    return out or [m[0].field.zero()]


def _linear_power(F: FieldSpec, u: Scalar, N: int) -> list:
    """(z - u)^N as a coefficient list."""
    out = [F.one()]
    for _ in range(N):
        out = _upoly_mul(out, [-u, F.one()])
    return out


def eigen_modulus(F: FieldSpec, values: Sequence[Scalar], N: int) -> list:
    """prod_u (z - u)^N."""
    out = [F.one()]
    for u in values:
        out = _upoly_mul(out, _linear_power(F, u, N))
    return out


def _taylor(coeffs: list, u: Scalar, N: int) -> list:
    """Coefficients of f(u + s) in s, truncated below s^N."""
    F = u.field
    out = [F.zero()] * N
    for e, c in enumerate(coeffs):
        if c.is_zero():
            continue
        # (u + s)^e = sum binom(e, m) u^(e-m) s^m
        binom = 1
        for m in range(min(e, N - 1) + 1):
            out[m] = out[m] + c * binom * u ** (e - m)
            binom = binom * (e - m) // (m + 1)
    return out


def crt_idempotents(F: FieldSpec, values: Sequence[Scalar], N: int) -> dict:
    """e_u with e_u = 1 mod (z-u)^N and 0 mod (z-v)^N for v != u (coefficient lists)."""
    if len(set(values)) != len(values):
        raise ValueError("repeated eigenvalues")
    M = eigen_modulus(F, values, N)
    out = {}
    for u in values:
        Mu = eigen_modulus(F, [v for v in values if v != u], N)
        # inverse of Mu(u + s) mod s^N, then shift back to z
        t = _taylor(Mu, u, N)
        inv = [F.zero()] * N
        inv[0] = t[0].inverse()
        for m in range(1, N):
            acc = F.zero()
            for j in range(1, m + 1):
                acc = acc + t[j] * inv[m - j]
            inv[m] = -acc * inv[0]
        back = [F.zero()]
        for m in range(N - 1, -1, -1):
            back = _upoly_mul(back, [-u, F.one()])
            back[0] = back[0] + inv[m]
        out[u] = _upoly_mod(_upoly_mul(Mu, back), M)
    return out


def check_idempotents(F: FieldSpec, values: Sequence[Scalar], N: int) -> Report:
    rep = Report()
    M = eigen_modulus(F, values, N)
    es = crt_idempotents(F, values, N)
    total = [F.zero()]
    for e in es.values():
        total = [a + b for a, b in itertools.zip_longest(total, e, fillvalue=F.zero())]
    rep.add("eps_complete", _upoly_mod(total, M) == [F.one()])
    for u, e in es.items():
        rep.add(f"eps_idempotent[{u}]", _upoly_mod(_upoly_mul(e, e), M) == e)
        for v, f in es.items():
            if v != u:
                rep.add(f"eps_orthogonal[{u},{v}]", all(c.is_zero() for c in _upoly_mod(_upoly_mul(e, f), M)))
    return rep


def decompose(v: PolyVec, spectra: Spectra, N: int) -> dict:
    """Taylor components f(u + t) of each label's polynomial, box-truncated at N per strand."""
    out = {}
    F = spectra.field
    for lab, f in v.parts.items():
        n = len(lab)
        for us in itertools.product(*(spectra.values(i) for i in lab)):
            vals = []
            for k, u in enumerate(us):
                e = [0] * n
                e[k] = 1
                vals.append(Poly.from_dict(F, n, {(0,) * n: u, tuple(e): 1}))
            g = f.substitute(vals, box=(N,) * n)
            if not g.is_zero():
                out[tuple(zip(lab, us))] = g
    return out


def recompose(parts: dict, spectra: Spectra, N: int) -> PolyVec:
    """Inverse of decompose modulo the eigenvalue ideal: sum of prod e_{u_k}(z_k) * T(z - u)."""
    F = spectra.field
    idem = {}
    out = PolyVec(0)
    for comp, g in parts.items():
        n = len(comp)
        out.n = n
        lab = tuple(i for i, _u in comp)
        term = Poly.const(F, n, 1)
        vals = []
        for k, (i, u) in enumerate(comp):
            if i not in idem:
                idem[i] = crt_idempotents(F, spectra.values(i), N)
            e = [0] * n
            coeffs = {}
            for p, c in enumerate(idem[i][u]):
                e = [0] * n
                e[k] = p
                coeffs[tuple(e)] = c
            term = term * Poly.from_dict(F, n, coeffs)
            e = [0] * n
            e[k] = 1
            vals.append(Poly.from_dict(F, n, {(0,) * n: -u, tuple(e): 1}))
        piece = PolyVec(n, {lab: term * g.substitute(vals)})
        out = out + piece
    return reduce_vec(out, spectra, N)


def reduce_vec(v: PolyVec, spectra: Spectra, N: int) -> PolyVec:
    """Reduce each variable modulo prod_{u in U_i} (z - u)^N."""
    F = spectra.field
    parts = {}
    for lab, f in v.parts.items():
        n = len(lab)
        mods = [eigen_modulus(F, spectra.values(i), N) for i in lab]
        acc = Poly(F, n)
        for e, c in f.items():
            term = Poly.const(F, n, c)
            for k, a in enumerate(e):
                z = [F.zero()] * a + [F.one()]
                r = _upoly_mod(z, mods[k])
                coeffs = {}
                for p, x in enumerate(r):
                    if not x.is_zero():
                        ee = [0] * n
                        ee[k] = p
                        coeffs[tuple(ee)] = x
                term = term * Poly.from_dict(F, n, coeffs)
            acc = acc + term
        if not acc.is_zero():
            parts[lab] = acc
    return PolyVec(v.n, parts)


# ---------------------------------------------------------------------------
# box-truncated components and exact operators


@dataclass(frozen=True)
class TruncatedComponent:
    label: tuple  # ((i_1, u_1), ..., (i_n, u_n))
    precision: tuple  # per-strand truncation orders

    def __post_init__(self):
        if len(self.precision) != len(self.label) or any(N < 1 for N in self.precision):
            raise ValueError("one positive precision per strand required")

    @property
    def n(self) -> int:
        return len(self.label)

    def basis(self) -> list[tuple]:
        return list(itertools.product(*(range(N) for N in self.precision)))

    @property
    def dimension(self) -> int:
        out = 1
        for N in self.precision:
            out *= N
        return out


@dataclass
class TruncatedOperator:
    source: TruncatedComponent
    target: TruncatedComponent
    images: dict  # basis exponent -> Poly on the target (box-truncated)
    guaranteed: tuple

    @classmethod
    def multiplication(cls, comp: TruncatedComponent, S: Poly) -> "TruncatedOperator":
        box = comp.precision
        F = S.field
        images = {b: S.mul(Poly.monomial(F, b), box=box) for b in comp.basis()}
        return cls(comp, comp, images, box)

    @classmethod
    def identity(cls, comp: TruncatedComponent, F: FieldSpec) -> "TruncatedOperator":
        return cls.multiplication(comp, Poly.const(F, comp.n, 1))

    def __matmul__(self, other: "TruncatedOperator") -> "TruncatedOperator":
        """self after other."""
        if other.target != self.source:
            raise ValueError("operator composition across mismatched components")
        images = {}
        for b, img in other.images.items():
            acc = None
            for e, c in img.items():
                piece = self.images[e].scale(c)
                acc = piece if acc is None else acc + piece
            images[b] = acc if acc is not None else Poly(img.field, self.target.n)
        guar = tuple(min(a, b) for a, b in zip(self.guaranteed, other.guaranteed))
        return TruncatedOperator(other.source, self.target, images, guar)

    def __sub__(self, other: "TruncatedOperator") -> "TruncatedOperator":
        images = {b: self.images[b] - other.images[b] for b in self.images}
        return TruncatedOperator(self.source, self.target, images, self.guaranteed)

    def power(self, k: int) -> "TruncatedOperator":
        F = next(iter(self.images.values())).field
        acc = TruncatedOperator.identity(self.source, F)
        for _ in range(k):
            acc = self @ acc
        return acc

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.images.values())

    def __eq__(self, other):
        if not isinstance(other, TruncatedOperator):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.images == other.images

    def matrix(self) -> list[list[Scalar]]:
        cols = self.source.basis()
        rows = self.target.basis()
        return [[self.images[c].coeff(r) for c in cols] for r in rows]


def _strand_data(spectra: Spectra, label: tuple):
    ds = [int(spectra.d[i]) for i, _u in label]
    roots = [spectra.root(i, u) for i, u in label]
    return ds, roots


def dth_root(comp: TruncatedComponent, k: int, spectra: Spectra) -> TruncatedOperator:
    """Multiplication by r_k (1 + t_k/u_k)^(1/d): the d-th root of y_k = u_k + t_k."""
    F = spectra.field
    i, u = comp.label[k]
    d = int(spectra.d[i])
    r = spectra.root(i, u)
    w = root_series(F, comp.n, k, u, d, box=comp.precision)
    return TruncatedOperator.multiplication(comp, (w + 1).scale(r))


def _dot(F, n, k, u) -> Poly:
    e = [0] * n
    e[k] = 1
    return Poly.from_dict(F, n, {(0,) * n: u, tuple(e): 1})


def a_series(pack: ParamPack, spectra: Spectra, label: tuple, k: int, total=None, box=None, local=False):
    """A_k on the component as a series, and the matching fine roots.

    With ``local`` the dots' roots r(1 + w) are replaced by r(1 + x): the
    version living on the unfurled side.
    """
    F = pack.field
    n = len(label)
    (i, u), (j, v) = label[k], label[k + 1]
    ds, roots = _strand_data(spectra, label)
    if local:
        Yk = one_plus(F, n, k).scale(roots[k])
        Yl = one_plus(F, n, k + 1).scale(roots[k + 1])
    else:
        Yk = (root_series(F, n, k, u, ds[k], total, box) + 1).scale(roots[k])
        Yl = (root_series(F, n, k + 1, v, ds[k + 1], total, box) + 1).scale(roots[k + 1])
    A = Poly.const(F, n, pack.p_value(i, j))
    matches = []
    for a in pack.fine_roots(i, j):
        if roots[k] == a * roots[k + 1]:
            matches.append(a)
            A = A.scale(roots[k])
        else:
            A = A.mul(Yk - Yl.scale(a), total, box)
    return A, matches


def a_element(pack: ParamPack, spectra: Spectra, comp: TruncatedComponent, k: int):
    """(A_k, A_k^-1, matching fine roots) as exact operators on a box component."""
    A, matches = a_series(pack, spectra, comp.label, k, box=comp.precision)
    Ainv = inverse(A, box=comp.precision)
    return TruncatedOperator.multiplication(comp, A), TruncatedOperator.multiplication(comp, Ainv), matches


def check_parameter_factorization(pack: ParamPack, spectra: Spectra, comp: TruncatedComponent, k: int) -> Report:
    """P(y_k, y_k+1) = A_k prod_matching (w_k - w_k+1) and A A^-1 = 1, exactly on the box."""
    F = pack.field
    n = comp.n
    (i, u), (j, v) = comp.label[k], comp.label[k + 1]
    A, Ainv, matches = a_element(pack, spectra, comp, k)
    rep = Report()
    ident = TruncatedOperator.identity(comp, F)
    rep.add("a_inverse", A @ Ainv == ident and Ainv @ A == ident)
    P = pack.P[i, j].substitute([_dot(F, n, k, u), _dot(F, n, k + 1, v)], box=comp.precision)
    ds, _ = _strand_data(spectra, comp.label)
    diff = root_series(F, n, k, u, ds[k], box=comp.precision) - root_series(F, n, k + 1, v, ds[k + 1], box=comp.precision)
    rhs = TruncatedOperator.multiplication(comp, diff.pow(len(matches), box=comp.precision))
    rep.add("parameter_factorization", TruncatedOperator.multiplication(comp, P) == A @ rhs, matches=len(matches))
    return rep


def check_dth_root(comp: TruncatedComponent, k: int, spectra: Spectra) -> Report:
    F = spectra.field
    i, u = comp.label[k]
    d = int(spectra.d[i])
    T = dth_root(comp, k, spectra)
    rep = Report()
    z = TruncatedOperator.multiplication(comp, _dot(F, comp.n, k, u))
    rep.add("dth_root_power", T.power(d) == z)
    shifted = T - TruncatedOperator.multiplication(comp, Poly.const(F, comp.n, spectra.root(i, u)))
    rep.add("dth_root_nilpotent", shifted.power(comp.precision[k]).is_zero())
    return rep


# ---------------------------------------------------------------------------
# m-adically truncated vectors over all components


@dataclass
class Vec:
    parts: dict  # comp -> Poly, all terms of total degree < prec
    prec: int

    def __add__(self, other: "Vec") -> "Vec":
        p = min(self.prec, other.prec)
        out = {c: f.truncate(p) for c, f in self.parts.items()}
        for c, f in other.parts.items():
            g = f.truncate(p)
            if c in out:
                g = out[c] + g
            if g.is_zero():
                out.pop(c, None)
            else:
                out[c] = g
        return Vec({c: f for c, f in out.items() if not f.is_zero()}, p)

    def scale(self, c) -> "Vec":
        scaled = {k: f.scale(c) for k, f in self.parts.items()}
        return Vec({k: f for k, f in scaled.items() if not f.is_zero()}, self.prec)

    def project(self, comps) -> "Vec":
        return Vec({c: f for c, f in self.parts.items() if c in comps}, self.prec)

    def truncated(self, p: int) -> dict:
        return {c: f.truncate(p) for c, f in self.parts.items() if not f.truncate(p).is_zero()}

    def agrees(self, other: "Vec") -> tuple[bool, int]:
        p = min(self.prec, other.prec)
        return self.truncated(p) == other.truncated(p), p


def _lit(*letters):
    return tuple(letters)


class IsoContext:
    """Shared data for one (datum, pack, spectra, n) at a working precision."""

    def __init__(self, datum: CartanDatum, pack: ParamPack, spectra: Spectra, n: int, N: int, variant: str = "transport"):
        if variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        self.datum, self.pack, self.spectra, self.n, self.N = datum, pack, spectra, n, N
        self.variant = variant
        self.F = pack.field
        self.unfurled = build_unfurled(datum, pack, spectra)
        self.vertices = list(self.unfurled.graph.vertices)
        self.upack = geometric_pack(self.unfurled.graph, self.F)
        self.comps = list(itertools.product(self.vertices, repeat=n))
        self._cache: dict = {}

    # -- per-strand data ------------------------------------------------------

    def d(self, vertex) -> int:
        return int(self.datum.d[vertex[0]])

    def root(self, vertex) -> Scalar:
        return self.spectra.root(*vertex)

    def _memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def w(self, comp, k) -> Poly:
        """(1 + t_k/u_k)^(1/d) - 1 on the base side."""
        i, u = comp[k]
        return self._memo(("w", u, self.d(comp[k]), k), lambda: root_series(self.F, self.n, k, u, self.d(comp[k]), total=self.N))

    def t_of_local(self, comp, k) -> Poly:
        """t_k = u((1 + x_k)^d - 1) on the unfurled side."""
        i, u = comp[k]
        return self._memo(("t", u, self.d(comp[k]), k), lambda: one_plus(self.F, self.n, k).pow(self.d(comp[k])).scale(u) - u)

    def to_base(self, comp) -> list[Poly]:
        """Substitution x_k -> w_k(t)."""
        return [self.w(comp, k) for k in range(self.n)]

    def to_local(self, comp) -> list[Poly]:
        """Substitution t_k -> u((1 + x_k)^d - 1)."""
        return [self.t_of_local(comp, k) for k in range(self.n)]

    def z_base(self, comp) -> list[Poly]:
        return [_dot(self.F, self.n, k, comp[k][1]) for k in range(self.n)]

    def A(self, comp, k) -> Poly:
        return self._memo(("A", comp, k), lambda: a_series(self.pack, self.spectra, comp, k, total=self.N)[0])

    def A_inv(self, comp, k) -> Poly:
        return self._memo(("Ainv", comp, k), lambda: inverse(self.A(comp, k), total=self.N))

    def A_local(self, comp, k) -> Poly:
        return self._memo(("Aloc", comp, k), lambda: a_series(self.pack, self.spectra, comp, k, total=self.N, local=True)[0])

    def matches(self, comp, k) -> int:
        return len(a_series(self.pack, self.spectra, comp, k, total=1, local=True)[1])

    def G(self, comp, k) -> Poly:
        """u sum_a (1+w_{k+1})^a (1+w_k)^(d-1-a): ratio of t- and w-differences."""

        def make():
            d, u = self.d(comp[k]), comp[k][1]
            a, b = self.w(comp, k) + 1, self.w(comp, k + 1) + 1
            acc = Poly(self.F, self.n)
            for m in range(d):
                acc = acc + b.pow(m, total=self.N).mul(a.pow(d - 1 - m, total=self.N), total=self.N)
            return acc.scale(u)

        return self._memo(("G", comp, k), make)

    def G_local_inv(self, comp, k) -> Poly:
        def make():
            d, u = self.d(comp[k]), comp[k][1]
            a, b = one_plus(self.F, self.n, k), one_plus(self.F, self.n, k + 1)
            acc = Poly(self.F, self.n)
            for m in range(d):
                acc = acc + b.pow(m) * a.pow(d - 1 - m)
            return inverse(acc.scale(u), total=self.N)

        return self._memo(("Gli", comp, k), make)

    def D_local_inv(self, comp, k) -> Poly:
        """1 / (u_{k+1}(1+x_{k+1})^d - u_k(1+x_k)^d)."""

        def make():
            d = self.d(comp[k])
            D = one_plus(self.F, self.n, k + 1).pow(d).scale(comp[k + 1][1]) - one_plus(self.F, self.n, k).pow(d).scale(comp[k][1])
            return inverse(D, total=self.N)

        return self._memo(("Dli", comp, k), make)

    def swap(self, comp, k) -> tuple:
        c = list(comp)
        c[k], c[k + 1] = c[k + 1], c[k]
        return tuple(c)

    def over(self, label) -> set:
        label = tuple(label)
        return {c for c in self.comps if tuple(v[0] for v in c) == label}

    # -- images of generators as expressions -----------------------------------

    def nu_image(self, letter, comp) -> list:
        """Expression (base-side letters, t-series) for nu(letter e_comp)."""
        eps = ("eps", comp)
        if letter[0] == "eps":
            return [(1, _lit(eps))]
        if letter[0] == "y":
            k = letter[1] - 1
            return [(1, _lit(("ser", {comp: self.w(comp, k)}), eps))]
        k = letter[1] - 1
        (i, u), (j, v) = comp[k], comp[k + 1]
        psi = ("psi", letter[1])
        if i != j:
            tgt = self.swap(comp, k)
            return [(1, _lit(("ser", {tgt: self.A_inv(tgt, k)}), psi, eps))]
        if u != v:
            return [
                (1, _lit(("y", k + 2), psi, eps)),
                (-1, _lit(("y", k + 1), psi, eps)),
                (1, _lit(eps)),
            ]
        if self.variant == "literal":
            return [(1, _lit(psi, eps))]
        return [(1, _lit(("ser", {comp: self.G(comp, k)}), psi, eps))]

    def nu_inverse_image(self, letter, comp) -> list:
        """Expression (unfurled-side letters, local series) for nu^-1(letter eps_comp)."""
        eps = ("eps", comp)
        F, n = self.F, self.n
        if letter[0] == "eps":
            return [(1, _lit(eps))]
        if letter[0] == "y":
            k = letter[1] - 1
            y = one_plus(F, n, k).pow(self.d(comp[k])).scale(comp[k][1])
            return [(1, _lit(("ser", {comp: y}), eps))]
        k = letter[1] - 1
        (i, u), (j, v) = comp[k], comp[k + 1]
        psi = ("psi", letter[1])
        tgt = self.swap(comp, k)
        if i != j:
            return [(1, _lit(("ser", {tgt: self.A_local(tgt, k)}), psi, eps))]
        if u != v:
            return [
                (1, _lit(("ser", {tgt: self.D_local_inv(tgt, k)}), psi, eps)),
                (-1, _lit(("ser", {comp: self.D_local_inv(comp, k)}), eps)),
            ]
        if self.variant == "literal":
            return [(1, _lit(psi, eps))]
        return [(1, _lit(("ser", {comp: self.G_local_inv(comp, k)}), psi, eps))]


# ---------------------------------------------------------------------------
# the four ways of acting


class _Rep:
    def __init__(self, ctx: IsoContext):
        self.ctx = ctx

    def run(self, expr: list, v: Vec) -> Vec:
        total = None
        for c, letters in expr:
            cur = v
            for letter in reversed(letters):
                cur = self.apply(letter, cur)
                if not cur.parts:
                    break
            cur = cur.scale(c)
            total = cur if total is None else total + cur
        return total if total is not None else Vec({}, v.prec)

    def apply(self, letter, v: Vec) -> Vec:
        kind = letter[0]
        if kind == "eps":
            return v.project({letter[1]})
        if kind == "e":
            return v.project(self.label_comps(letter[1]))
        if kind == "ser":
            table = letter[1]
            return self._mult(v, lambda c: self.series(table, c))
        if kind == "y":
            return self._mult(v, lambda c: self.dot(c, letter[1] - 1))
        if kind == "poly":
            return self._mult(v, lambda c: self.poly(letter[1], c))
        if kind == "psi":
            return self.psi(letter[1] - 1, v)
        raise ValueError(f"unknown letter {letter!r}")

    def _mult(self, v: Vec, factor) -> Vec:
        out = {}
        for c, f in v.parts.items():
            S = factor(c)
            if S is None:
                continue
            g = f.mul(S, total=v.prec)
            if not g.is_zero():
                out[c] = g
        return Vec(out, v.prec)

    def series(self, table, c):
        return table.get(c)


class BaseRep(_Rep):
    """The base algebra on the completed polynomial representation (variables t)."""

    def label_comps(self, label):
        return self.ctx.over(label)

    def dot(self, c, k):
        return self.ctx.z_base(c)[k]

    def poly(self, f, c):
        return f.substitute(self.ctx.z_base(c), total=self.ctx.N)

    def psi(self, k, v: Vec) -> Vec:
        ctx = self.ctx
        out = Vec({}, v.prec)
        for c, f in v.parts.items():
            (i, u), (j, w) = c[k], c[k + 1]
            tgt = ctx.swap(c, k)
            if i != j:
                P = ctx._memo(("Pz", tgt, k), lambda: ctx.pack.P[j, i].substitute(ctx.z_base(tgt)[k : k + 2]))
                piece = Vec({tgt: P.mul(f.swap(k), total=v.prec)}, v.prec)
            elif u != w:
                inv_t = ctx._memo(("zd", tgt, k), lambda: inverse(ctx.z_base(tgt)[k + 1] - ctx.z_base(tgt)[k], total=ctx.N))
                inv_c = ctx._memo(("zd", c, k), lambda: inverse(ctx.z_base(c)[k + 1] - ctx.z_base(c)[k], total=ctx.N))
                piece = Vec({tgt: f.swap(k).mul(inv_t, total=v.prec)}, v.prec) + Vec({c: f.mul(inv_c, total=v.prec).scale(-1)}, v.prec)
            else:
                piece = Vec({c: f.divided_difference(k)}, v.prec - 1)
            out = out + piece
        return out


class UnfurledRep(_Rep):
    """The unfurled algebra (geometric parameters) on its completed representation."""

    def label_comps(self, label):
        return {tuple(label)}

    def dot(self, c, k):
        return self.ctx._memo(("x", k), lambda: Poly.var(self.ctx.F, self.ctx.n, k))

    def poly(self, f, c):
        return f

    def psi(self, k, v: Vec) -> Vec:
        out = Vec({}, v.prec)
        for c, f in v.parts.items():
            new, g = _psi_poly(self.ctx.upack, c, k, f)
            loss = 1 if c[k] == c[k + 1] else 0
            out = out + Vec({new: g.truncate(v.prec - loss)} if not g.is_zero() else {}, v.prec - loss)
        return out


class NuRep(_Rep):
    """Unfurled-algebra letters acting on the base module through nu."""

    def __init__(self, ctx):
        super().__init__(ctx)
        self.base = BaseRep(ctx)

    def label_comps(self, label):
        return {tuple(label)}

    def dot(self, c, k):
        return self.ctx.w(c, k)

    def series(self, table, c):
        S = table.get(c)
        return None if S is None else S.substitute(self.ctx.to_base(c), total=self.ctx.N)

    def poly(self, f, c):
        return self.ctx._memo(("nupoly", f, c), lambda: f.substitute(self.ctx.to_base(c), total=self.ctx.N))

    def psi(self, k, v: Vec) -> Vec:
        out = Vec({}, v.prec)
        for c in v.parts:
            out = out + self.base.run(self.ctx.nu_image(("psi", k + 1), c), v.project({c}))
        return out


class NuInvRep(_Rep):
    """Base-algebra letters acting on the unfurled module through nu^-1."""

    def __init__(self, ctx):
        super().__init__(ctx)
        self.base = UnfurledRep(ctx)

    def label_comps(self, label):
        return self.ctx.over(label)

    def dot(self, c, k):
        ctx = self.ctx
        return ctx._memo(("ydot", c[k], k), lambda: one_plus(ctx.F, ctx.n, k).pow(ctx.d(c[k])).scale(c[k][1]))

    def series(self, table, c):
        S = table.get(c)
        return None if S is None else S.substitute(self.ctx.to_local(c), total=self.ctx.N)

    def poly(self, f, c):
        ctx = self.ctx
        zs = [self.dot(c, k) for k in range(ctx.n)]
        return f.substitute(zs, total=ctx.N)

    def psi(self, k, v: Vec) -> Vec:
        out = Vec({}, v.prec)
        for c in v.parts:
            out = out + self.base.run(self.ctx.nu_inverse_image(("psi", k + 1), c), v.project({c}))
        return out


# ---------------------------------------------------------------------------
# identity checking


def _count_psi(expr: list) -> int:
    return max((sum(1 for l in w if l[0] == "psi") for _c, w in expr), default=0)


def _digest(vecs: list) -> str:
    h = hashlib.sha256()
    for parts in vecs:
        for c in sorted(parts, key=str):
            h.update(str(c).encode())
            h.update(str(parts[c]).encode())
        h.update(b"|")
    return h.hexdigest()[:16]


@dataclass
class IdentityResult:
    name: str
    passed: bool
    certified_precision: int
    digest: str
    witness: dict | None = None


def check_identity(name, lhs, rhs, lhs_rep, rhs_rep, comp, n, N_out, extra, F, transform=None) -> IdentityResult:
    """Compare two expressions on every monomial of the component below the working precision.

    ``transform`` (optional) maps the input vector before it is fed to rhs_rep
    and maps rhs outputs back (used for intertwining checks).
    """
    L = max(_count_psi(lhs), _count_psi(rhs))
    N_work = N_out + L + extra
    cert = None
    outs = []
    witness = None
    for e in monomials(n, N_work - 1):
        v = Vec({comp: Poly.monomial(F, e)}, N_work)
        lv = lhs_rep.run(lhs, v)
        if transform is None:
            rv = rhs_rep.run(rhs, v)
        else:
            rv = transform[1](rhs_rep.run(rhs, transform[0](v)))
        ok, p = lv.agrees(rv)
        cert = p if cert is None else min(cert, p)
        if not ok and witness is None:
            witness = {"component": comp, "monomial": e, "lhs": {str(c): str(f) for c, f in lv.truncated(p).items()}, "rhs": {str(c): str(f) for c, f in rv.truncated(p).items()}}
        if sum(e) < N_out:
            outs.append(lv.truncated(N_out))
    cert = N_work if cert is None else cert
    passed = witness is None and cert >= N_out
    return IdentityResult(name, passed, cert, _digest(outs), witness)


def _expr_of(el, comp) -> list:
    return [(c, tuple(w) + (("eps", comp),)) for c, w in el.terms]


def verify_iso(
    datum: CartanDatum,
    pack: ParamPack,
    spectra: Spectra,
    n: int,
    N_out: int,
    extra: int = 0,
    variant: str = "transport",
    components: Sequence | None = None,
) -> Report:
    """Relations of the unfurled algebra on nu-images, both roundtrips,
    intertwining, and the box identities for y^(1/d), A_k and idempotents."""
    if N_out < 1:
        raise PreconditionError("precision must be positive")
    N_series = N_out + 3 + extra
    ctx = IsoContext(datum, pack, spectra, n, N_series, variant)
    F = ctx.F
    comps = ctx.comps if components is None else [tuple(c) for c in components]
    base, unf, nu, nuinv = BaseRep(ctx), UnfurledRep(ctx), NuRep(ctx), NuInvRep(ctx)
    results: list[IdentityResult] = []

    def to_base_vec(v: Vec) -> Vec:
        return Vec({c: f.substitute(ctx.to_base(c), total=v.prec) for c, f in v.parts.items()}, v.prec)

    def to_local_vec(v: Vec) -> Vec:
        return Vec({c: f.substitute(ctx.to_local(c), total=v.prec) for c, f in v.parts.items()}, v.prec)

    gens = [("eps",)] + [("y", k) for k in range(1, n + 1)] + [("psi", k) for k in range(1, n)]
    for comp in comps:
        cname = "(" + ",".join(vertex_label(v) for v in comp) + ")"
        for family, lhs, rhs in relation_instances(ctx.upack, comp):
            results.append(check_identity(f"relation:{family}:{cname}", _expr_of(lhs, comp), _expr_of(rhs, comp), nu, nu, comp, n, N_out, extra, F))
        for g in gens:
            gname = g[0] if len(g) == 1 else f"{g[0]}{g[1]}"
            own = [(1, _lit(*([g] if len(g) > 1 else []), ("eps", comp)))]
            # nu^-1 nu = id on the unfurled side
            results.append(check_identity(f"roundtrip_unfurled:{gname}:{cname}", ctx.nu_image(g, comp), own, nuinv, unf, comp, n, N_out, extra, F))
            # nu nu^-1 = id on the base side
            results.append(check_identity(f"roundtrip_base:{gname}:{cname}", ctx.nu_inverse_image(g, comp), own, nu, base, comp, n, N_out, extra, F))
            # nu(g) after the module isomorphism equals the isomorphism after g
            results.append(
                check_identity(f"intertwining:{gname}:{cname}", own, own, nu, unf, comp, n, N_out, extra, F, transform=(to_local_vec, to_base_vec))
            )

    rep = Report()
    families: dict = {}
    for r in results:
        fam = r.name.split(":")[0] + (":" + r.name.split(":")[1] if r.name.startswith("relation") else "")
        families.setdefault(fam, []).append(r)
    for fam, rs in sorted(families.items()):
        bad = [r for r in rs if not r.passed]
        rep.add(
            fam,
            not bad,
            instances=len(rs),
            certified_precision=min(r.certified_precision for r in rs),
            failures=[{"identity": r.name, "certified_precision": r.certified_precision, "witness": r.witness} for r in bad[:5]],
        )

    # box identities at the working precision
    Nb = N_out + extra
    box_results = Report()
    for vtx in ctx.vertices:
        box_results.extend(check_dth_root(TruncatedComponent((vtx,), (Nb,)), 0, spectra))
    for comp in comps:
        for k in range(n - 1):
            if comp[k][0] != comp[k + 1][0]:
                box_results.extend(check_parameter_factorization(pack, spectra, TruncatedComponent(comp, (Nb,) * n), k))
                edges = sum(1 for e in ctx.unfurled.graph.edges if e.src == comp[k] and e.tgt == comp[k + 1])
                box_results.add("matching_count", ctx.matches(comp, k) == edges)
    for i in datum.index:
        if spectra.values(i):
            box_results.extend(check_idempotents(F, spectra.values(i), Nb))
    grouped: dict = {}
    for c in box_results.checks:
        grouped.setdefault(c.name.split("[")[0], []).append(c.passed)
    for name, oks in sorted(grouped.items()):
        rep.add(name, all(oks), instances=len(oks), certified_precision=Nb)

    rep.meta["certified_precision"] = min((r.certified_precision for r in results), default=N_out)
    rep.meta["precision_requested"] = N_out
    rep.meta["extra_precision"] = extra
    rep.meta["variant"] = variant
    rep.meta["digests"] = {r.name: r.digest for r in results}
    return rep
