"""KLR parameter polynomials P_ij, Q_ij and their root data.

P_ij(u, v) is a bivariate polynomial (variables u = x1, v = x2) and
Q_ij(u, v) = P_ij(u, v) * P_ji(v, u).  The coarse roots of P_ij are the roots
of P_ij(x^(1/h_ij), 1), so that P_ij(u, v) = p_ij * prod (u^h_ij - a v^h_ji).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Mapping, Sequence

from .cartan_graph import CartanDatum, Edge, ValuedGraph, cartan_matrix, vertex_label
from .polys import Poly
from .report import Report
from .scalars import (
    FieldError,
    FieldSpec,
    Scalar,
    field_from_json,
    field_to_json,
    nth_roots,
    rationals,
    scalar_from_json,
    scalar_to_json,
)


class ParamError(ValueError):
    pass


class CannotFactor(ParamError):
    """Coarse roots could not be found in the field; supply them explicitly."""


# -- univariate helpers (coefficient lists, lowest degree first) ---------------


def _trim(c: list) -> list:
    while c and c[-1].is_zero():
        c.pop()
    return c


def _synthetic_div(coeffs: list, r: Scalar) -> tuple[list, Scalar]:
    """Divide by (x - r): quotient and remainder."""
    n = len(coeffs) - 1
    q = [None] * n
    acc = coeffs[n]
    for k in range(n - 1, -1, -1):
        q[k] = acc
        acc = coeffs[k] + acc * r
    return q, acc


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    k = 1
    while k * k <= n:
        if n % k == 0:
            small.append(k)
            if k * k != n:
                large.append(n // k)
        k += 1
    return small + large[::-1]


def _rational_roots(coeffs: Sequence[Fraction]) -> list[Fraction]:
    """Distinct nonzero rational roots by the rational root theorem."""
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    while c and c[0] == 0:
        c.pop(0)
    if len(c) < 2:
        return []
    den = 1
    for x in c:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in c]
    out = []
    for a in _divisors(ints[0]):
        for b in _divisors(ints[-1]):
            for s in (1, -1):
                r = Fraction(s * a, b)
                if r in out:
                    continue
                if sum(x * r**k for k, x in enumerate(c)) == 0:
                    out.append(r)
    return out


def _candidates(coeffs: list) -> list[Scalar]:
    """Possible roots of a univariate polynomial in the unit group of its field."""
    F = coeffs[0].field
    if F.kind == "prime":
        return [F(c) for c in range(1, F.p)]
    if F.kind == "rationals":
        return [F(r) for r in _rational_roots([c.v for c in coeffs])]
    if F.kind == "cyclotomic":
        z = F.gen()
        out = []
        for j in range(F.m):
            zj = z**j
            shifted = [c * zj**k for k, c in enumerate(coeffs)]
            # a rational c with f(zeta^j c) = 0 is a root of every coordinate polynomial
            for coord in range(len(F.ops.zero())):
                poly = [s.v[coord] for s in shifted]
                if any(poly):
                    for r in _rational_roots(poly):
                        cand = F(r) * zj
                        if cand not in out:
                            out.append(cand)
                    break
        return out
    return []


def solve_univariate(coeffs: Sequence[Scalar]) -> list[Scalar]:
    """Roots with multiplicity when the polynomial splits over the unit group.

    Raises CannotFactor otherwise.
    """
    c = _trim(list(coeffs))
    if not c:
        raise ParamError("zero polynomial has no finite root multiset")
    roots: list[Scalar] = []
    while len(c) > 1 and c[0].is_zero():
        roots.append(c[0].field.zero())
        c = c[1:]
    cands = None
    while len(c) > 1:
        if len(c) == 2:
            roots.append(-c[0] / c[1])
            break
        if cands is None:
            cands = _candidates(c)
        for r in cands:
            q, rem = _synthetic_div(c, r)
            if rem.is_zero():
                roots.append(r)
                c = q
                break
        else:
            raise CannotFactor(f"polynomial of degree {len(c) - 1} does not split over the unit group")
    return roots


# -- the parameter pack ---------------------------------------------------------


def bivar_from_monomials(F: FieldSpec, monomials: Mapping) -> Poly:
    return Poly.from_dict(F, 2, monomials)


def swap_uv(P: Poly) -> Poly:
    return P.swap(0)


@dataclass
class ParamPack:
    """Parameter polynomials P_ij for every ordered pair of distinct indices."""

    datum: CartanDatum
    field: FieldSpec
    P: dict
    supplied_roots: dict = field(default_factory=dict)
    supplied_fine: dict = field(default_factory=dict)

    def __post_init__(self):
        idx = self.datum.index
        full = {}
        for i in idx:
            for j in idx:
                if i != j:
                    p = self.P.get((i, j))
                    full[i, j] = p if p is not None else Poly.const(self.field, 2, 1)
                    if full[i, j].field != self.field:
                        raise ParamError(f"P_{i}{j} lives over {full[i, j].field}, not {self.field}")
        self.P = full
        self._roots: dict = {}
        self._fine: dict = {}

    @property
    def index(self) -> list:
        return self.datum.index

    def pairs(self):
        for i in self.index:
            for j in self.index:
                if i != j:
                    yield i, j

    def Q(self, i, j) -> Poly:
        if i == j:
            return Poly.zero(self.field, 2)
        return self.P[i, j] * swap_uv(self.P[j, i])

    def p_value(self, i, j) -> Scalar:
        """P_ij(1, 0)."""
        return self.P[i, j].evaluate([1, 0])

    def t(self, i, j) -> Scalar:
        """Q_ij(1, 0)."""
        return self.Q(i, j).evaluate([1, 0])

    def g(self, i, j) -> int:
        return gcd(-self.datum.c[i, j], -self.datum.c[j, i])

    def h(self, i, j) -> int:
        """-c_ij / g_ij; taken to be 1 for orthogonal pairs."""
        g = self.g(i, j)
        return -self.datum.c[i, j] // g if g else 1

    def lcm_degree(self, i, j) -> int:
        """d_i * h_ij (= d_j * h_ji)."""
        return int(self.datum.d[i] * self.h(i, j))

    def substituted(self, i, j) -> list[Scalar]:
        """Coefficients of P_ij(x^(1/h_ij), 1) in x, lowest first."""
        h = self.h(i, j)
        coeffs: dict[int, Scalar] = {}
        for (a, _b), c in self.P[i, j].items():
            if a % h:
                raise ParamError(f"P_{i}{j}(x^(1/{h}), 1) has a non-integral exponent {a}/{h}")
            coeffs[a // h] = coeffs.get(a // h, self.field.zero()) + c
        top = max(coeffs, default=0)
        return [coeffs.get(k, self.field.zero()) for k in range(top + 1)]

    def coarse_roots(self, i, j) -> list[Scalar]:
        """The multiset of roots of P_ij(x^(1/h_ij), 1) (supplied or solved)."""
        if (i, j) not in self._roots:
            if (i, j) in self.supplied_roots:
                roots = [self.field(a) for a in self.supplied_roots[i, j]]
                self._check_expansion(i, j, roots, raise_on_fail=True)
            else:
                roots = solve_univariate(self.substituted(i, j))
            self._roots[i, j] = roots
        return list(self._roots[i, j])

    def reciprocal_roots(self, i, j) -> list[Scalar]:
        """{1/a : a a coarse root of P_ji}."""
        return [a.inverse() for a in self.coarse_roots(j, i) if not a.is_zero()]

    def _check_expansion(self, i, j, roots, raise_on_fail=False) -> bool:
        F = self.field
        prod = [self.p_value(i, j)]
        for a in roots:
            nxt = [F.zero()] * (len(prod) + 1)
            for k, c in enumerate(prod):
                nxt[k + 1] = nxt[k + 1] + c
                nxt[k] = nxt[k] - a * c
            prod = nxt
        target = _trim(self.substituted(i, j))
        ok = _trim(prod) == target
        if not ok and raise_on_fail:
            raise ParamError(f"supplied coarse roots of P_{i}{j} do not re-expand to P_{i}{j}(x^(1/h), 1)")
        return ok

    def fine_roots(self, i, j) -> list[Scalar]:
        """All (d_i h_ij)-th roots of each coarse root, grouped by coarse root."""
        if (i, j) not in self._fine:
            L = self.lcm_degree(i, j)
            if (i, j) in self.supplied_fine:
                out = [self.field(a) for a in self.supplied_fine[i, j]]
                for a in out:
                    if not any(a**L == alpha for alpha in self.coarse_roots(i, j)):
                        raise ParamError(f"supplied fine root {a} is not an {L}-th root of a coarse root")
            else:
                out = []
                for alpha in self.coarse_roots(i, j):
                    rs = nth_roots(alpha, L)
                    if len(rs) < L:
                        raise FieldError(f"{self.field} lacks the {L}-th roots of {alpha}")
                    out.extend(rs)
            if len(out) != L * len(self.coarse_roots(i, j)):
                raise ParamError(f"fine roots of P_{i}{j} have the wrong count")
            self._fine[i, j] = out
        return list(self._fine[i, j])

    def degree_shift_term(self, i, j) -> Fraction:
        """Half the defect between the grading of a crossing and the degree of P_ji.

        Used to make the polynomial representation degree-additive.
        """
        deg_P = self.P[j, i].weighted_degrees([2 * self.datum.d[j], 2 * self.datum.d[i]])
        deg = max(deg_P) if deg_P else 0
        return (-self.datum.form(i, j) - deg) / 2

    # -- serialization --------------------------------------------------------

    def to_json(self) -> dict:
        polys = []
        for i, j in self.pairs():
            P = self.P[i, j]
            entry = {
                "i": vertex_label(i),
                "j": vertex_label(j),
                "monomials": [{"a": e[0], "b": e[1], "coeff": scalar_to_json(c)} for e, c in P.items()],
            }
            if (i, j) in self.supplied_roots:
                entry["coarse_roots"] = [scalar_to_json(self.field(a)) for a in self.supplied_roots[i, j]]
            if (i, j) in self.supplied_fine:
                entry["fine_roots"] = [scalar_to_json(self.field(a)) for a in self.supplied_fine[i, j]]
            polys.append(entry)
        return {"field": field_to_json(self.field), "polys": polys}

    @classmethod
    def from_json(cls, obj, datum: CartanDatum) -> "ParamPack":
        F = field_from_json(obj.get("field"))
        names = {vertex_label(i): i for i in datum.index}
        P, roots, fine = {}, {}, {}
        for entry in obj.get("polys", []):
            i, j = names[str(entry["i"])], names[str(entry["j"])]
            mons = {}
            for m in entry["monomials"]:
                key = (int(m["a"]), int(m["b"]))
                mons[key] = mons.get(key, F.zero()) + scalar_from_json(F, m["coeff"])
            P[i, j] = Poly.from_dict(F, 2, mons)
            if "coarse_roots" in entry:
                roots[i, j] = [scalar_from_json(F, a) for a in entry["coarse_roots"]]
            if "fine_roots" in entry:
                fine[i, j] = [scalar_from_json(F, a) for a in entry["fine_roots"]]
        return cls(datum, F, P, roots, fine)


def validate_pack(pack: ParamPack) -> Report:
    """All structural checks on a pack, one entry per (check, pair)."""
    rep = Report()
    D = pack.datum
    for i, j in pack.pairs():
        Q = pack.Q(i, j)
        rep.add(f"symmetry[{i},{j}]", Q == swap_uv(pack.Q(j, i)))
        target = -2 * D.d[i] * D.c[i, j]
        bad = [
            {"a": a, "b": b, "degree": 2 * D.d[i] * a + 2 * D.d[j] * b}
            for (a, b), _c in Q.items()
            if 2 * D.d[i] * a + 2 * D.d[j] * b != target
        ]
        rep.add(f"homogeneity[{i},{j}]", not bad, expected=target, offending=bad)
        P = pack.P[i, j]
        pdeg = P.weighted_degrees([D.d[i], D.d[j]])
        rep.add(f"p_homogeneous[{i},{j}]", len(pdeg) <= 1, degrees=sorted(pdeg))
        pv = pack.p_value(i, j)
        rep.add(f"leading_nonzero[{i},{j}]", not pv.is_zero(), p=pv)
        if D.c[i, j]:
            rep.add(
                f"lcm_identity[{i},{j}]",
                D.d[i] * pack.h(i, j) == D.d[j] * pack.h(j, i),
                left=D.d[i] * pack.h(i, j),
                right=D.d[j] * pack.h(j, i),
            )
        elif not P.is_constant():
            rep.add(f"orthogonal_constant[{i},{j}]", False, reason="c_ij = 0 but P_ij is not constant")
        if bad or len(pdeg) > 1 or pv.is_zero():
            continue
        try:
            roots = pack.coarse_roots(i, j)
        except ParamError as exc:
            rep.add(f"coarse_roots[{i},{j}]", False, error=str(exc))
            continue
        rep.add(f"coarse_roots[{i},{j}]", pack._check_expansion(i, j, roots), roots=roots)
        zeros = [a for a in roots if a.is_zero()]
        rep.add(f"coarse_roots_nonzero[{i},{j}]", not zeros)
    return rep


def standard_pack(datum: CartanDatum, signs: Mapping | None = None, F: FieldSpec | None = None) -> ParamPack:
    """P_ij = (u^h_ij - v^h_ji)^g_ij for i before j in the index order, P_ji = sign."""
    F = F or rationals()
    signs = dict(signs or {})
    P, roots = {}, {}
    idx = datum.index
    for a, i in enumerate(idx):
        for j in idx[a + 1 :]:
            if not datum.c[i, j]:
                continue
            g = gcd(-datum.c[i, j], -datum.c[j, i])
            hi, hj = -datum.c[i, j] // g, -datum.c[j, i] // g
            base = Poly.from_dict(F, 2, {(hi, 0): 1, (0, hj): -1})
            P[i, j] = base.pow(g)
            P[j, i] = Poly.const(F, 2, signs.get((i, j), signs.get(frozenset((i, j)), 1)))
            roots[i, j] = [F.one()] * g
            roots[j, i] = []
    return ParamPack(datum, F, P, roots)


def geometric_pack(quiver: ValuedGraph, F: FieldSpec | None = None) -> ParamPack:
    """P_ij = (u - v)^(number of edges i -> j) on a simply valued quiver."""
    F = F or rationals()
    if not all(e.eta == 1 and e.nu == 1 for e in quiver.edges):
        raise ParamError("geometric parameters need a trivially valued quiver")
    if quiver.d is not None and any(x != 1 for x in quiver.d.values()):
        raise ParamError("geometric parameters need all d = 1")
    datum = cartan_matrix(quiver)
    counts: dict = {}
    for e in quiver.edges:
        counts[e.src, e.tgt] = counts.get((e.src, e.tgt), 0) + 1
    lin = Poly.from_dict(F, 2, {(1, 0): 1, (0, 1): -1})
    P = {pair: lin.pow(k) for pair, k in counts.items()}
    roots = {(i, j): [F.one()] * counts.get((i, j), 0) for i in datum.index for j in datum.index if i != j}
    return ParamPack(datum, F, P, roots)


def base_graph(pack: ParamPack) -> ValuedGraph:
    """Edge i -> j whenever P_ij is nonconstant, valued (deg_u P_ij(u, 0), deg_v P_ij(0, v))."""
    edges = []
    for i, j in pack.pairs():
        P = pack.P[i, j]
        if P.is_constant():
            continue
        eta = max((a for (a, b), _ in P.items() if b == 0), default=0)
        nu = max((b for (a, b), _ in P.items() if a == 0), default=0)
        if not eta or not nu:
            raise ParamError(f"P_{i}{j} lacks a pure u or pure v term")
        edges.append(Edge(f"{vertex_label(i)}->{vertex_label(j)}", i, j, Fraction(eta), Fraction(nu)))
    return ValuedGraph(list(pack.index), edges)
