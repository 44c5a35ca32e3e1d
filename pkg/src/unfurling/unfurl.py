"""Spectra, their completion, the unfurled graph and the roots-of-unity symmetry."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cartan_graph import (
    Automorphism,
    CartanDatum,
    Edge,
    GraphMap,
    ValuedGraph,
    cartan_matrix,
    check_automorphism,
    check_cartan_column,
    furl_values,
    is_furling,
    quotient_by_automorphism,
    vertex_label,
)
from .params import ParamPack, base_graph
from .report import PreconditionError, Report
from .scalars import (
    FieldError,
    FieldSpec,
    Scalar,
    canonical_root,
    multiplicative_order,
    nth_roots,
    primitive_root,
    scalar_from_json,
    scalar_to_json,
)


class IncompleteSpectra(PreconditionError):
    pass


class NoStabilization(RuntimeError):
    def __init__(self, message: str, spectra: "Spectra"):
        super().__init__(message)
        self.spectra = spectra


@dataclass(frozen=True)
class SpectrumEntry:
    value: Scalar
    root: Scalar  # root ** d_i == value


@dataclass
class Spectra:
    """Finite spectra U_i with a designated d_i-th root for each value."""

    field: FieldSpec
    d: dict
    entries: dict

    def __post_init__(self):
        self.entries = {i: list(self.entries.get(i, [])) for i in self.d}
        for i, ents in self.entries.items():
            seen = set()
            for e in ents:
                if e.value.is_zero():
                    raise ValueError(f"spectrum of {i} contains 0")
                if e.value in seen:
                    raise ValueError(f"spectrum of {i} repeats {e.value}")
                seen.add(e.value)
                if e.root ** int(self.d[i]) != e.value:
                    raise ValueError(f"designated root {e.root} of {e.value} is not a {self.d[i]}-th root")

    @classmethod
    def from_values(cls, datum: CartanDatum, F: FieldSpec, values: dict, roots: dict | None = None) -> "Spectra":
        roots = roots or {}
        d = {i: int(datum.d[i]) for i in datum.index}
        entries = {}
        for i in datum.index:
            ents = []
            for k, u in enumerate(values.get(i, [])):
                u = F(u)
                given = roots.get(i)
                r = F(given[k]) if given else canonical_root(u, d[i])
                ents.append(SpectrumEntry(u, r))
            entries[i] = ents
        return cls(F, d, entries)

    def values(self, i) -> list[Scalar]:
        return [e.value for e in self.entries[i]]

    def root(self, i, u) -> Scalar:
        for e in self.entries[i]:
            if e.value == u:
                return e.root
        raise KeyError((i, u))

    def contains(self, i, u) -> bool:
        return any(e.value == u for e in self.entries[i])

    def size(self) -> int:
        return sum(len(v) for v in self.entries.values())

    def copy(self) -> "Spectra":
        return Spectra(self.field, dict(self.d), {i: list(v) for i, v in self.entries.items()})

    def to_json(self) -> dict:
        return {
            vertex_label(i): [{"u": scalar_to_json(e.value), "root": scalar_to_json(e.root)} for e in ents]
            for i, ents in self.entries.items()
        }

    @classmethod
    def from_json(cls, obj, datum: CartanDatum, F: FieldSpec) -> "Spectra":
        names = {vertex_label(i): i for i in datum.index}
        entries = {i: [] for i in datum.index}
        for key, ents in obj.items():
            i = names[str(key)]
            for e in ents:
                if isinstance(e, dict):
                    u = scalar_from_json(F, e["u"])
                    r = scalar_from_json(F, e["root"]) if "root" in e else canonical_root(u, int(datum.d[i]))
                else:
                    u = scalar_from_json(F, e)
                    r = canonical_root(u, int(datum.d[i]))
                entries[i].append(SpectrumEntry(u, r))
        return cls(F, {i: int(datum.d[i]) for i in datum.index}, entries)


def _all_roots(target: Scalar, h: int) -> list[Scalar]:
    """Every h-th root of target in its field, or FieldError if that cannot be certified.

    Over the rationals and prime fields the search is exhaustive.  In cyclotomic
    and rational function fields a single root found determines the rest up to
    roots of unity, all of which are searched; finding none is inconclusive.
    """
    roots = nth_roots(target, h)
    if roots or target.field.kind in ("rationals", "prime"):
        return roots
    raise FieldError(f"cannot decide the {h}-th roots of {target} in {target.field}")


def partner_values(pack: ParamPack, i, u: Scalar, j) -> list[Scalar]:
    """All v in the field with Q_ij(u, v) = 0, without repetition."""
    hij, hji = pack.h(i, j), pack.h(j, i)
    targets = []
    uh = u**hij
    for a in pack.coarse_roots(i, j):
        if not a.is_zero():
            targets.append(uh / a)
    for b in pack.coarse_roots(j, i):
        if not b.is_zero():
            targets.append(b * uh)
    out: list[Scalar] = []
    for t in targets:
        for v in _all_roots(t, hji):
            if v not in out:
                out.append(v)
    return out


def is_complete(spectra: Spectra, pack: ParamPack) -> tuple[bool, list]:
    """Closure of the spectra under the root correspondence; witnesses (i, u, j, u')."""
    witnesses = []
    for i in pack.index:
        for u in spectra.values(i):
            for j in pack.index:
                if j == i or pack.Q(i, j).is_constant():
                    continue
                for v in partner_values(pack, i, u, j):
                    if not spectra.contains(j, v):
                        witnesses.append((i, u, j, v))
    return not witnesses, witnesses


def complete_closure(spectra: Spectra, pack: ParamPack, max_iter: int = 10) -> tuple[Spectra, int]:
    """Least complete spectra containing the input and the number of rounds used.

    A round sweeps the indices in order, adding missing partners immediately;
    the closing round that adds nothing is counted.
    """
    cur = spectra.copy()
    for rnd in range(1, max_iter + 1):
        added = False
        for i in pack.index:
            k = 0
            while k < len(cur.entries[i]):
                u = cur.entries[i][k].value
                for j in pack.index:
                    if j == i or pack.Q(i, j).is_constant():
                        continue
                    for v in partner_values(pack, i, u, j):
                        if not cur.contains(j, v):
                            cur.entries[j].append(SpectrumEntry(v, canonical_root(v, cur.d[j])))
                            added = True
                k += 1
        if not added:
            return cur, rnd
    raise NoStabilization(f"spectra did not stabilize within {max_iter} rounds", cur)


@dataclass
class UnfurledGraph:
    graph: ValuedGraph
    base: ValuedGraph
    projection: GraphMap
    provenance: dict = field(default_factory=dict)
    spectra: Spectra | None = None


def build_unfurled(datum: CartanDatum, pack: ParamPack, spectra: Spectra) -> UnfurledGraph:
    ok, witnesses = is_complete(spectra, pack)
    if not ok:
        rep = Report()
        rep.add("complete", False, witnesses=witnesses)
        raise IncompleteSpectra("spectra are not complete", rep)
    vertices = [(i, u) for i in datum.index for u in spectra.values(i)]
    edges, prov, emap = [], {}, {}
    for i in datum.index:
        for j in datum.index:
            if i == j:
                continue
            roots = pack.coarse_roots(i, j)
            if not roots:
                continue
            hij, hji = pack.h(i, j), pack.h(j, i)
            for u in spectra.values(i):
                for v in spectra.values(j):
                    for k, a in enumerate(roots):
                        if u**hij == a * v**hji:
                            eid = f"{vertex_label(i)}:{u}->{vertex_label(j)}:{v}#{k}"
                            edges.append(Edge(eid, (i, u), (j, v), Fraction(1), Fraction(1), Fraction(1)))
                            prov[eid] = a
                            emap[eid] = f"{vertex_label(i)}->{vertex_label(j)}"
    graph = ValuedGraph(vertices, edges, {x: 1 for x in vertices})
    base = base_graph(pack)
    proj = GraphMap(graph, base, {x: x[0] for x in vertices}, emap)
    return UnfurledGraph(graph, base, proj, prov, spectra)


def verify_unfurl_furling(g: UnfurledGraph, datum: CartanDatum | None = None) -> Report:
    rep = Report()
    rep.extend(is_furling(g.projection))
    if rep.passed:
        rep.extend(check_cartan_column(g.projection))
        try:
            furled = furl_values(g.graph, g.projection)
            c = cartan_matrix(furled).c
            target = datum.c if datum is not None else cartan_matrix(g.base).c
            rep.add("furled_cartan", c == target, furled=c)
        except Exception as exc:  # reported, not raised
            rep.add("furled_cartan", False, error=str(exc))
    return rep


def roots_of_unity_spectra(datum: CartanDatum, F: FieldSpec, d: int) -> Spectra:
    """U_i = the (d/d_i)-th roots of unity, with designated roots zeta_d^k."""
    zeta = primitive_root(F, d)
    entries = {}
    for i in datum.index:
        di = int(datum.d[i])
        entries[i] = [SpectrumEntry(zeta ** (di * k), zeta**k) for k in range(d // di)]
    return Spectra(F, {i: int(datum.d[i]) for i in datum.index}, entries)


def sigma_automorphism(datum: CartanDatum, pack: ParamPack, d: int):
    """sigma(i, u) = (i, zeta_d^{d_i} u) on the unfurling of the roots-of-unity spectra.

    Returns (automorphism, report, unfurled graph).
    """
    from math import lcm

    dl = lcm(*(int(datum.d[i]) for i in datum.index))
    if any(datum.d[i].denominator != 1 for i in datum.index) or d != dl:
        raise PreconditionError(f"d must be lcm(d_i) = {dl}")
    F = pack.field
    zeta = primitive_root(F, d)
    for i, j in pack.pairs():
        for a in pack.coarse_roots(i, j):
            if a.is_zero() or multiplicative_order(a) is None:
                raise FieldError(f"coarse root {a} of P_{i}{j} is not a root of unity")
    spectra = roots_of_unity_spectra(datum, F, d)
    unf = build_unfurled(datum, pack, spectra)
    X = unf.graph
    vmap = {(i, u): (i, zeta ** int(datum.d[i]) * u) for (i, u) in X.vertices}
    emap = {}
    by_key = {}
    for e in X.edges:
        k = int(e.id.rsplit("#", 1)[1])
        by_key[e.src, e.tgt, k] = e.id
    for e in X.edges:
        k = int(e.id.rsplit("#", 1)[1])
        img = by_key.get((vmap[e.src], vmap[e.tgt], k))
        emap[e.id] = img if img is not None else e.id
    sigma = Automorphism(vmap, emap)
    rep = Report()
    problems = check_automorphism(X, sigma)
    rep.add("automorphism", not problems, problems=problems)
    if problems:
        return sigma, rep, unf
    orbit_of = {}
    for orb in sigma.orbits(X.vertices, sigma.vertices):
        for v in orb:
            orbit_of[v] = id(orb)
    inside = [e.id for e in X.edges if orbit_of[e.src] == orbit_of[e.tgt]]
    rep.add("admissible", not inside, edges_within_orbit=inside)
    if inside:
        return sigma, rep, unf
    quotient, proj = quotient_by_automorphism(X, sigma, name=lambda orb: orb[0][0])
    rep.extend(is_furling(proj), prefix="quotient_")
    qc = cartan_matrix(quotient)
    rep.add("quotient_cartan", qc.c == datum.c, quotient=qc.matrix(), base=datum.matrix())
    rep.meta["quotient_d"] = {vertex_label(i): qc.d[i] for i in qc.index}
    return sigma, rep, unf
