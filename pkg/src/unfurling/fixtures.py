"""Shipped example data and random generators used by tests and the CLI."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .cartan_graph import (
    Automorphism,
    CartanDatum,
    Edge,
    GraphMap,
    ValuedGraph,
    cartan_matrix,
)
from .params import ParamPack, geometric_pack, standard_pack
from .polys import Poly
from .scalars import FieldSpec, cyclotomic, primitive_root, rationals
from .unfurl import Spectra


@dataclass
class Fixture:
    name: str
    datum: CartanDatum
    pack: ParamPack
    spectra: Spectra | None = None
    sigma_d: int | None = None

    @property
    def field(self) -> FieldSpec:
        return self.pack.field


def sp4_datum() -> CartanDatum:
    return CartanDatum.from_matrix(["1", "2"], [1, 2], [[2, -2], [-1, 2]])


def g2_datum() -> CartanDatum:
    return CartanDatum.from_matrix(["1", "2"], [1, 3], [[2, -3], [-1, 2]])


def a2_quiver() -> ValuedGraph:
    return ValuedGraph(["1", "2"], [Edge("1->2", "1", "2", Fraction(1), Fraction(1))])


def a3_path() -> ValuedGraph:
    """a -> b <- c with trivial values."""
    one = Fraction(1)
    return ValuedGraph(["a", "b", "c"], [Edge("a->b", "a", "b", one, one, one), Edge("c->b", "c", "b", one, one, one)], {"a": 1, "b": 1, "c": 1})


def a3_end_swap() -> Automorphism:
    return Automorphism({"a": "c", "b": "b", "c": "a"}, {"a->b": "c->b", "c->b": "a->b"})


def cycle_quiver(n: int = 3) -> ValuedGraph:
    names = [str(k) for k in range(n)]
    one = Fraction(1)
    return ValuedGraph(names, [Edge(f"{names[k]}->{names[(k + 1) % n]}", names[k], names[(k + 1) % n], one, one) for k in range(n)])


def cycle_pack(q, F: FieldSpec, n: int = 3) -> ParamPack:
    """P_{k,k+1} = q u - v and P_{k+1,k} = 1 around an n-cycle."""
    datum = cartan_matrix(cycle_quiver(n))
    q = F(q)
    P = {}
    for k in range(n):
        i, j = str(k), str((k + 1) % n)
        P[i, j] = Poly.from_dict(F, 2, {(1, 0): q, (0, 1): -1})
    return ParamPack(datum, F, P)


def sp4() -> Fixture:
    D = sp4_datum()
    pack = standard_pack(D)
    return Fixture("sp4", D, pack, Spectra.from_values(D, pack.field, {"1": [2, -2], "2": [4]}))


def sp4_partial() -> Fixture:
    D = sp4_datum()
    pack = standard_pack(D)
    return Fixture("sp4-partial", D, pack, Spectra.from_values(D, pack.field, {"1": [2]}))


def geometric_a2() -> Fixture:
    pack = geometric_pack(a2_quiver())
    D = pack.datum
    return Fixture("a2-geometric", D, pack, Spectra.from_values(D, pack.field, {"1": [1, 3], "2": [1, 3]}))


def cycle_zeta6() -> Fixture:
    F = cyclotomic(6)
    z = primitive_root(F, 6)
    pack = cycle_pack(z, F)
    values = {str(k): [z**k, -(z**k)] for k in range(3)}
    return Fixture("cycle3-zeta6", pack.datum, pack, Spectra.from_values(pack.datum, F, values))


def cycle_q2() -> Fixture:
    F = rationals()
    pack = cycle_pack(2, F)
    return Fixture("cycle3-q2", pack.datum, pack, Spectra.from_values(pack.datum, F, {"0": [1]}))


def sp4_roots_of_unity() -> Fixture:
    D = sp4_datum()
    F = cyclotomic(4)
    pack = standard_pack(D, F=F)
    return Fixture("sp4-roots-of-unity", D, pack, Spectra.from_values(D, F, {"1": [1, -1], "2": [1]}), sigma_d=2)


def g2_roots_of_unity() -> Fixture:
    D = g2_datum()
    F = cyclotomic(3)
    pack = standard_pack(D, F=F)
    z = primitive_root(F, 3)
    return Fixture("g2-roots-of-unity", D, pack, Spectra.from_values(D, F, {"1": [1, z, z * z], "2": [1]}), sigma_d=3)


def single_vertex() -> Fixture:
    D = CartanDatum.from_matrix(["1"], [1], [[2]])
    pack = ParamPack(D, rationals(), {})
    return Fixture("single-vertex", D, pack, Spectra.from_values(D, pack.field, {"1": [1, -1]}))


FIXTURES = {
    f().name: f
    for f in (sp4, sp4_partial, geometric_a2, cycle_zeta6, cycle_q2, sp4_roots_of_unity, g2_roots_of_unity, single_vertex)
}


def get_fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}") from None


# -- random valued graphs and maps --------------------------------------------


def random_valued_graph(rng: random.Random, max_vertices: int = 6, max_edges: int = 7) -> ValuedGraph:
    """A random absolutely valued graph with d in {1,2,3} and m a multiple of lcm(d_src, d_tgt)."""
    n = rng.randint(1, max_vertices)
    names = [f"y{k}" for k in range(n)]
    d = {v: rng.choice([1, 2, 3]) for v in names}
    edges = []
    if n > 1:
        for k in range(rng.randint(0, max_edges)):
            s, t = rng.sample(names, 2)
            m = lcm(d[s], d[t]) * rng.randint(1, 2)
            edges.append(Edge(f"e{k}", s, t, Fraction(m, d[s]), Fraction(m, d[t]), Fraction(m)))
    return ValuedGraph(names, edges, d)


def random_cover(rng: random.Random, base: ValuedGraph, sheets: int | None = None) -> GraphMap:
    """A topological cover base x {0..k-1} with a random permutation on each edge."""
    k = sheets or rng.randint(1, 3)
    vertices = [(y, s) for y in base.vertices for s in range(k)]
    edges, emap = [], {}
    for e in base.edges:
        perm = list(range(k))
        rng.shuffle(perm)
        for s in range(k):
            eid = f"{e.id}/{s}"
            edges.append(Edge(eid, (e.src, s), (e.tgt, perm[s]), e.eta, e.nu, e.m))
            emap[eid] = e.id
    X = ValuedGraph(vertices, edges, {(y, s): base.d[y] for (y, s) in vertices} if base.d else None)
    return GraphMap(X, base, {x: x[0] for x in vertices}, emap)


def random_map(rng: random.Random, base: ValuedGraph) -> GraphMap:
    """A random graph map to base that need not be a furling (values perturbed)."""
    f = random_cover(rng, base)
    if not f.domain.edges:
        return f
    X = f.domain
    victim = rng.choice(X.edges)
    bump = Fraction(rng.choice([1, 2]), rng.choice([1, 2]))
    edges = [Edge(e.id, e.src, e.tgt, e.eta + bump, e.nu, None) if e.id == victim.id else Edge(e.id, e.src, e.tgt, e.eta, e.nu) for e in X.edges]
    return GraphMap(ValuedGraph(X.vertices, edges), base, f.vmap, f.emap)
