"""Cartan data, valued graphs and furlings.

A relatively valued graph carries a pair (eta, nu) of positive rationals on each
oriented edge; an absolutely valued one carries d on vertices and m on edges,
with eta = m/d_src and nu = m/d_tgt.  A furling is a graph map whose fibrewise
sums of edge values reproduce the values downstairs.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Hashable, Mapping, Sequence

from .report import PreconditionError, Report


class GraphError(ValueError):
    pass


class GraphMapError(GraphError):
    pass


class CartanError(ValueError):
    pass


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def vertex_label(v) -> str:
    if isinstance(v, tuple):
        return "(" + ",".join(vertex_label(x) for x in v) + ")"
    return str(v)


# ---------------------------------------------------------------------------
# Cartan data


@dataclass
class CartanDatum:
    """Index set, symmetrizers d_i and generalized Cartan matrix c_ij."""

    index: list
    d: dict
    c: dict  # (i, j) -> int

    def __post_init__(self):
        self.index = list(self.index)
        self.d = {i: Fraction(self.d[i]) for i in self.index}
        self.c = {(i, j): int(self.c[i, j]) for i in self.index for j in self.index}
        problems = self.problems()
        if problems:
            raise CartanError("; ".join(problems))

    @classmethod
    def from_matrix(cls, index: Sequence, d: Mapping | Sequence, matrix: Sequence[Sequence[int]]):
        index = list(index)
        if not isinstance(d, Mapping):
            d = dict(zip(index, d))
        c = {(i, j): matrix[a][b] for a, i in enumerate(index) for b, j in enumerate(index)}
        return cls(index, dict(d), c)

    def problems(self) -> list[str]:
        out = []
        for i in self.index:
            if self.d[i] <= 0:
                out.append(f"d_{i} must be positive")
            if self.c[i, i] != 2:
                out.append(f"c_{i}{i} != 2")
        for i in self.index:
            for j in self.index:
                if i == j:
                    continue
                if self.c[i, j] > 0:
                    out.append(f"c_{i}{j} > 0")
                if (self.c[i, j] == 0) != (self.c[j, i] == 0):
                    out.append(f"c_{i}{j} and c_{j}{i} not simultaneously zero")
                if self.d[i] * self.c[i, j] != self.d[j] * self.c[j, i]:
                    out.append(f"d_{i} c_{i}{j} != d_{j} c_{j}{i}")
        return out

    def form(self, i, j) -> Fraction:
        """<alpha_i, alpha_j> = d_i c_ij."""
        return self.d[i] * self.c[i, j]

    def matrix(self) -> list[list[int]]:
        return [[self.c[i, j] for j in self.index] for i in self.index]

    def transpose(self) -> "CartanDatum":
        # the transpose is symmetrized by 1/d; rescale to integers
        inv = {i: 1 / self.d[i] for i in self.index}
        return CartanDatum(self.index, _least_integers(inv, [self.index]), {(i, j): self.c[j, i] for i, j in self.c})

    def to_json(self) -> dict:
        return {
            "index": [vertex_label(i) for i in self.index],
            "d": {vertex_label(i): _num(self.d[i]) for i in self.index},
            "cartan": self.matrix(),
        }

    @classmethod
    def from_json(cls, obj) -> "CartanDatum":
        index = [str(i) for i in obj["index"]]
        d = obj["d"]
        if isinstance(d, Mapping):
            d = {str(k): Fraction(v) for k, v in d.items()}
        else:
            d = dict(zip(index, (Fraction(x) for x in d)))
        return cls.from_matrix(index, d, obj["cartan"])

    def graph(self) -> "ValuedGraph":
        """A valued graph with this Cartan matrix: one edge i -> j per pair i < j."""
        edges = []
        for a, i in enumerate(self.index):
            for j in self.index[a + 1 :]:
                if self.c[i, j]:
                    edges.append(Edge(f"{vertex_label(i)}->{vertex_label(j)}", i, j, Fraction(-self.c[i, j]), Fraction(-self.c[j, i])))
        return ValuedGraph(list(self.index), edges)


@dataclass(frozen=True)
class Weight:
    """lambda^i = alpha_i^vee(lambda) for each i."""

    values: Mapping

    def pairing(self, datum: CartanDatum, i) -> int:
        return int(self.values.get(i, 0))

    @classmethod
    def of_root(cls, datum: CartanDatum, j) -> "Weight":
        return cls({i: datum.c[i, j] for i in datum.index})


def _num(x: Fraction):
    return x.numerator if x.denominator == 1 else str(x)


# ---------------------------------------------------------------------------
# valued graphs


@dataclass(frozen=True)
class Edge:
    id: str
    src: Hashable
    tgt: Hashable
    eta: Fraction | None = None
    nu: Fraction | None = None
    m: Fraction | None = None


@dataclass
class ValuedGraph:
    vertices: list
    edges: list[Edge]
    d: dict | None = None

    def __post_init__(self):
        self.vertices = list(self.vertices)
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise GraphError("duplicate vertices")
        ids = set()
        for e in self.edges:
            if e.src not in vs or e.tgt not in vs:
                raise GraphError(f"edge {e.id} has an endpoint outside the vertex set")
            if e.src == e.tgt:
                raise GraphError(f"edge {e.id} is a loop")
            if e.id in ids:
                raise GraphError(f"duplicate edge id {e.id}")
            ids.add(e.id)
        self._by_id = {e.id: e for e in self.edges}
        self._out = defaultdict(list)
        self._in = defaultdict(list)
        for e in self.edges:
            self._out[e.src].append(e)
            self._in[e.tgt].append(e)
        if self.d is not None:
            self.d = {v: Fraction(self.d[v]) for v in self.vertices}
            for e in self.edges:
                if e.m is None:
                    raise GraphError(f"absolute values need m on edge {e.id}")
                if e.eta is not None and e.eta != e.m / self.d[e.src]:
                    raise GraphError(f"eta on {e.id} disagrees with m/d_src")
                if e.nu is not None and e.nu != e.m / self.d[e.tgt]:
                    raise GraphError(f"nu on {e.id} disagrees with m/d_tgt")

    def edge(self, eid: str) -> Edge:
        return self._by_id[eid]

    def out_edges(self, v) -> list[Edge]:
        return self._out[v]

    def in_edges(self, v) -> list[Edge]:
        return self._in[v]

    def has_relative(self) -> bool:
        return all(e.eta is not None and e.nu is not None for e in self.edges)

    def has_absolute(self) -> bool:
        return self.d is not None

    def is_trivially_valued(self) -> bool:
        return all(e.eta == 1 and e.nu == 1 for e in self.edges) and (
            self.d is None or (all(x == 1 for x in self.d.values()) and all(e.m == 1 for e in self.edges))
        )

    def components(self) -> list[list]:
        seen, comps = set(), []
        adj = defaultdict(list)
        for e in self.edges:
            adj[e.src].append(e.tgt)
            adj[e.tgt].append(e.src)
        for v in self.vertices:
            if v in seen:
                continue
            comp, queue = [], deque([v])
            seen.add(v)
            while queue:
                x = queue.popleft()
                comp.append(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
            comps.append(comp)
        return comps

    def relative_symmetrizers(self) -> dict:
        """Positive rationals d with d_i eta_e = d_j nu_e for every edge e: i -> j.

        Propagated along a spanning forest from the first vertex of each
        component (normalized to 1), then checked on every edge.
        """
        if not self.has_relative():
            raise GraphError("relative values missing")
        d: dict = {}
        for comp in self.components():
            d[comp[0]] = Fraction(1)
            queue = deque([comp[0]])
            while queue:
                x = queue.popleft()
                for e in self._out[x]:
                    if e.tgt not in d:
                        d[e.tgt] = d[x] * e.eta / e.nu
                        queue.append(e.tgt)
                for e in self._in[x]:
                    if e.src not in d:
                        d[e.src] = d[x] * e.nu / e.eta
                        queue.append(e.src)
        for e in self.edges:
            if d[e.src] * e.eta != d[e.tgt] * e.nu:
                raise GraphError(f"relative values are inconsistent around edge {e.id}")
        return d

    def raw_cartan(self) -> dict:
        """c_ij = -sum_{e: i->j} eta_e - sum_{e: j->i} nu_e, c_ii = 2, as Fractions."""
        if not self.has_relative():
            raise GraphError("relative values missing")
        c = {(i, j): Fraction(0) for i in self.vertices for j in self.vertices}
        for i in self.vertices:
            c[i, i] = Fraction(2)
        for e in self.edges:
            c[e.src, e.tgt] -= e.eta
            c[e.tgt, e.src] -= e.nu
        return c

    def to_json(self) -> dict:
        out = {
            "vertices": [vertex_label(v) for v in self.vertices],
            "edges": [
                {
                    "id": e.id,
                    "src": vertex_label(e.src),
                    "tgt": vertex_label(e.tgt),
                    "eta": None if e.eta is None else _num(e.eta),
                    "nu": None if e.nu is None else _num(e.nu),
                    "m": None if e.m is None else _num(e.m),
                }
                for e in self.edges
            ],
        }
        if self.d is not None:
            out["d"] = {vertex_label(v): _num(self.d[v]) for v in self.vertices}
        return out

    @classmethod
    def from_json(cls, obj) -> "ValuedGraph":
        def frac(x):
            return None if x is None else Fraction(x)

        vertices = [str(v) for v in obj["vertices"]]
        edges = [
            Edge(str(e["id"]), str(e["src"]), str(e["tgt"]), frac(e.get("eta")), frac(e.get("nu")), frac(e.get("m")))
            for e in obj["edges"]
        ]
        d = obj.get("d")
        if d is not None:
            d = {str(k): Fraction(v) for k, v in d.items()}
        g = cls(vertices, edges, d)
        if d is not None and not g.has_relative():
            g = abs_to_rel(g)
        return g

    def to_dot(self, name: str = "G") -> str:
        lines = [f"digraph {name} {{"]
        for v in self.vertices:
            lab = vertex_label(v)
            if self.d is not None:
                lab += f"\\nd={_num(self.d[v])}"
            lines.append(f'  "{vertex_label(v)}" [label="{lab}"];')
        for e in self.edges:
            lab = f"({_num(e.eta)},{_num(e.nu)})" if e.eta is not None else ""
            if e.m is not None:
                lab += f" m={_num(e.m)}"
            lines.append(f'  "{vertex_label(e.src)}" -> "{vertex_label(e.tgt)}" [label="{lab.strip()}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _least_integers(d: Mapping, components: Sequence[Sequence]) -> dict:
    """Rescale positive rationals to least positive integers per component."""
    out = {}
    for comp in components:
        den = reduce(_lcm, (d[v].denominator for v in comp), 1)
        ints = [d[v] * den for v in comp]
        g = reduce(gcd, (int(x) for x in ints), 0) or 1
        for v, x in zip(comp, ints):
            out[v] = Fraction(int(x) // g)
    return out


def cartan_matrix(g: ValuedGraph) -> CartanDatum:
    """Cartan datum of a relatively valued graph; errors on non-integer entries."""
    d = g.relative_symmetrizers()
    raw = g.raw_cartan()
    for key, val in raw.items():
        if val.denominator != 1:
            raise CartanError(f"entry c{key} = {val} is not an integer")
    return CartanDatum(g.vertices, _least_integers(d, g.components()), {k: int(v) for k, v in raw.items()})


def abs_to_rel(g: ValuedGraph) -> ValuedGraph:
    """Populate eta_e = m_e/d_src and nu_e = m_e/d_tgt; absolute values kept."""
    if g.d is None:
        raise GraphError("absolute values missing")
    edges = [replace(e, eta=e.m / g.d[e.src], nu=e.m / g.d[e.tgt]) for e in g.edges]
    return ValuedGraph(g.vertices, edges, g.d)


def langlands_dual(g: ValuedGraph) -> ValuedGraph:
    if not g.has_relative():
        raise GraphError("relative values missing")
    edges = [replace(e, eta=e.nu, nu=e.eta, m=None) for e in g.edges]
    return ValuedGraph(g.vertices, edges)


def with_trivial_absolute(g: ValuedGraph) -> ValuedGraph:
    """Attach d = m = 1 to a trivially valued graph."""
    if not all(e.eta == 1 and e.nu == 1 for e in g.edges):
        raise GraphError("graph is not trivially valued")
    edges = [replace(e, m=Fraction(1)) for e in g.edges]
    return ValuedGraph(g.vertices, edges, {v: 1 for v in g.vertices})


# ---------------------------------------------------------------------------
# graph maps and furlings


@dataclass
class GraphMap:
    domain: ValuedGraph
    codomain: ValuedGraph
    vmap: dict
    emap: dict

    def __post_init__(self):
        cod_vs = set(self.codomain.vertices)
        for v in self.domain.vertices:
            if v not in self.vmap:
                raise GraphMapError(f"vertex {vertex_label(v)} is not mapped")
            if self.vmap[v] not in cod_vs:
                raise GraphMapError(f"vertex {vertex_label(v)} maps outside the codomain")
        for e in self.domain.edges:
            ys, yt = self.vmap[e.src], self.vmap[e.tgt]
            if ys == yt:
                raise GraphMapError(f"edge {e.id} would map to a loop at {vertex_label(ys)}")
            if e.id not in self.emap:
                raise GraphMapError(f"edge {e.id} is not mapped")
            img = self.codomain.edge(self.emap[e.id])
            if img.src != ys or img.tgt != yt:
                raise GraphMapError(f"edge {e.id} does not commute with source/target")

    def fiber(self, y) -> list:
        return [x for x in self.domain.vertices if self.vmap[x] == y]

    def fibers(self) -> dict:
        out = {y: [] for y in self.codomain.vertices}
        for x in self.domain.vertices:
            out[self.vmap[x]].append(x)
        return out

    def edge_fibers(self) -> dict:
        out = {e.id: [] for e in self.codomain.edges}
        for e in self.domain.edges:
            out[self.emap[e.id]].append(e.id)
        return out

    @classmethod
    def identity(cls, g: ValuedGraph) -> "GraphMap":
        return cls(g, g, {v: v for v in g.vertices}, {e.id: e.id for e in g.edges})

    def to_json(self) -> dict:
        return {
            "vertices": {vertex_label(x): vertex_label(y) for x, y in self.vmap.items()},
            "edges": dict(self.emap),
        }

    @classmethod
    def from_json(cls, obj, domain: ValuedGraph, codomain: ValuedGraph) -> "GraphMap":
        return cls(domain, codomain, {str(k): str(v) for k, v in obj["vertices"].items()}, {str(k): str(v) for k, v in obj["edges"].items()})


def is_furling(f: GraphMap) -> Report:
    """Check the fibrewise value sums for every y, x over y and codomain edge."""
    rep = Report()
    X, Y = f.domain, f.codomain
    fibers = f.fibers()
    failures = []
    for y in Y.vertices:
        for x in fibers[y]:
            for d in Y.out_edges(y):
                total = sum((e.nu for e in X.out_edges(x) if f.emap[e.id] == d.id), Fraction(0))
                if total != d.nu:
                    failures.append({"kind": "nu", "y": y, "x": x, "edge": d.id, "expected": d.nu, "got": total})
            for e in Y.in_edges(y):
                total = sum((a.eta for a in X.in_edges(x) if f.emap[a.id] == e.id), Fraction(0))
                if total != e.eta:
                    failures.append({"kind": "eta", "y": y, "x": x, "edge": e.id, "expected": e.eta, "got": total})
    rep.add("furling", not failures, failures=failures)
    return rep


def check_cartan_column(f: GraphMap, require_furling: bool = True) -> Report:
    """c_{yy'} = sum_{x over y} c_{xx'} for every y, y' and x' over y'."""
    if require_furling:
        pre = is_furling(f)
        if not pre.passed:
            raise PreconditionError("map is not a furling", pre)
    cx, cy = f.domain.raw_cartan(), f.codomain.raw_cartan()
    fibers = f.fibers()
    failures = []
    sums = []
    for y in f.codomain.vertices:
        for y2 in f.codomain.vertices:
            for x2 in fibers[y2]:
                s = sum((cx[x, x2] for x in fibers[y]), Fraction(0))
                sums.append({"y": y, "y'": y2, "x'": x2, "sum": s, "c": cy[y, y2]})
                if s != cy[y, y2]:
                    failures.append({"y": y, "y'": y2, "x'": x2, "sum": s, "expected": cy[y, y2]})
    rep = Report()
    rep.add("cartan_column_sums", not failures, failures=failures, count=len(sums))
    rep.meta["column_sums"] = sums
    return rep


# -- the induced map on Chevalley generators ---------------------------------


def _bracket(a: dict, b: dict, c: Mapping) -> dict:
    """Lie bracket of linear combinations of E/F/H generators, using only
    [H_i,E_j] = c_ij E_j, [H_i,F_j] = -c_ij F_j, [E_i,F_j] = delta_ij H_i.

    Brackets outside these families (e.g. [E_i,E_j]) are not needed here and
    raise.
    """
    out: dict = defaultdict(Fraction)

    def one(g1, g2):
        (k1, i), (k2, j) = g1, g2
        if k1 == "H" and k2 == "E":
            return {("E", j): c[i, j]}
        if k1 == "H" and k2 == "F":
            return {("F", j): -c[i, j]}
        if k1 == "E" and k2 == "F":
            return {("H", i): Fraction(1)} if i == j else {}
        if k1 == k2 == "H":
            return {}
        if (k2, k1) in (("H", "E"), ("H", "F"), ("E", "F")):
            return {k: -v for k, v in one(g2, g1).items()}
        raise NotImplementedError(f"bracket [{k1},{k2}] outside the Chevalley relations")

    for g1, x in a.items():
        for g2, y in b.items():
            for g, z in one(g1, g2).items():
                out[g] += x * y * z
    return {k: v for k, v in out.items() if v}


def furling_hom_check(f: GraphMap) -> Report:
    """Verify the Chevalley-generator relations for E_y -> sum E_x etc."""
    pre = is_furling(f)
    if not pre.passed:
        raise PreconditionError("map is not a furling", pre)
    cx, cy = f.domain.raw_cartan(), f.codomain.raw_cartan()
    fibers = f.fibers()

    def image(kind, y):
        return {(kind, x): Fraction(1) for x in fibers[y]}

    def push(combo):
        out: dict = defaultdict(Fraction)
        for (kind, y), v in combo.items():
            for g, w in image(kind, y).items():
                out[g] += v * w
        return {k: v for k, v in out.items() if v}

    rep = Report()
    for fam in (("H", "E"), ("H", "F"), ("E", "F")):
        failures = []
        for y in f.codomain.vertices:
            for y2 in f.codomain.vertices:
                lhs = _bracket(image(fam[0], y), image(fam[1], y2), cx)
                rhs = push(_bracket({(fam[0], y): Fraction(1)}, {(fam[1], y2): Fraction(1)}, cy))
                if lhs != rhs:
                    failures.append({"y": y, "y'": y2, "lhs": lhs, "rhs": rhs})
        rep.add(f"bracket_{fam[0]}{fam[1]}", not failures, failures=failures)
    return rep


# -- furled values and automorphism quotients ----------------------------------


def furl_values(x: ValuedGraph, f: GraphMap, scale: bool = True) -> ValuedGraph:
    """Absolute values on the codomain: d_y = d_x/|f^-1(y)| and
    m_e = sum m_e' / (|f^-1(y)| |f^-1(y')|), optionally scaled by lcm of fibre sizes."""
    if x.d is None:
        if x.is_trivially_valued():
            x = with_trivial_absolute(x)
        else:
            raise GraphError("domain needs absolute values")
    fibers = f.fibers()
    efibers = f.edge_fibers()
    Y = f.codomain
    d = {}
    for y in Y.vertices:
        fib = fibers[y]
        if not fib:
            raise GraphError(f"empty fiber over {vertex_label(y)}")
        vals = {x.d[v] for v in fib}
        if len(vals) != 1:
            raise GraphError(f"d is not constant on the fiber over {vertex_label(y)}")
        d[y] = vals.pop() / len(fib)
    m = {}
    for e in Y.edges:
        fib = efibers[e.id]
        vals = {x.edge(a).m for a in fib}
        if len(vals) > 1:
            raise GraphError(f"m is not constant on the fiber over edge {e.id}")
        m[e.id] = sum((x.edge(a).m for a in fib), Fraction(0)) / (len(fibers[e.src]) * len(fibers[e.tgt]))
    if scale:
        k = reduce(_lcm, (len(fibers[y]) for y in Y.vertices), 1)
        d = {y: v * k for y, v in d.items()}
        m = {e: v * k for e, v in m.items()}
    edges = [Edge(e.id, e.src, e.tgt, m[e.id] / d[e.src], m[e.id] / d[e.tgt], m[e.id]) for e in Y.edges]
    return ValuedGraph(Y.vertices, edges, d)


@dataclass
class Automorphism:
    vertices: dict
    edges: dict

    def orbits(self, items: Sequence, table: Mapping) -> list[list]:
        seen, out = set(), []
        for v in items:
            if v in seen:
                continue
            orb, cur = [], v
            while cur not in seen:
                seen.add(cur)
                orb.append(cur)
                cur = table[cur]
            out.append(orb)
        return out


def check_automorphism(x: ValuedGraph, sigma: Automorphism) -> list[str]:
    problems = []
    if sorted(map(vertex_label, sigma.vertices.values())) != sorted(map(vertex_label, x.vertices)) or set(sigma.vertices) != set(x.vertices):
        problems.append("vertex map is not a permutation")
        return problems
    ids = [e.id for e in x.edges]
    if set(sigma.edges) != set(ids) or sorted(sigma.edges.values()) != sorted(ids):
        problems.append("edge map is not a permutation")
        return problems
    for e in x.edges:
        img = x.edge(sigma.edges[e.id])
        if img.src != sigma.vertices[e.src] or img.tgt != sigma.vertices[e.tgt]:
            problems.append(f"edge {e.id} does not commute with the vertex map")
        if (img.eta, img.nu, img.m) != (e.eta, e.nu, e.m):
            problems.append(f"values not preserved on edge {e.id}")
    if x.d is not None:
        for v in x.vertices:
            if x.d[sigma.vertices[v]] != x.d[v]:
                problems.append(f"d not preserved at {vertex_label(v)}")
    return problems


def quotient_by_automorphism(x: ValuedGraph, sigma: Automorphism, name=None) -> tuple[ValuedGraph, GraphMap]:
    """Quotient X/sigma with furled absolute values and the projection map."""
    problems = check_automorphism(x, sigma)
    if problems:
        raise GraphError("not an automorphism: " + "; ".join(problems))
    vorbits = sigma.orbits(x.vertices, sigma.vertices)
    which = {}
    for orb in vorbits:
        for v in orb:
            which[v] = orb
    for e in x.edges:
        if which[e.src] is which[e.tgt]:
            raise GraphError(f"inadmissible: edge {e.id} joins two vertices of one orbit")
    name = name or (lambda orb: orb[0])
    vname = {v: name(which[v]) for v in x.vertices}
    eorbits = sigma.orbits([e.id for e in x.edges], sigma.edges)
    ename = {}
    bare_edges = []
    for orb in eorbits:
        rep = x.edge(orb[0])
        for a in orb:
            ename[a] = orb[0]
        bare_edges.append(Edge(orb[0], vname[rep.src], vname[rep.tgt], Fraction(1), Fraction(1), Fraction(1)))
    qverts = [name(orb) for orb in vorbits]
    bare = ValuedGraph(qverts, bare_edges)
    proj = GraphMap(x, bare, vname, ename)
    valued = furl_values(x, proj)
    return valued, GraphMap(x, valued, vname, ename)
