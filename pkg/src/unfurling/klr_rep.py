"""The KLR algebra acting on its polynomial representation.

A vector is a finitely supported map from label tuples to polynomials in
z_1..z_n.  Strand indices in letters are 1-based, as in y_1, psi_1.
Letters of a word are written left to right and act right to left.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .cartan_graph import CartanDatum
from .params import ParamPack
from .polys import Poly
from .report import Report


class WordError(ValueError):
    pass


# -- vectors -----------------------------------------------------------------


@dataclass
class PolyVec:
    n: int
    parts: dict = field(default_factory=dict)  # label tuple -> Poly

    @classmethod
    def basis(cls, F, label: tuple, exps: Sequence[int], c=1) -> "PolyVec":
        return cls(len(label), {tuple(label): Poly.monomial(F, exps, c)})

    def __add__(self, other: "PolyVec") -> "PolyVec":
        out = dict(self.parts)
        for lab, p in other.parts.items():
            q = out.get(lab)
            s = p if q is None else q + p
            if s.is_zero():
                out.pop(lab, None)
            else:
                out[lab] = s
        return PolyVec(self.n, out)

    def __sub__(self, other: "PolyVec") -> "PolyVec":
        return self + other.scale(-1)

    def scale(self, c) -> "PolyVec":
        out = {}
        for lab, p in self.parts.items():
            q = p.scale(c)
            if not q.is_zero():
                out[lab] = q
        return PolyVec(self.n, out)

    def is_zero(self) -> bool:
        return not self.parts

    def __eq__(self, other):
        if not isinstance(other, PolyVec):
            return NotImplemented
        return self.n == other.n and self.parts == other.parts

    def __str__(self):
        if not self.parts:
            return "0"
        return " + ".join(f"[{p}]e{lab}" for lab, p in sorted(self.parts.items(), key=lambda t: str(t[0])))


# -- generators --------------------------------------------------------------


def _psi_poly(pack: ParamPack, label: tuple, k: int, f: Poly) -> tuple[tuple, Poly]:
    """psi_k (0-based) on f e_label: returns (new label, new polynomial)."""
    i, j = label[k], label[k + 1]
    if i == j:
        return label, f.divided_difference(k)
    new = list(label)
    new[k], new[k + 1] = j, i
    n = f.n
    P = pack.P[j, i]
    if P.is_constant():
        out = f.swap(k).scale(P.constant_term())
    else:
        positions = [k, k + 1]
        out = P.embed(n, positions).mul(f.swap(k))
    return tuple(new), out


def act_generator(pack: ParamPack, letter: tuple, v: PolyVec) -> PolyVec:
    kind = letter[0]
    out = PolyVec(v.n)
    if kind == "e":
        lab = tuple(letter[1])
        p = v.parts.get(lab)
        return PolyVec(v.n, {lab: p} if p is not None else {})
    if kind == "poly":
        f = letter[1]
        return PolyVec(v.n, {lab: q for lab, p in v.parts.items() if not (q := f.mul(p)).is_zero()})
    k = letter[1] - 1
    if not 0 <= k < v.n - (kind == "psi"):
        raise WordError(f"strand index {letter[1]} out of range for {v.n} strands")
    if kind == "y":
        return PolyVec(v.n, {lab: p.shift(k) for lab, p in v.parts.items()})
    if kind == "psi":
        for lab, p in v.parts.items():
            new, q = _psi_poly(pack, lab, k, p)
            if not q.is_zero():
                out = out + PolyVec(v.n, {new: q})
        return out
    raise WordError(f"unknown letter {letter!r}")


def target_label(label: tuple, letters: Sequence[tuple]) -> tuple:
    """Label reached after acting by the word on e_label (letters act right to left)."""
    lab = list(label)
    for letter in reversed(letters):
        if letter[0] == "psi":
            k = letter[1] - 1
            if not 0 <= k < len(lab) - 1:
                raise WordError(f"crossing psi_{letter[1]} out of range")
            lab[k], lab[k + 1] = lab[k + 1], lab[k]
        elif letter[0] == "y":
            if not 1 <= letter[1] <= len(lab):
                raise WordError(f"dot y_{letter[1]} out of range")
        elif letter[0] == "e":
            if tuple(letter[1]) != tuple(lab):
                return None
    return tuple(lab)


@dataclass
class KLRElement:
    """sum of coeff * word * e_label, all words starting at the same label."""

    label: tuple
    terms: list  # (Scalar | int, tuple of letters)

    @classmethod
    def word(cls, label, *letters, coeff=1) -> "KLRElement":
        return cls(tuple(label), [(coeff, tuple(letters))])

    def __add__(self, other: "KLRElement") -> "KLRElement":
        if other.label != self.label:
            raise WordError("adding elements with different idempotents")
        return KLRElement(self.label, self.terms + other.terms)

    def __sub__(self, other: "KLRElement") -> "KLRElement":
        if other.label != self.label:
            raise WordError("adding elements with different idempotents")
        return KLRElement(self.label, self.terms + [(-c, w) for c, w in other.terms])

    def check(self):
        for _c, w in self.terms:
            for letter in w:
                if letter[0] not in ("e", "y", "psi", "poly"):
                    raise WordError(f"unknown letter {letter!r}")
            if target_label(self.label, w) is None:
                raise WordError("idempotent letter inconsistent with the transported label")


def act(pack: ParamPack, el: KLRElement, v: PolyVec) -> PolyVec:
    el.check()
    base = act_generator(pack, ("e", el.label), v)
    total = PolyVec(v.n)
    for c, w in el.terms:
        cur = base
        for letter in reversed(w):
            cur = act_generator(pack, letter, cur)
            if cur.is_zero():
                break
        total = total + cur.scale(c)
    return total


# -- grading -----------------------------------------------------------------


def word_degree(datum: CartanDatum, label: tuple, letters: Sequence[tuple]) -> Fraction:
    lab = list(label)
    deg = Fraction(0)
    for letter in reversed(letters):
        if letter[0] == "y":
            deg += 2 * datum.d[lab[letter[1] - 1]]
        elif letter[0] == "psi":
            k = letter[1] - 1
            deg += -datum.form(lab[k], lab[k + 1])
            lab[k], lab[k + 1] = lab[k + 1], lab[k]
        elif letter[0] == "poly":
            raise WordError("polynomial letters have no intrinsic degree")
    return deg


def degree(datum: CartanDatum, el: KLRElement):
    """Common degree of all words, or None if they disagree."""
    degs = {word_degree(datum, el.label, w) for _c, w in el.terms}
    if len(degs) == 1:
        d = degs.pop()
        return int(d) if d.denominator == 1 else d
    return None if degs else 0


def label_shift(pack: ParamPack, label: tuple) -> Fraction:
    """Degree offset of e_label making the representation degree-additive."""
    s = Fraction(0)
    for a in range(len(label)):
        for b in range(a + 1, len(label)):
            if label[a] != label[b]:
                s -= pack.degree_shift_term(label[a], label[b])
    return s


def vector_degrees(pack: ParamPack, v: PolyVec) -> set:
    """Shifted weighted degrees (z_k of weight 2 d_{i_k}) of every term of v."""
    degs = set()
    for lab, p in v.parts.items():
        w = [2 * pack.datum.d[i] for i in lab]
        shift = label_shift(pack, lab)
        degs |= {x + shift for x in p.weighted_degrees(w)}
    return degs


# -- relation verification --------------------------------------------------


def _lift(pack: ParamPack, Q: Poly, n: int, a: int, b: int) -> Poly:
    return Q.embed(n, [a, b])


def relation_instances(pack: ParamPack, label: tuple) -> Iterable[tuple[str, KLRElement, KLRElement]]:
    """Every defining relation applicable at e_label as (family, lhs, rhs)."""
    n = len(label)
    W = KLRElement.word
    zero = KLRElement(label, [])
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            yield "dots_commute", W(label, ("y", a), ("y", b)), W(label, ("y", b), ("y", a))
    for k in range(1, n):
        i, j = label[k - 1], label[k]
        for a in range(1, n + 1):
            if a not in (k, k + 1):
                yield "dot_far", W(label, ("y", a), ("psi", k)), W(label, ("psi", k), ("y", a))
        if i != j:
            yield "dot_crossing_left", W(label, ("y", k), ("psi", k)), W(label, ("psi", k), ("y", k + 1))
            yield "dot_crossing_right", W(label, ("y", k + 1), ("psi", k)), W(label, ("psi", k), ("y", k))
            Qk = _lift(pack, pack.Q(i, j), n, k - 1, k)
            yield "bigon", W(label, ("psi", k), ("psi", k)), W(label, ("poly", Qk))
        else:
            one = W(label)
            yield "nilhecke_left", W(label, ("y", k), ("psi", k)) - W(label, ("psi", k), ("y", k + 1)), one
            yield "nilhecke_right", W(label, ("psi", k), ("y", k)) - W(label, ("y", k + 1), ("psi", k)), one
            yield "bigon", W(label, ("psi", k), ("psi", k)), zero
        for l in range(k + 2, n):
            yield "crossings_far", W(label, ("psi", k), ("psi", l)), W(label, ("psi", l), ("psi", k))
    for k in range(1, n - 1):
        a, b, c = label[k - 1], label[k], label[k + 1]
        lhs = W(label, ("psi", k), ("psi", k + 1), ("psi", k)) - W(label, ("psi", k + 1), ("psi", k), ("psi", k + 1))
        if a == c and a != b:
            Q = pack.Q(a, b)
            num = _lift(pack, Q, n, k + 1, k) - _lift(pack, Q, n, k - 1, k)
            corr = num.div_difference(k - 1, k + 1)
            yield "braid_corrected", lhs, W(label, ("poly", corr))
        else:
            yield "braid", lhs, zero


def monomials(n: int, max_degree: int) -> Iterable[tuple]:
    for total in range(max_degree + 1):
        for combo in itertools.combinations_with_replacement(range(n), total):
            e = [0] * n
            for k in combo:
                e[k] += 1
            yield tuple(e)


def verify_relations(
    datum: CartanDatum,
    pack: ParamPack,
    n: int,
    max_degree: int,
    labels: Sequence[tuple] | None = None,
    sample: int | None = None,
    seed: int = 0,
) -> Report:
    """Check every relation instance on every monomial e_label z^a with |a| <= max_degree.

    Labels are enumerated exhaustively unless given; with ``sample`` set, that
    many labels are drawn at random instead.
    """
    if labels is None:
        labels = list(itertools.product(datum.index, repeat=n))
        if sample is not None and sample < len(labels):
            labels = random.Random(seed).sample(labels, sample)
    F = pack.field
    rep = Report()
    counts: dict = {}
    failures: dict = {}
    mons = list(monomials(n, max_degree))
    for lab in labels:
        lab = tuple(lab)
        for family, lhs, rhs in relation_instances(pack, lab):
            counts[family] = counts.get(family, 0) + 1
            for e in mons:
                v = PolyVec.basis(F, lab, e)
                if act(pack, lhs, v) != act(pack, rhs, v):
                    failures.setdefault(family, []).append({"label": lab, "monomial": e, "lhs": str(act(pack, lhs, v)), "rhs": str(act(pack, rhs, v))})
                    break
    for family in sorted(counts):
        bad = failures.get(family, [])
        rep.add(family, not bad, instances=counts[family], discrepancies=bad[:10], discrepancy_count=len(bad))
    rep.meta["monomials_per_label"] = len(mons)
    rep.meta["labels"] = len(labels)
    return rep
