"""PBW normal form in the asymptotic enveloping algebra of gl_N.

Generators are the matrix units E[i,j], 1 <= i,j <= N, with
[E_ij, E_kl] = delta_jk E_il - delta_li E_kj, and the product relation
x*y - y*x = hbar*[x,y].  An element is a finite rational[hbar]-linear
combination of PBW monomials: products of generators weakly increasing
with respect to a fixed total order on the N^2 generators.

Normal ordering is bubble-sort style: an adjacent out-of-order pair
E_kl * E_ij (E_kl ranked after E_ij) is replaced by

    E_ij * E_kl + hbar * (delta_li E_kj - delta_jk E_il),

which strictly decreases the inversion count at fixed word length and
spawns strictly shorter words otherwise, so rewriting terminates.  Term
maps are merged after every step and zero coefficients are purged, so
equality of elements is equality of dictionaries.

Elements are immutable values once built; all operations are pure
functions, safe to evaluate concurrently.
"""

from __future__ import annotations

import hashlib
from fractions import Fraction

from . import hbar as hb
from .hbar import HbarPoly


class AlgebraError(Exception):
    """Structural misuse: mixed ambient data, bad indices, broken invariants."""


def gen_code(N: int, i: int, j: int) -> int:
    if not (1 <= i <= N and 1 <= j <= N):
        raise AlgebraError("generator E[%d,%d] out of range for N=%d" % (i, j, N))
    return (i - 1) * N + (j - 1)


def gen_ij(N: int, code: int) -> tuple[int, int]:
    return code // N + 1, code % N + 1


class GeneratorOrder:
    """A total order on the N^2 matrix units, given by an explicit rank array.

    The rank array is a bijection gen-code -> 0..N^2-1; PBW monomials are
    sorted by increasing rank.  Orders carry a content fingerprint so that
    serialized artifacts can detect an order change.
    """

    __slots__ = ("N", "ranks", "label", "_fp", "_pair_cache")

    def __init__(self, N: int, ranked_gens, label: str = "custom"):
        self.N = N
        ranks = [-1] * (N * N)
        for r, (i, j) in enumerate(ranked_gens):
            ranks[gen_code(N, i, j)] = r
        if sorted(ranks) != list(range(N * N)):
            raise AlgebraError("rank array is not a bijection onto 0..N^2-1")
        self.ranks = tuple(ranks)
        self.label = label
        body = ("%d:" % N) + ",".join(map(str, self.ranks))
        self._fp = hashlib.sha256(body.encode()).hexdigest()[:12]
        self._pair_cache = {}

    @classmethod
    def lex(cls, N: int) -> "GeneratorOrder":
        """Row-major lexicographic order on (i, j)."""
        gens = [(i, j) for i in range(1, N + 1) for j in range(1, N + 1)]
        return cls(N, gens, label="lex")

    @property
    def fingerprint(self) -> str:
        return self._fp

    def rank(self, code: int) -> int:
        return self.ranks[code]

    def __eq__(self, other):
        return isinstance(other, GeneratorOrder) and self.N == other.N and self.ranks == other.ranks

    def __hash__(self):
        return hash((self.N, self.ranks))

    def __repr__(self):
        return "GeneratorOrder(N=%d, %s, %s)" % (self.N, self.label, self._fp)


def _gen_bracket(N: int, g1: int, g2: int):
    """[E_g1, E_g2] as a tuple of (gen code, sign) pairs, possibly empty."""
    i, j = g1 // N + 1, g1 % N + 1
    k, l = g2 // N + 1, g2 % N + 1
    out = []
    if j == k:
        out.append(((i - 1) * N + (l - 1), 1))
    if l == i:
        out.append(((k - 1) * N + (j - 1), -1))
    # E_ii paired with E_ii cancels exactly
    if len(out) == 2 and out[0][0] == out[1][0]:
        return ()
    return tuple(out)


def _word_to_mono(word):
    """Compress a sorted generator word into ((code, exp), ...) form."""
    mono = []
    for g in word:
        if mono and mono[-1][0] == g:
            mono[-1] = (g, mono[-1][1] + 1)
        else:
            mono.append((g, 1))
    return tuple(mono)


def _mono_to_word(mono):
    out = []
    for g, e in mono:
        out.extend([g] * e)
    return tuple(out)


def normal_order_word(order: GeneratorOrder, word) -> dict:
    """Rewrite an arbitrary generator word into PBW form.

    Returns a map {monomial: HbarPoly}.  The worklist keys pending words so
    coefficients of identical intermediates merge as early as possible.
    """
    ranks = order.ranks
    N = order.N
    pending = {tuple(word): hb.ONE}
    done = {}
    while pending:
        w, c = pending.popitem()
        # locate the first adjacent inversion
        pos = -1
        for p in range(len(w) - 1):
            if ranks[w[p]] > ranks[w[p + 1]]:
                pos = p
                break
        if pos < 0:
            mono = _word_to_mono(w)
            acc = done.get(mono)
            done[mono] = c if acc is None else acc + c
            continue
        swapped = w[:pos] + (w[pos + 1], w[pos]) + w[pos + 2 :]
        acc = pending.get(swapped)
        pending[swapped] = c if acc is None else acc + c
        for g, sign in _gen_bracket(N, w[pos], w[pos + 1]):
            shorter = w[:pos] + (g,) + w[pos + 2 :]
            extra = c.shift(1) if sign == 1 else c.shift(1).scale(-1)
            acc = pending.get(shorter)
            pending[shorter] = extra if acc is None else acc + extra
    return {m: c for m, c in done.items() if not c.is_zero()}


def _mono_product(order: GeneratorOrder, ma, mb) -> dict:
    """Normal form of the concatenation of two PBW monomials, cached."""
    cache = order._pair_cache
    key = (ma, mb)
    hit = cache.get(key)
    if hit is None:
        hit = normal_order_word(order, _mono_to_word(ma) + _mono_to_word(mb))
        cache[key] = hit
    return hit


class AlgebraElement:
    """An exact element of the asymptotic enveloping algebra of gl_N.

    terms maps PBW monomials ((gen code, exponent), ...) to nonzero
    HbarPoly coefficients; the empty monomial is the unit.
    """

    __slots__ = ("order", "terms")

    def __init__(self, order: GeneratorOrder, terms: dict):
        self.order = order
        self.terms = terms

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------
    @classmethod
    def zero(cls, order) -> "AlgebraElement":
        return cls(order, {})

    @classmethod
    def scalar(cls, order, coeff) -> "AlgebraElement":
        poly = coeff if isinstance(coeff, HbarPoly) else HbarPoly.const(coeff)
        if poly.is_zero():
            return cls(order, {})
        return cls(order, {(): poly})

    @classmethod
    def one(cls, order) -> "AlgebraElement":
        return cls.scalar(order, 1)

    @classmethod
    def generator(cls, order, i: int, j: int) -> "AlgebraElement":
        return cls(order, {((gen_code(order.N, i, j), 1),): hb.ONE})

    @classmethod
    def from_terms(cls, order, raw: dict) -> "AlgebraElement":
        terms = {m: c for m, c in raw.items() if not c.is_zero()}
        return cls(order, terms)

    # ------------------------------------------------------------------
    # structure
    # ------------------------------------------------------------------
    @property
    def N(self) -> int:
        return self.order.N

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.order == other.order and self.terms == other.terms

    def __hash__(self):
        return hash((self.order, frozenset(self.terms.items())))

    def _check_compatible(self, other: "AlgebraElement"):
        if self.order != other.order:
            raise AlgebraError("elements live over different N or generator orders")

    # ------------------------------------------------------------------
    # linear operations
    # ------------------------------------------------------------------
    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check_compatible(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            acc = out.get(m)
            s = c if acc is None else acc + c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
        return AlgebraElement(self.order, out)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.order, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scale(self, q) -> "AlgebraElement":
        """Multiply by a rational or HbarPoly scalar."""
        if isinstance(q, HbarPoly):
            if q.is_zero():
                return AlgebraElement(self.order, {})
            out = {}
            for m, c in self.terms.items():
                p = c * q
                if not p.is_zero():
                    out[m] = p
            return AlgebraElement(self.order, out)
        q = Fraction(q)
        if not q:
            return AlgebraElement(self.order, {})
        return AlgebraElement(self.order, {m: c.scale(q) for m, c in self.terms.items()})

    # ------------------------------------------------------------------
    # multiplication and the asymptotic commutator
    # ------------------------------------------------------------------
    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check_compatible(other)
        out = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                c = ca * cb
                for m, p in _mono_product(self.order, ma, mb).items():
                    prod = p * c
                    acc = out.get(m)
                    s = prod if acc is None else acc + prod
                    if s.is_zero():
                        out.pop(m, None)
                    else:
                        out[m] = s
        return AlgebraElement(self.order, out)

    def commutator(self, other: "AlgebraElement") -> "AlgebraElement":
        """(self*other - other*self) / hbar, exact.

        A nonzero constant hbar-term in the difference means the rewrite
        engine is broken, and raises.
        """
        diff = self * other - other * self
        out = {}
        for m, c in diff.terms.items():
            if not c.divisible_by_hbar():
                raise AlgebraError(
                    "internal consistency failure: xy-yx not divisible by hbar at %r" % (m,)
                )
            out[m] = c.divide_hbar()
        return AlgebraElement(self.order, out)

    # ------------------------------------------------------------------
    # hbar manipulation
    # ------------------------------------------------------------------
    def times_hbar(self, power: int = 1) -> "AlgebraElement":
        return AlgebraElement(self.order, {m: c.shift(power) for m, c in self.terms.items()})

    def divide_hbar(self) -> "AlgebraElement":
        out = {}
        for m, c in self.terms.items():
            out[m] = c.divide_hbar()
        return AlgebraElement(self.order, out)

    def divisible_by_hbar(self) -> bool:
        return all(c.divisible_by_hbar() for c in self.terms.values())

    def at_hbar_zero(self) -> "AlgebraElement":
        out = {}
        for m, c in self.terms.items():
            p = c.at_hbar_zero()
            if not p.is_zero():
                out[m] = p
        return AlgebraElement(self.order, out)

    def substitute_hbar(self, value) -> "AlgebraElement":
        """Evaluate hbar at an explicit rational value."""
        out = {}
        for m, c in self.terms.items():
            v = c.evaluate(value)
            if v:
                out[m] = HbarPoly.const(v)
        return AlgebraElement(self.order, out)

    # ------------------------------------------------------------------
    # queries
    # ------------------------------------------------------------------
    def pbw_degree(self) -> int:
        """Maximal total exponent over stored monomials; -1 if zero."""
        if not self.terms:
            return -1
        return max(sum(e for _, e in m) for m in self.terms)

    def kazhdan_degree(self, pyramid) -> float:
        """Filtration degree: deg E_ij = col(j)-col(i)+1 and deg hbar = 1.

        Returns -inf for the zero element.
        """
        if not self.terms:
            return float("-inf")
        N = self.N
        best = None
        for m, c in self.terms.items():
            d = 0
            for g, e in m:
                i, j = gen_ij(N, g)
                d += e * (pyramid.col(j) - pyramid.col(i) + 1)
            d += c.degree()
            if best is None or d > best:
                best = d
        return best

    def coefficient(self, mono) -> HbarPoly:
        return self.terms.get(tuple(mono), hb.ZERO)

    def monomials(self):
        return self.terms.keys()

    def change_order(self, new_order: GeneratorOrder) -> "AlgebraElement":
        """Re-express the element in PBW form for another generator order."""
        if new_order.N != self.N:
            raise AlgebraError("cannot change order across different N")
        out = {}
        for m, c in self.terms.items():
            for m2, p in normal_order_word(new_order, _mono_to_word(m)).items():
                prod = p * c
                acc = out.get(m2)
                s = prod if acc is None else acc + prod
                if s.is_zero():
                    out.pop(m2, None)
                else:
                    out[m2] = s
        return AlgebraElement(new_order, out)

    def sorted_terms(self):
        """Terms in a deterministic order (by rank sequence of the monomial)."""
        ranks = self.order.ranks

        def key(item):
            m, _ = item
            return (sum(e for _, e in m), tuple((ranks[g], e) for g, e in m))

        return sorted(self.terms.items(), key=key)

    # ------------------------------------------------------------------
    # serialization: {"N":…, "terms":[{"mono":[[i,j,exp]…], "coeff":[…]}]}
    # ------------------------------------------------------------------
    def to_json(self) -> dict:
        N = self.N
        terms = []
        for m, c in self.sorted_terms():
            terms.append(
                {
                    "mono": [[*gen_ij(N, g), e] for g, e in m],
                    "coeff": c.to_json(),
                }
            )
        return {"N": N, "terms": terms}

    @classmethod
    def from_json(cls, data: dict, order: GeneratorOrder) -> "AlgebraElement":
        if data["N"] != order.N:
            raise AlgebraError("JSON element has N=%d, order has N=%d" % (data["N"], order.N))
        terms = {}
        for t in data["terms"]:
            mono = tuple((gen_code(order.N, i, j), e) for i, j, e in t["mono"])
            terms[mono] = HbarPoly.from_json(t["coeff"])
        return cls.from_terms(order, terms)

    def __repr__(self):
        from .render import render_algebra

        return "<%s>" % render_algebra(self)
