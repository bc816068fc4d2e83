"""Reduced representatives for tensor modules over the enveloping algebra.

A rank-t module element represents a class in U ⊗ (C^N)^{⊗t} modulo the
right action of the shifted nilpotent part: terms map (PBW monomial,
slot tuple) pairs to hbar-polynomial coefficients, where the slot tuple
lists basis indices of the t tensor factors.

The right action of xi on u ⊗ v is  u*xi ⊗ v - hbar * u ⊗ (xi.v), and in
the quotient a trailing m-factor rewrites as

    (u xi) ⊗ v  ->  psi(xi) u ⊗ v + hbar * sum_a u ⊗ (xi acting on slot a).

With the canonical generator order the m-generators rank last, so any
monomial containing one has one in final position, and peeling it
strictly decreases the m-factor count: the rewrite terminates and the
reduced form carries no m-generators at all.

The left quotient by the Borel-type subalgebra b (subregular pyramids
only) is monomial deletion: since b-generators rank first, a PBW
monomial lies in b·U exactly when its leftmost factor is in b.

Fusion concatenates two reduced elements: every U-factor of the right
element is transported through the left element's slots generator by
generator (in the right factor's own PBW order, left to right), the slot
tuples are concatenated, and the result is reduced again.
"""

from __future__ import annotations

from fractions import Fraction

from . import hbar as hb
from .algebra import AlgebraElement, AlgebraError, gen_code, gen_ij
from .hbar import HbarPoly
from .pyramid import CharacterPsi, Pyramid

REDUCTION_STEP_BUDGET = 10_000_000


class ReductionError(Exception):
    """Non-termination guard tripped or structural misuse."""


class ModuleElement:
    """An element of U ⊗ (C^N)^{⊗t} / m^psi in reduced form."""

    __slots__ = ("pyramid", "order", "t", "terms")

    def __init__(self, pyramid: Pyramid, t: int, terms: dict, order=None):
        self.pyramid = pyramid
        self.order = order or pyramid.default_order()
        self.t = t
        self.terms = terms

    # ------------------------------------------------------------------
    @classmethod
    def vacuum(cls, pyramid: Pyramid) -> "ModuleElement":
        return cls(pyramid, 0, {((), ()): hb.ONE})

    @classmethod
    def basis_vector(cls, pyramid: Pyramid, k: int) -> "ModuleElement":
        if not 1 <= k <= pyramid.N:
            raise AlgebraError("slot index %d out of range" % k)
        return cls(pyramid, 1, {((), (k,)): hb.ONE})

    @classmethod
    def embed(cls, el: AlgebraElement, pyramid: Pyramid, slots=()) -> "ModuleElement":
        """u -> u ⊗ v_slots, unreduced."""
        slots = tuple(slots)
        terms = {(m, slots): c for m, c in el.terms.items()}
        return cls(pyramid, len(slots), terms, order=el.order)

    @classmethod
    def zero(cls, pyramid: Pyramid, t: int) -> "ModuleElement":
        return cls(pyramid, t, {})

    # ------------------------------------------------------------------
    @property
    def N(self) -> int:
        return self.pyramid.N

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, ModuleElement):
            return NotImplemented
        return (
            self.pyramid == other.pyramid
            and self.t == other.t
            and self.terms == other.terms
        )

    def _check(self, other: "ModuleElement"):
        if self.pyramid != other.pyramid or self.t != other.t or self.order != other.order:
            raise AlgebraError("module elements live over different ambient data")

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            acc = out.get(k)
            s = c if acc is None else acc + c
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return ModuleElement(self.pyramid, self.t, out, self.order)

    def __neg__(self):
        return ModuleElement(
            self.pyramid, self.t, {k: -c for k, c in self.terms.items()}, self.order
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, q) -> "ModuleElement":
        if isinstance(q, HbarPoly):
            out = {}
            for k, c in self.terms.items():
                p = c * q
                if not p.is_zero():
                    out[k] = p
            return ModuleElement(self.pyramid, self.t, out, self.order)
        q = Fraction(q)
        if not q:
            return ModuleElement(self.pyramid, self.t, {}, self.order)
        return ModuleElement(
            self.pyramid, self.t, {k: c.scale(q) for k, c in self.terms.items()}, self.order
        )

    def coefficient_at(self, slots) -> AlgebraElement:
        """The U-factor multiplying the given slot tuple."""
        slots = tuple(slots)
        out = {m: c for (m, s), c in self.terms.items() if s == slots}
        return AlgebraElement(self.order, out)

    def slot_support(self):
        return sorted({s for (_, s) in self.terms})

    def sorted_terms(self):
        ranks = self.order.ranks

        def key(item):
            (m, s), _ = item
            return (s, sum(e for _, e in m), tuple((ranks[g], e) for g, e in m))

        return sorted(self.terms.items(), key=key)

    # ------------------------------------------------------------------
    # serialization: {"N":…, "t":…, "terms":[{"mono":…, "slots":…, "coeff":…}]}
    # ------------------------------------------------------------------
    def to_json(self) -> dict:
        N = self.N
        terms = []
        for (m, s), c in self.sorted_terms():
            terms.append(
                {
                    "mono": [[*gen_ij(N, g), e] for g, e in m],
                    "slots": list(s),
                    "coeff": c.to_json(),
                }
            )
        return {"N": N, "t": self.t, "terms": terms}

    @classmethod
    def from_json(cls, data: dict, pyramid: Pyramid) -> "ModuleElement":
        if data["N"] != pyramid.N:
            raise AlgebraError("JSON rank mismatch")
        order = pyramid.default_order()
        terms = {}
        for t in data["terms"]:
            mono = tuple((gen_code(pyramid.N, i, j), e) for i, j, e in t["mono"])
            key = (mono, tuple(t["slots"]))
            terms[key] = HbarPoly.from_json(t["coeff"])
        return cls(pyramid, data["t"], {k: c for k, c in terms.items() if not c.is_zero()}, order)

    def __repr__(self):
        from .render import render_module

        return "<%s>" % render_module(self)


# ----------------------------------------------------------------------
# reduction modulo the shifted m-action
# ----------------------------------------------------------------------
def reduce_mod_m_psi(
    raw: ModuleElement, psi: CharacterPsi | None = None, strategy: str = "stack"
) -> ModuleElement:
    """Rewrite to the reduced form with no m-generators in any monomial.

    strategy picks which pending term is peeled next ("stack": most
    recently produced; "sorted": smallest key); the rewrite is confluent,
    so the result must not depend on it.
    """
    p = raw.pyramid
    psi = psi or p.psi()
    m_codes = p.m_codes()
    N = p.N
    pending = dict(raw.terms)
    done: dict = {}
    steps = 0
    while pending:
        steps += 1
        if steps > REDUCTION_STEP_BUDGET:
            raise ReductionError("reduction step budget exceeded; rewrite engine broken?")
        if strategy == "stack":
            (mono, slots), c = pending.popitem()
        else:
            key = min(pending)
            mono, slots = key
            c = pending.pop(key)
        if not mono or mono[-1][0] not in m_codes:
            if any(g in m_codes for g, _ in mono):
                raise ReductionError(
                    "monomial has an interior m-factor; order is not m-last"
                )
            key = (mono, slots)
            acc = done.get(key)
            s = c if acc is None else acc + c
            if s.is_zero():
                done.pop(key, None)
            else:
                done[key] = s
            continue
        g, e = mono[-1]
        u = mono[:-1] + ((g, e - 1),) if e > 1 else mono[:-1]
        i, j = gen_ij(N, g)
        val = psi(i, j)

        def push(key, coeff):
            acc = pending.get(key)
            s = coeff if acc is None else acc + coeff
            if s.is_zero():
                pending.pop(key, None)
            else:
                pending[key] = s

        if val:
            push((u, slots), c.scale(val))
        ch = c.shift(1)
        for a, k in enumerate(slots):
            if k == j:
                push((u, slots[:a] + (i,) + slots[a + 1 :]), ch)
    return ModuleElement(p, raw.t, done, raw.order)


def act_left(xi: AlgebraElement, m: ModuleElement) -> ModuleElement:
    """Left multiplication on the U-factor followed by reduction."""
    if xi.N != m.N:
        raise AlgebraError("mismatched N")
    out: dict = {}
    from .algebra import _mono_product

    for (um, slots), c in m.terms.items():
        for xm, xc in xi.terms.items():
            cc = xc * c
            for mono, pc in _mono_product(m.order, xm, um).items():
                prod = pc * cc
                key = (mono, slots)
                acc = out.get(key)
                s = prod if acc is None else acc + prod
                if s.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = s
    return reduce_mod_m_psi(ModuleElement(m.pyramid, m.t, out, m.order))


def ad_action(xi_ij, m: ModuleElement) -> ModuleElement:
    """Adjoint action of a single m-generator: commutator on the U-factor
    plus the standard action on each slot, then reduction."""
    i, j = xi_ij
    p = m.pyramid
    if not p.in_m(i, j):
        raise AlgebraError("ad is defined here for m-generators only; E[%d,%d] is not in m" % (i, j))
    xi = AlgebraElement.generator(m.order, i, j)
    bracket_cache: dict = {}
    out: dict = {}

    def push(key, coeff):
        acc = out.get(key)
        s = coeff if acc is None else acc + coeff
        if s.is_zero():
            out.pop(key, None)
        else:
            out[key] = s

    for (um, slots), c in m.terms.items():
        br = bracket_cache.get(um)
        if br is None:
            u_el = AlgebraElement(m.order, {um: hb.ONE})
            br = xi.commutator(u_el)
            bracket_cache[um] = br
        for mono, pc in br.terms.items():
            push((mono, slots), pc * c)
        for a, k in enumerate(slots):
            if k == j:
                push((um, slots[:a] + (i,) + slots[a + 1 :]), c)
    return reduce_mod_m_psi(ModuleElement(p, m.t, out, m.order))


def is_whittaker(m: ModuleElement, pyramid: Pyramid | None = None):
    """Check invariance under the shifted m-action.

    Returns (True, None, None) or (False, offending (i,j), residue).
    """
    p = pyramid or m.pyramid
    for (i, j) in p.m_basis():
        res = ad_action((i, j), m)
        if not res.is_zero():
            return False, (i, j), res
    return True, None, None


# ----------------------------------------------------------------------
# left quotient by the Borel-type subalgebra
# ----------------------------------------------------------------------
def reduce_mod_b_left(m: ModuleElement) -> ModuleElement:
    """Delete every term whose monomial starts with a b-generator.

    Requires the subregular pyramid with its canonical order, where the
    b-generators rank first; surviving monomials then use only the
    generators of l and of the last matrix column.
    """
    p = m.pyramid
    if not p.is_subregular():
        raise ReductionError("left b-quotient is supported for subregular pyramids only")
    if m.order != p.default_order():
        raise ReductionError("left b-quotient needs the canonical generator order")
    b_codes = p.b_codes()
    out = {
        (mono, slots): c
        for (mono, slots), c in m.terms.items()
        if not (mono and mono[0][0] in b_codes)
    }
    return ModuleElement(p, m.t, out, m.order)


def b_reduction_is_zero(x: AlgebraElement, p: Pyramid) -> bool:
    """True when x lies in b·U, i.e. every monomial has a leading b-factor."""
    b_codes = p.b_codes()
    return all(mono and mono[0][0] in b_codes for mono in x.monomials())


# ----------------------------------------------------------------------
# fusion
# ----------------------------------------------------------------------
def right_mul_gen(m: ModuleElement, g: int) -> ModuleElement:
    """The right action of a single generator: u*g ⊗ v - hbar u ⊗ (g.v)."""
    from .algebra import _mono_product

    N = m.N
    i, j = gen_ij(N, g)
    gm = ((g, 1),)
    out: dict = {}

    def push(key, coeff):
        acc = out.get(key)
        s = coeff if acc is None else acc + coeff
        if s.is_zero():
            out.pop(key, None)
        else:
            out[key] = s

    for (um, slots), c in m.terms.items():
        for mono, pc in _mono_product(m.order, um, gm).items():
            push((mono, slots), pc * c)
        ch = c.shift(1)
        for a, k in enumerate(slots):
            if k == j:
                push((um, slots[:a] + (i,) + slots[a + 1 :]), ch.scale(-1))
    return ModuleElement(m.pyramid, m.t, out, m.order)


def transport(m: ModuleElement, word) -> ModuleElement:
    """Right-act by a product of generators, left factor first."""
    cur = m
    for g in word:
        cur = right_mul_gen(cur, g)
    return cur


def fuse(a: ModuleElement, b: ModuleElement) -> ModuleElement:
    """The product [x] ⊗ [y] -> [x·y] on reduced representatives.

    Each right term's U-monomial is transported through the left factor's
    slots in its own PBW order; slot tuples concatenate; the total is
    reduced once at the end.
    """
    if a.pyramid != b.pyramid or a.order != b.order:
        raise AlgebraError("fuse needs a common pyramid and order")
    p = a.pyramid
    t_out = a.t + b.t
    out: dict = {}
    transported: dict = {}
    from .algebra import _mono_to_word

    for (ym, yslots), yc in b.terms.items():
        moved = transported.get(ym)
        if moved is None:
            moved = transport(a, _mono_to_word(ym))
            transported[ym] = moved
        for (um, uslots), uc in moved.terms.items():
            key = (um, uslots + yslots)
            prod = uc * yc
            acc = out.get(key)
            s = prod if acc is None else acc + prod
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
    return reduce_mod_m_psi(ModuleElement(p, t_out, out, a.order))


def right_act(m: ModuleElement, c: AlgebraElement) -> ModuleElement:
    """Right action of an algebra element: fusion with a rank-zero factor."""
    return fuse(m, ModuleElement.embed(c, m.pyramid, ()))
