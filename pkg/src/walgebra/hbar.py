"""Exact polynomials in the deformation parameter hbar.

Coefficients are arbitrary-precision rationals; a polynomial is stored as
a tuple of Fractions indexed by hbar-power with trailing zeros stripped,
so equality of values is equality of representations.  There is no
floating point anywhere in this package.
"""

from __future__ import annotations

from fractions import Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


class HbarPoly:
    """A polynomial sum_d c_d * hbar^d with rational c_d, canonically stored."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c) -> "HbarPoly":
        return cls((Fraction(c),))

    @classmethod
    def hbar(cls, power: int = 1, c=1) -> "HbarPoly":
        """c * hbar^power."""
        return cls((_ZERO,) * power + (Fraction(c),))

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Top hbar-degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, HbarPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "HbarPoly") -> "HbarPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return HbarPoly(out)

    def __neg__(self) -> "HbarPoly":
        return HbarPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "HbarPoly") -> "HbarPoly":
        return self + (-other)

    def __mul__(self, other: "HbarPoly") -> "HbarPoly":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    if cb:
                        out[i + j] += ca * cb
        return HbarPoly(out)

    def scale(self, q) -> "HbarPoly":
        q = Fraction(q)
        if not q:
            return ZERO
        return HbarPoly(tuple(c * q for c in self.coeffs))

    def shift(self, power: int) -> "HbarPoly":
        """Multiply by hbar^power."""
        if not self.coeffs:
            return ZERO
        return HbarPoly((_ZERO,) * power + self.coeffs)

    def divide_hbar(self) -> "HbarPoly":
        """Exact division by hbar; raises if the constant term is nonzero."""
        if self.coeffs and self.coeffs[0] != 0:
            raise ValueError("not divisible by hbar: constant term %s" % self.coeffs[0])
        return HbarPoly(self.coeffs[1:])

    def coefficient(self, power: int) -> Fraction:
        if 0 <= power < len(self.coeffs):
            return self.coeffs[power]
        return _ZERO

    def constant_term(self) -> Fraction:
        return self.coefficient(0)

    def at_hbar_zero(self) -> "HbarPoly":
        return HbarPoly((self.constant_term(),))

    def hbar_part(self, power: int) -> "HbarPoly":
        """The single component c_power * hbar^power."""
        return HbarPoly((_ZERO,) * power + (self.coefficient(power),))

    def divisible_by_hbar(self) -> bool:
        return not self.coeffs or self.coeffs[0] == 0

    def evaluate(self, value) -> Fraction:
        value = Fraction(value)
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def to_json(self) -> list:
        return ["%d/%d" % (c.numerator, c.denominator) for c in self.coeffs]

    @classmethod
    def from_json(cls, data) -> "HbarPoly":
        return cls(tuple(Fraction(s) for s in data))

    def __repr__(self):
        return "HbarPoly(%r)" % (self.coeffs,)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for d, c in enumerate(self.coeffs):
            if not c:
                continue
            if d == 0:
                parts.append(str(c))
            else:
                h = "ℏ" if d == 1 else "ℏ^%d" % d
                if c == 1:
                    parts.append(h)
                elif c == -1:
                    parts.append("-" + h)
                else:
                    parts.append("%s·%s" % (c, h))
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


ZERO = HbarPoly()
ONE = HbarPoly.const(1)
HBAR = HbarPoly.hbar()
