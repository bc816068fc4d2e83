"""The wonderbolic subspace, its 2-form, and the constant tensor j_c.

Over the subregular pyramid, the wonderbolic subspace w of gl_N is the
direct sum of the nilpotent part m and the Borel-type block
b = span(E_kl : k <= l <= N-1, l >= 2); the subregular nilpotent e
defines the 2-form

    omega(x, y) = Tr(e · [x, y])

on w, computed here by exact matrix algebra over the rationals.  Both m
and b are isotropic, omega is non-degenerate, and its inverse is
r_w = j_c - j_c^21 where j_c is a tensor with first legs in b and second
legs in m and j_c^21 is its leg swap.

Two independent constructions of j_c are kept side by side and checked
against each other:

  * jc_recursive builds the map j_c^21 : m* -> b inductively from the
    first two matrix columns, j_c^21(E*_ij) = delta_{i>2} E_{j,i-1} for
    j <= 2 and E_{j,i-1} + j_c^21(E*_{i-1,j-1}) for j >= 3 (the column
    relation omega(E_{j,i-1}) = -E*_ij + E*_{i-1,j-1} forces the plus
    sign in the second branch);
  * jc_closed_form instantiates the double-sum expression directly.

verify_inverse checks isotropy, non-degeneracy, the equality of the two
constructions, and that r_w composed with omega is the identity on w.
"""

from __future__ import annotations

from fractions import Fraction

from .pyramid import Pyramid


class GeometryError(Exception):
    pass


def _matrix_unit(N: int, i: int, j: int):
    m = [[Fraction(0)] * N for _ in range(N)]
    m[i - 1][j - 1] = Fraction(1)
    return m


def _mat_mul(N, a, b):
    return [
        [sum((a[i][k] * b[k][j] for k in range(N)), Fraction(0)) for j in range(N)]
        for i in range(N)
    ]


def _trace(N, a):
    return sum((a[i][i] for i in range(N)), Fraction(0))


def _e_matrix(p: Pyramid):
    N = p.N
    m = [[Fraction(0)] * N for _ in range(N)]
    for i, j in p.e_pairs():
        m[i - 1][j - 1] = Fraction(1)
    return m


class WonderbolicBasis:
    """Ordered basis of w = m ⊕ b for the subregular pyramid."""

    __slots__ = ("pyramid", "b_basis", "m_basis", "w_basis", "index")

    def __init__(self, N: int):
        p = Pyramid.subregular(N)
        b, _, _, m = p.subregular_roles()
        self.pyramid = p
        self.b_basis = tuple(b)
        self.m_basis = tuple(m)
        self.w_basis = self.b_basis + self.m_basis
        self.index = {ij: k for k, ij in enumerate(self.w_basis)}
        if len(self.b_basis) != len(self.m_basis):
            raise GeometryError("b and m should have equal dimension")

    @property
    def N(self) -> int:
        return self.pyramid.N

    def contains(self, i: int, j: int) -> bool:
        return (i, j) in self.index

    def dim(self) -> int:
        return len(self.w_basis)


def omega_pairing(p: Pyramid, x, y) -> Fraction:
    """Tr(e·[E_x, E_y]) by exact matrix algebra on N x N matrices."""
    N = p.N
    e = _e_matrix(p)
    mx, my = _matrix_unit(N, *x), _matrix_unit(N, *y)
    comm = [
        [u - v for u, v in zip(ru, rv)]
        for ru, rv in zip(_mat_mul(N, mx, my), _mat_mul(N, my, mx))
    ]
    return _trace(N, _mat_mul(N, e, comm))


def omega_matrix(N: int) -> tuple[WonderbolicBasis, list]:
    """The antisymmetric Gram matrix of omega on the wonderbolic basis.

    Entries come from the structure constants: with tr_e(u, v) = 1 exactly
    when u = v+1 and 2 <= v <= N-1 (so that Tr(e E_uv) = tr_e(u, v)),

        omega(E_ab, E_cd) = delta_bc tr_e(a, d) - delta_da tr_e(c, b).

    A random sample of entries is cross-checked against the matrix-product
    definition by the tests.
    """
    if N < 3:
        raise GeometryError("need N >= 3")
    basis = WonderbolicBasis(N)

    def tr_e(u: int, v: int) -> int:
        return 1 if (u == v + 1 and 2 <= v <= N - 1) else 0

    d = basis.dim()
    gram = [[Fraction(0)] * d for _ in range(d)]
    for ai, (a, b) in enumerate(basis.w_basis):
        for bi, (c, dd) in enumerate(basis.w_basis):
            if ai >= bi:
                continue
            val = Fraction((1 if b == c else 0) * tr_e(a, dd) - (1 if dd == a else 0) * tr_e(c, b))
            gram[ai][bi] = val
            gram[bi][ai] = -val
    return basis, gram


def _det_exact(matrix) -> Fraction:
    """Fraction-exact determinant by Gaussian elimination with pivoting."""
    m = [row[:] for row in matrix]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = Fraction(1) / m[c][c]
        for r in range(c + 1, n):
            if m[r][c]:
                f = m[r][c] * inv
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return det


class RMatrixElement:
    """A rational tensor: finite map (first (i,j), second (i,j)) -> Fraction."""

    __slots__ = ("N", "terms")

    def __init__(self, N: int, terms: dict | None = None):
        self.N = N
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v}

    def add(self, first, second, coeff=1):
        key = (tuple(first), tuple(second))
        val = self.terms.get(key, Fraction(0)) + Fraction(coeff)
        if val:
            self.terms[key] = val
        else:
            self.terms.pop(key, None)

    def swap_legs(self) -> "RMatrixElement":
        return RMatrixElement(self.N, {(s, f): c for (f, s), c in self.terms.items()})

    def __sub__(self, other: "RMatrixElement") -> "RMatrixElement":
        out = dict(self.terms)
        for k, c in other.terms.items():
            val = out.get(k, Fraction(0)) - c
            if val:
                out[k] = val
            else:
                out.pop(k, None)
        return RMatrixElement(self.N, out)

    def __add__(self, other: "RMatrixElement") -> "RMatrixElement":
        out = dict(self.terms)
        for k, c in other.terms.items():
            val = out.get(k, Fraction(0)) + c
            if val:
                out[k] = val
            else:
                out.pop(k, None)
        return RMatrixElement(self.N, out)

    def __eq__(self, other):
        return isinstance(other, RMatrixElement) and self.N == other.N and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self):
        return sorted(self.terms.items())

    def to_json(self):
        return {
            "N": self.N,
            "terms": [
                {"first": list(f), "second": list(s), "coeff": "%d/%d" % (c.numerator, c.denominator)}
                for (f, s), c in self.sorted_terms()
            ],
        }


def jc_recursive(N: int) -> RMatrixElement:
    """j_c from the inductive inversion of the omega column relations,
    assembled as a tensor with first legs in b and second legs in m."""
    if N < 3:
        raise GeometryError("need N >= 3")
    basis = WonderbolicBasis(N)
    image: dict = {}

    def j21(i: int, j: int):
        """j_c^21(E*_ij) in b, as a dict (k,l) -> Fraction."""
        key = (i, j)
        hit = image.get(key)
        if hit is not None:
            return hit
        if j <= 2:
            out = {(j, i - 1): Fraction(1)} if i > 2 else {}
        else:
            out = dict(j21(i - 1, j - 1))
            out[(j, i - 1)] = out.get((j, i - 1), Fraction(0)) + 1
        image[key] = out
        return out

    jc = RMatrixElement(N)
    for (i, j) in basis.m_basis:
        for bgen, c in j21(i, j).items():
            if bgen not in basis.index:
                raise GeometryError("recursion left b: %r" % (bgen,))
            jc.add(bgen, (i, j), c)
    return jc


def jc_closed_form(N: int) -> RMatrixElement:
    """Direct instantiation of the double-sum expression for j_c."""
    if N < 3:
        raise GeometryError("need N >= 3")
    jc = RMatrixElement(N)
    for j in range(2, N):
        for i in range(j + 1, N + 1):
            for l in range(2, j + 1):
                jc.add((l, l + i - j - 1), (i, j))
    for i in range(3, N + 1):
        jc.add((1, i - 1), (i, 1))
    return jc


def verify_inverse(N: int) -> dict:
    """Cross-check everything; returns a structured report dict."""
    basis, gram = omega_matrix(N)
    nb = len(basis.b_basis)
    checks = {}
    # m and b are isotropic: zero diagonal blocks
    iso_b = all(gram[a][b] == 0 for a in range(nb) for b in range(nb))
    iso_m = all(
        gram[a][b] == 0 for a in range(nb, basis.dim()) for b in range(nb, basis.dim())
    )
    checks["isotropic_b"] = iso_b
    checks["isotropic_m"] = iso_m
    det = _det_exact(gram)
    checks["nondegenerate"] = det != 0
    rec = jc_recursive(N)
    clo = jc_closed_form(N)
    checks["recursive_equals_closed_form"] = rec == clo
    diff = (rec - clo).sorted_terms()
    # r_w = j_c - j_c^21 inverts omega: sum_t phi(x_t) y_t with
    # phi = omega(v, .) returns v for every basis vector v of w
    r_w = rec - rec.swap_legs()
    checks["antisymmetric"] = (r_w + r_w.swap_legs()).is_zero()
    inverse_ok = True
    idx = basis.index
    for a, v in enumerate(basis.w_basis):
        acc = {}
        for (f, s), c in r_w.terms.items():
            pf = idx.get(f)
            if pf is None:
                inverse_ok = False
                break
            phi = gram[a][pf]
            if phi:
                acc[s] = acc.get(s, Fraction(0)) + phi * c
        else:
            acc = {k: v2 for k, v2 in acc.items() if v2}
            if acc != {v: Fraction(1)}:
                inverse_ok = False
        if not inverse_ok:
            break
    checks["inverse_on_w"] = inverse_ok
    # e is a 0/1 combination of distinct matrix units, so it lies in w
    # exactly when every summand does; the column-N summand never does
    p = basis.pyramid
    checks["e_outside_w"] = not all(basis.contains(i, j) for (i, j) in p.e_pairs())
    checks["dim_w"] = basis.dim()
    checks["dim_b"] = nb
    checks["dim_m"] = len(basis.m_basis)
    report = {
        "N": N,
        "checks": checks,
        "ok": all(v for k, v in checks.items() if isinstance(v, bool)),
        "recursive_vs_closed_diff": [
            {"first": list(f), "second": list(s), "coeff": str(c)} for (f, s), c in diff
        ],
    }
    return report
