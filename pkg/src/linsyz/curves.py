"""Rational normal curves, Veronese varieties, square-zero doublings and point schemes."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .arith import Poly, Ring, format_poly
from .groebner import FreeElt, FreeModule, buchberger, elim_kernel, minimal_generators
from .resolve import BettiTable, betti, hilbert, min_resolution, monomials_of_degree


def _ring(n: int, field=None, names: Sequence[str] | None = None) -> Ring:
    return Ring(names if names is not None else n, field)


# ---------------------------------------------------------------------------
# rational normal curves and Veronese varieties


def rnc_ideal(d: int, field=None, ring: Ring | None = None) -> list[Poly]:
    """2x2 minors of the Hankel matrix [[z_0..z_{d-1}], [z_1..z_d]]."""
    if d < 1:
        raise ValueError("d must be at least 1")
    R = ring or _ring(d + 1, field)
    z = R.gens()
    return [z[a] * z[b + 1] - z[a + 1] * z[b] for a in range(d) for b in range(a + 1, d)]


def rnc_parametrization(d: int, ring: Ring | None = None) -> list[Poly]:
    """Images s^{d-i} t^i of the coordinates, in k[s, t]."""
    S = ring or Ring(("s", "t"))
    return [S.from_terms([((d - i, i), 1)]) for i in range(d + 1)]


def linear_embed(gens: Sequence[Poly], m: int, ring: Ring | None = None) -> list[Poly]:
    """The same variety inside a linear space of m more dimensions.

    ``ring`` is the source ring (needed when ``gens`` is empty).
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    if ring is None:
        if not gens:
            raise ValueError("empty generator list: pass the ring")
        ring = gens[0].ring
    if m == 0:
        return list(gens)
    names = list(ring.names)
    k = ring.n
    while len(names) < ring.n + m:
        cand = f"z{k}"
        k += 1
        if cand not in names:
            names.append(cand)
    big = Ring(names, ring.field, ring.order)
    out = [g.to_ring(big) for g in gens]
    out += [big.var(ring.n + i) for i in range(m)]
    return out


VERONESE_GUARD = 21


def veronese_ideal(n: int, d: int, field=None) -> list[Poly]:
    """Ideal of v_d(P^n) in P^{C(n+d,n)-1}, by elimination; coordinates follow lex-descending exponents."""
    if n not in (1, 2, 3) or d < 1:
        raise ValueError("need n in {1, 2, 3} and d >= 1")
    N = comb(n + d, n)
    if N > VERONESE_GUARD:
        raise ValueError(f"size guard: {N} coordinates exceeds {VERONESE_GUARD}")
    X = Ring(tuple(f"x{i}" for i in range(n + 1)), field)
    exps = monomials_of_degree(n + 1, d)
    images = [X.from_terms([(e, 1)]) for e in exps]
    if d == 1:
        return []
    kernel = elim_kernel(images, [], source_ring=_ring(N, field))
    gens = minimal_generators(kernel)
    if any(g.degree() != 2 for g in gens):
        raise AssertionError("Veronese ideal not generated by quadrics")
    return gens


# ---------------------------------------------------------------------------
# doublings


def _field_rank(rows: Sequence[Sequence], fld) -> int:
    mat = [[fld(x) for x in r] for r in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = fld.inv(mat[rank][c])
        for i in range(len(mat)):
            if i != rank and mat[i][c]:
                f = fld.mul(mat[i][c], inv)
                mat[i] = [fld.sub(a, fld.mul(f, b)) for a, b in zip(mat[i], mat[rank])]
        rank += 1
    return rank


@dataclass(frozen=True)
class DoublingSpec:
    """Data of a doubling of the degree-d rational normal curve.

    The line bundle restricted to the curve is O(twist_degree); only -1 gives
    a curve with linear syzygies, and that is the only value accepted.
    ``basis_matrix`` (d x d, invertible) picks the surjection; ``None`` is
    the identity.
    """

    d: int
    twist_degree: int = -1
    basis_matrix: tuple[tuple, ...] | None = None

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be at least 1")
        if self.twist_degree != -1:
            raise ValueError("only twist degree -1 is supported")
        if self.basis_matrix is not None:
            m = tuple(tuple(r) for r in self.basis_matrix)
            if len(m) != self.d or any(len(r) != self.d for r in m):
                raise ValueError(f"basis matrix must be {self.d}x{self.d}")
            object.__setattr__(self, "basis_matrix", m)


def doubling_kernel(d: int, twist: int = -1, basis_matrix=None, field=None) -> list[Poly]:
    """Kernel of k[z] -> k[s,t,e]/(e^2) for the square-zero doubling twisted by O(twist).

    z_i -> s^{d-i} t^i (i = 0..d) and the remaining k+1 coordinates (k = d + twist)
    go to e times the entries of ``basis_matrix`` applied to the monomials
    s^a t^{k-a}, so the identity sends z_{d+1+j} to s^j t^{k-j} e.
    """
    k = d + twist
    if k < 0:
        raise ValueError("twist too negative")
    A = Ring(("s", "t", "e"), field)
    fld = A.field
    mat = basis_matrix
    if mat is None:
        mat = [[1 if a == b else 0 for b in range(k + 1)] for a in range(k + 1)]
    if len(mat) != k + 1 or any(len(r) != k + 1 for r in mat):
        raise ValueError(f"basis matrix must be {k + 1}x{k + 1}")
    if _field_rank(mat, fld) != k + 1:
        raise ValueError("basis matrix is singular over the coefficient field")
    images = [A.from_terms([((d - i, i, 0), 1)]) for i in range(d + 1)]
    monos = [A.from_terms([((a, k - a, 1), 1)]) for a in range(k + 1)]
    for row in mat:
        img = A.zero()
        for c, m in zip(row, monos):
            img = img + m * A.const(c)
        images.append(img)
    e = A.var("e")
    src = _ring(len(images), field)
    return minimal_generators(elim_kernel(images, [e * e], source_ring=src))


def ferrand_double_ideal(spec: DoublingSpec | int, field=None) -> list[Poly]:
    """Minimal quadric generators of the double structure on the degree-d rational normal curve."""
    if isinstance(spec, int):
        spec = DoublingSpec(spec)
    gens = doubling_kernel(spec.d, spec.twist_degree, spec.basis_matrix, field)
    if any(g.degree() != 2 for g in gens):
        raise AssertionError("doubling not generated in degree 2")
    return gens


NAMED_VARS_D2 = ("x", "y", "z", "u", "v")


def display_generators(gens: Sequence[Poly], names: Sequence[str] | None = None) -> list[str]:
    """Stable human-readable form: each generator scaled so its lex-leading coefficient is 1,
    terms in lex order, generators sorted by lex-leading monomial descending."""
    if not gens:
        return []
    ring = gens[0].ring
    normed = []
    for g in gens:
        lead = max(g.terms, key=ring.exps)
        h = g.scale(ring.field.inv(g.terms[lead]))
        normed.append((ring.exps(lead), h))
    normed.sort(key=lambda t: t[0], reverse=True)
    return [format_poly(h, names, term_order="lex") for _, h in normed]


@dataclass
class ExactSequenceReport:
    d: int
    ok: bool
    square_contained: bool
    contained_in_curve: bool
    quotient_dims: dict[int, int] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)


def check_double_exact_sequences(d: int, field=None, max_ell: int = 6, gens: Sequence[Poly] | None = None
                                 ) -> ExactSequenceReport:
    """I_X^2 in J in I_X, and dim (I_X / J)_l = d*l for l = 0..max_ell."""
    J = list(gens) if gens is not None else ferrand_double_ideal(d, field)
    ring = J[0].ring
    I = linear_embed(rnc_ideal(d, ring=Ring(d + 1, ring.field)) if d > 1 else [], d,
                     ring=Ring(d + 1, ring.field))
    I = [f.to_ring(ring) for f in I]
    failures = []
    gbJ = buchberger(J)
    sq = all(not gbJ.normal_form(f * g) for a, f in enumerate(I) for g in I[a:])
    if not sq:
        failures.append("I_X^2 is not contained in J")
    gbI = buchberger(I)
    sub = all(not gbI.normal_form(f) for f in J)
    if not sub:
        failures.append("J is not contained in I_X")
    hJ, hI = hilbert(J), hilbert(I)
    dims = {}
    for ell in range(max_ell + 1):
        dims[ell] = hJ.hilbert_function(ell) - hI.hilbert_function(ell)
        if dims[ell] != d * ell:
            failures.append(f"degree {ell}: dim (I_X/J) = {dims[ell]}, expected {d * ell}")
    return ExactSequenceReport(d, not failures, sq, sub, dims, failures)


# ---------------------------------------------------------------------------
# twist modules


def twist_module_presentation(d: int, j: int, field=None) -> list[FreeElt]:
    """Relations among the generators s^{j-a} t^a (a = 0..j) of the module
    sum_l H^0(O_{P^1}(d l + j)) over k[z_0..z_d]; all generators sit in degree 0."""
    if not (2 <= d <= 4) or not (1 <= j <= d - 1):
        raise ValueError("need 1 <= j <= d - 1 and d <= 4")
    A = Ring(("s", "t", "u"), field)
    images = [A.from_terms([((d - i, i, 0), 1)]) for i in range(d + 1)]
    images += [A.from_terms([((j - a, a, 1), 1)]) for a in range(j + 1)]
    names = [f"z{i}" for i in range(d + 1)] + [f"y{a}" for a in range(j + 1)]
    big = Ring(names, field)
    kernel = elim_kernel(images, [], source_ring=big)
    R = _ring(d + 1, field)
    space = FreeModule(R, [0] * (j + 1))

    def y_degree(f):
        return {sum(big.exps(m)[d + 1:]) for m in f.terms}

    rels = []
    for f in kernel:
        yd = y_degree(f)
        if yd == {1}:
            comps = [dict() for _ in range(j + 1)]
            for m, c in f.terms.items():
                e = big.exps(m)
                a = next(k for k in range(j + 1) if e[d + 1 + k])
                comps[a][R.mono(e[:d + 1])] = c
            rels.append(FreeElt.from_components(space, [Poly(R, t) for t in comps]))
        elif yd == {0}:
            g = Poly(R, {R.mono(big.exps(m)[:d + 1]): c for m, c in f.terms.items()})
            for a in range(j + 1):
                comps = [R.zero()] * (j + 1)
                comps[a] = g
                rels.append(FreeElt.from_components(space, comps))
    return minimal_generators(rels)


# ---------------------------------------------------------------------------
# points and double points


def _same_param(p, q) -> bool:
    return p[0] * q[1] == p[1] * q[0]


def points_ideal(points: Sequence[Sequence], tangents: Sequence[Sequence | None] | None = None,
                 field=None, ring: Ring | None = None) -> list[Poly]:
    """Ideal of reduced points, some thickened to length 2 along a tangent vector.

    Realised as the kernel of k[z] -> k[l_p, e_p] / (products of distinct
    points' variables, e_p^2), z -> sum_p (l_p P + e_p T_p).
    """
    if not points:
        raise ValueError("no points")
    N = len(points[0])
    tangents = list(tangents) if tangents is not None else [None] * len(points)
    names = []
    for k, t in enumerate(tangents):
        names.append(f"l{k}")
        if t is not None:
            names.append(f"e{k}")
    A = Ring(names, field)
    fld = A.field
    images = [A.zero() for _ in range(N)]
    lam, eps = {}, {}
    for k, (pt, t) in enumerate(zip(points, tangents)):
        lam[k] = A.var(f"l{k}")
        if t is not None:
            eps[k] = A.var(f"e{k}")
        for i in range(N):
            images[i] = images[i] + lam[k] * A.const(pt[i])
            if t is not None:
                images[i] = images[i] + eps[k] * A.const(t[i])
    rels = []
    ks = list(range(len(points)))
    for a in ks:
        for b in ks:
            if a < b:
                rels.append(lam[a] * lam[b])
            if a != b and b in eps:
                rels.append(lam[a] * eps[b])
                if a in eps and a < b:
                    rels.append(eps[a] * eps[b])
        if a in eps:
            rels.append(eps[a] * eps[a])
    src = ring or _ring(N, fld)
    return minimal_generators(elim_kernel(images, rels, source_ring=src))


def curve_point(d: int, param) -> list[int]:
    a, b = param
    return [a ** (d - i) * b ** i for i in range(d + 1)]


def points_scheme_ideal(d: int, simple_params: Sequence, double_params: Sequence, field=None) -> list[Poly]:
    """Ideal in P^{2d} of simple points of the curve plus length-2 points of the doubling.

    A parameter (a:b) gives the curve point (a^{d-i} b^i | 0); a double point
    adds the transverse direction (0 | a^j b^{d-1-j}) of the doubling.
    """
    params = [tuple(p) for p in list(simple_params) + list(double_params)]
    for p in params:
        if len(p) != 2 or (p[0] == 0 and p[1] == 0):
            raise ValueError(f"bad parameter {p}")
    for a in range(len(params)):
        for b in range(a + 1, len(params)):
            if _same_param(params[a], params[b]):
                raise ValueError(f"repeated parameter {params[a]}")
    pts, tans = [], []
    for p in simple_params:
        pts.append(curve_point(d, p) + [0] * d)
        tans.append(None)
    for a, b in double_params:
        pts.append(curve_point(d, (a, b)) + [0] * d)
        tans.append([0] * (d + 1) + [a ** j * b ** (d - 1 - j) for j in range(d)])
    return points_ideal(pts, tans, field)


def random_points(count: int, ambient_dim: int, seed: int, field=None, bound: int = 1000) -> list[list[int]]:
    """Seeded random points of P^ambient_dim with small integer coordinates."""
    rng = random.Random(seed)
    return [[rng.randint(-bound, bound) for _ in range(ambient_dim + 1)] for _ in range(count)]


def koszul_nonvanishing(gens: Sequence[Poly], p_index: int) -> bool:
    """beta_{p, p+1} of the quotient ring is nonzero."""
    res = min_resolution(gens, max_length=p_index + 1)
    return betti(res)[(p_index, p_index + 1)] != 0


# ---------------------------------------------------------------------------
# expected tables


V4_P2_REFERENCE = {
    (1, 2): 75, (2, 3): 5360, (3, 4): 1947, (4, 5): 4488, (5, 6): 7095, (6, 7): 7920,
    (7, 8): 6237, (8, 9): 3344, (9, 10): 1089, (10, 11): 120, (10, 12): 55, (11, 13): 24, (12, 14): 3,
}
V4_P2_WARNING = ("reference data, not computed here; the (2, 3) entry 5360 is inconsistent with the "
                 "Hilbert function of v_4(P^2), and a full resolution over F_32003 gives 536")


@dataclass
class ExpectedTable:
    source: tuple
    table: BettiTable
    warning: str | None = None


def expected_table(source) -> ExpectedTable:
    """Closed-form Betti tables: ("rnc", d), ("double", d), ("twist", d, j), ("veronese_reference", "v4_P2")."""
    if isinstance(source, str):
        source = (source,)
    kind = source[0]
    if kind in ("rnc", "double"):
        d = int(source[1])
        if d < 1:
            raise ValueError("d must be at least 1")
        n = d if kind == "rnc" else 2 * d
        entries = {(0, 0): 1}
        for ell in range(1, n):
            entries[(ell, ell + 1)] = ell * comb(n, ell + 1)
        return ExpectedTable((kind, d), BettiTable(entries))
    if kind == "twist":
        d, j = int(source[1]), int(source[2])
        if not (1 <= j <= d - 1):
            raise ValueError("need 1 <= j <= d - 1")
        entries = {}
        for i in range(0, j + 1):
            entries[(i, i)] = (j + 1 - i) * comb(d, i)
        for i in range(j + 1, d):
            entries[(i, i + 1)] = (i - j) * comb(d, i + 1)
        return ExpectedTable((kind, d, j), BettiTable(entries))
    if kind == "veronese_reference":
        if source[1:] != ("v4_P2",):
            raise ValueError(f"unknown reference {source[1:]}")
        entries = {(0, 0): 1, **V4_P2_REFERENCE}
        return ExpectedTable(tuple(source), BettiTable(entries), V4_P2_WARNING)
    raise ValueError(f"unknown source {kind!r}")


def expected_betti(source) -> BettiTable:
    return expected_table(source).table


# ---------------------------------------------------------------------------
# end-to-end verification


@dataclass
class DoubleCurveReport:
    d: int
    ok: bool
    clauses: dict[str, bool]
    failures: list[str]
    betti: BettiTable | None = None
    hilbert_polynomial: list[Fraction] | None = None
    generators: list[Poly] = field(default_factory=list)


CLAUSES = {
    "a": "minimal generators are quadrics",
    "b": "Betti table matches the closed form",
    "c": "Hilbert polynomial is 2dt+1",
    "d": "resolution is linear after the generators",
    "e": "doubling exact sequences hold",
    "f": "no linear forms in the ideal",
}


def verify_double_curve(d: int, field=None, basis_matrix=None) -> DoubleCurveReport:
    if not (1 <= d <= 4):
        raise ValueError("need 1 <= d <= 4")
    spec = DoublingSpec(d, basis_matrix=basis_matrix)
    gens = doubling_kernel(d, -1, spec.basis_matrix, field)
    clauses = {}
    clauses["a"] = bool(gens) and all(g.degree() == 2 for g in gens)
    res = min_resolution(gens)
    table = betti(res)
    clauses["b"] = table == expected_betti(("double", d))
    hd = hilbert(gens)
    clauses["c"] = hd.hilbert_polynomial == [Fraction(1), Fraction(2 * d)]
    clauses["d"] = table.is_linear(start=1)
    clauses["e"] = check_double_exact_sequences(d, gens=gens).ok
    clauses["f"] = all(g.degree() >= 2 for g in buchberger(gens).polys())
    failures = [f"({k}) {CLAUSES[k]}" for k, v in clauses.items() if not v]
    return DoubleCurveReport(d, not failures, clauses, failures, table, hd.hilbert_polynomial, gens)
