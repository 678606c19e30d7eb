"""Graded free resolutions, Betti tables, resolution polynomials and Hilbert data."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Mapping, Sequence

import numpy as np

from ._kernels import rank_mod_p
from .arith import Poly, Ring
from .groebner import (FreeElt, FreeModule, GroebnerBasis, NotHomogeneousError, _as_elt, buchberger,
                       schreyer_sort, syzygies)


# ---------------------------------------------------------------------------
# matrices and resolutions


class GradedMatrix:
    """Sparse matrix of homogeneous polynomials, stored by columns.

    Column ``c`` is the image of the ``c``-th generator of the source
    (degree ``source_shifts[c]``) in the target free module.
    """

    def __init__(self, ring: Ring, target_shifts: Sequence[int], source_shifts: Sequence[int],
                 columns: Sequence[Mapping[int, Poly]]):
        self.ring = ring
        self.target_shifts = tuple(target_shifts)
        self.source_shifts = tuple(source_shifts)
        self.columns = [dict(c) for c in columns]
        if len(self.columns) != len(self.source_shifts):
            raise ValueError("one column per source generator")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.target_shifts), len(self.source_shifts)

    def entry(self, r: int, c: int) -> Poly:
        return self.columns[c].get(r, self.ring.zero())

    def to_lists(self) -> list[list[Poly]]:
        rows, cols = self.shape
        return [[self.entry(r, c) for c in range(cols)] for r in range(rows)]

    def is_graded(self) -> bool:
        for c, col in enumerate(self.columns):
            for r, f in col.items():
                if not f.is_homogeneous() or f.degree() != self.source_shifts[c] - self.target_shifts[r]:
                    return False
        return True

    def has_unit_entry(self) -> bool:
        return any(0 in f.terms for col in self.columns for f in col.values())

    def apply(self, col: Mapping[int, Poly]) -> dict[int, Poly]:
        """Image of a source vector given as ``{index: Poly}``."""
        out: dict[int, Poly] = {}
        for k, g in col.items():
            for r, f in self.columns[k].items():
                v = out.get(r)
                out[r] = f * g if v is None else v + f * g
        return {r: f for r, f in out.items() if f}


@dataclass
class Resolution:
    """A graded free resolution ``F_0 <- F_1 <- ... <- F_L``.

    ``shifts[i]`` lists the generator degrees of ``F_i`` and ``matrices[i-1]``
    is the differential ``F_i -> F_{i-1}``.  ``truncated`` is set when the
    computation stopped at ``max_length`` before the syzygies vanished.
    """

    ring: Ring
    shifts: list[tuple[int, ...]]
    matrices: list[GradedMatrix]
    minimal: bool = False
    truncated: bool = False

    @property
    def length(self) -> int:
        n = len(self.shifts) - 1
        while n > 0 and not self.shifts[n]:
            n -= 1
        return n

    def ranks(self) -> list[int]:
        return [len(s) for s in self.shifts]

    def is_complex(self) -> bool:
        for i in range(1, len(self.matrices)):
            d, e = self.matrices[i - 1], self.matrices[i]
            for col in e.columns:
                if d.apply(col):
                    return False
        return True

    def is_graded(self) -> bool:
        return all(m.is_graded() for m in self.matrices)

    def has_unit_entries(self) -> bool:
        return any(m.has_unit_entry() for m in self.matrices)


def _column_of(elt: FreeElt) -> dict[int, Poly]:
    parts: dict[int, dict] = {}
    for k, c in elt.terms.items():
        pos, m = elt.space.split(k)
        parts.setdefault(pos, {})[m] = c
    ring = elt.space.ring
    return {pos: Poly(ring, d) for pos, d in parts.items()}


def schreyer_resolution(gens: Sequence, max_length: int | None = None) -> Resolution:
    """Non-minimal resolution by iterated Schreyer syzygies.

    The first differential is a Gröbner basis of the input; each later one
    is the Schreyer syzygy frame of the previous level.
    """
    elts = [_as_elt(g) for g in gens if g]
    if not elts:
        raise ValueError("need at least one nonzero generator")
    for e in elts:
        if not e.is_homogeneous():
            raise NotHomogeneousError("inhomogeneous input rejected")
    space = elts[0].space
    ring = space.ring
    limit = ring.n + 1 if max_length is None else max_length
    gb = schreyer_sort(buchberger(elts))
    shifts = [tuple(space.shifts)]
    matrices: list[GradedMatrix] = []
    truncated = False
    level = 1
    while True:
        cols = [_column_of(FreeElt(gb.space, f)) for f in gb.raw]
        src = tuple(gb.space.deg(max(f)) for f in gb.raw)
        matrices.append(GradedMatrix(ring, shifts[-1], src, cols))
        shifts.append(src)
        syz = syzygies(gb)
        if not syz:
            break
        if level >= limit:
            truncated = True
            break
        gb = schreyer_sort(GroebnerBasis(syz[0].space, [s.terms for s in syz], reduced=False))
        level += 1
    if max_length is None and level > ring.n:
        raise AssertionError("resolution longer than the number of variables")
    return Resolution(ring, shifts, matrices, minimal=False, truncated=truncated)


def minimalize(res: Resolution) -> Resolution:
    """Prune unit entries, always pivoting on the smallest (row, column) unit."""
    ring = res.ring
    fld = ring.field
    L = len(res.matrices)
    # mats[i][col] = {row: Poly}; row/col ids are original indices
    mats = [{c: dict(col) for c, col in enumerate(m.columns)} for m in res.matrices]
    alive = [set(range(len(s))) for s in res.shifts]
    for i in range(L):
        d = mats[i]
        units: dict[int, set[int]] = {}
        for c, col in d.items():
            us = {r for r, f in col.items() if 0 in f.terms}
            if us:
                units[c] = us
        while units:
            r, c = min((min(us), c) for c, us in units.items())
            col_c = d[c]
            u_inv = fld.inv(col_c[r].terms[0])
            for k in list(d):
                if k == c or r not in d[k]:
                    continue
                col_k = d[k]
                # e_k -> e_k - (a_rk / u) e_c clears row r; a_rk may be a polynomial
                a = col_k[r].scale(u_inv)
                for s, f in col_c.items():
                    g = col_k.get(s)
                    af = a * f
                    h = (g - af) if g is not None else -af
                    if h:
                        col_k[s] = h
                    else:
                        col_k.pop(s, None)
                us = {s for s, f in col_k.items() if 0 in f.terms}
                if us:
                    units[k] = us
                else:
                    units.pop(k, None)
            # drop row r and column c of d_i
            del d[c]
            units.pop(c, None)
            for k in list(units):
                units[k].discard(r)
                if not units[k]:
                    del units[k]
            for col in d.values():
                col.pop(r, None)
            alive[i + 1].discard(c)
            alive[i].discard(r)
            if i + 1 < L:
                for col in mats[i + 1].values():
                    col.pop(c, None)
            if i > 0:
                mats[i - 1].pop(r, None)
    new_shifts = []
    index = []
    for lv, s in enumerate(res.shifts):
        keep = sorted(alive[lv])
        index.append({old: new for new, old in enumerate(keep)})
        new_shifts.append(tuple(s[k] for k in keep))
    new_mats = []
    for i in range(L):
        rows, cols = index[i], index[i + 1]
        columns = [None] * len(cols)
        for c, col in mats[i].items():
            columns[cols[c]] = {rows[r]: f for r, f in col.items()}
        new_mats.append(GradedMatrix(ring, new_shifts[i], new_shifts[i + 1], columns))
    while len(new_mats) > 1 and not new_shifts[-1]:
        new_shifts.pop()
        new_mats.pop()
    return Resolution(ring, new_shifts, new_mats, minimal=True, truncated=res.truncated)


def min_resolution(gens: Sequence, max_length: int | None = None) -> Resolution:
    return minimalize(schreyer_resolution(gens, max_length))


# ---------------------------------------------------------------------------
# Betti tables


class BettiTable:
    """Graded Betti numbers ``beta[i, j]``; zero entries are not stored."""

    def __init__(self, entries: Mapping[tuple[int, int], int] | None = None):
        self.entries = {}
        for (i, j), v in (entries or {}).items():
            if v < 0:
                raise ValueError("Betti numbers are non-negative")
            if v:
                self.entries[(int(i), int(j))] = int(v)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.entries.get(ij, 0)

    def __eq__(self, other):
        if isinstance(other, BettiTable):
            return self.entries == other.entries
        if isinstance(other, Mapping):
            return self.entries == BettiTable(other).entries
        return NotImplemented

    def __repr__(self):
        return f"BettiTable({dict(sorted(self.entries.items()))})"

    def totals(self) -> list[int]:
        n = self.length + 1
        out = [0] * n
        for (i, _), v in self.entries.items():
            out[i] += v
        return out

    @property
    def length(self) -> int:
        return max((i for i, _ in self.entries), default=0)

    def is_linear(self, start: int = 1) -> bool:
        """All entries with i >= start lie in the strand j = i + 1."""
        return all(j == i + 1 for (i, j) in self.entries if i >= start)

    def euler_numerator(self) -> list[int]:
        top = max((j for _, j in self.entries), default=0)
        out = [0] * (top + 1)
        for (i, j), v in self.entries.items():
            out[j] += (-1) ** i * v
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        return out

    def to_text(self) -> str:
        if not self.entries:
            return "0"
        cols = self.length + 1
        strata = sorted({j - i for i, j in self.entries})
        lo, hi = strata[0], strata[-1]
        head = ["", *[str(i) for i in range(cols)]]
        rows = [["total:", *[str(v) for v in self.totals()]]]
        for s in range(lo, hi + 1):
            rows.append([f"{s}:", *[str(self[(i, i + s)]) if self[(i, i + s)] else "." for i in range(cols)]])
        widths = [max(len(r[k]) for r in [head, *rows]) for k in range(cols + 1)]
        lines = []
        for r in [head, *rows]:
            lines.append(r[0].rjust(widths[0]) + " " + " ".join(x.rjust(w) for x, w in zip(r[1:], widths[1:])))
        return "\n".join(line.rstrip() for line in lines)

    def to_json(self) -> dict:
        return {"entries": [[i, j, v] for (i, j), v in sorted(self.entries.items())]}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data) -> "BettiTable":
        if isinstance(data, str):
            data = json.loads(data)
        return cls({(i, j): v for i, j, v in data["entries"]})


def betti(res: Resolution) -> BettiTable:
    if not res.minimal:
        raise ValueError("Betti numbers are read off a minimal resolution; call minimalize first")
    table: dict[tuple[int, int], int] = {}
    for i, s in enumerate(res.shifts):
        for j in s:
            table[(i, j)] = table.get((i, j), 0) + 1
    return BettiTable(table)


def betti_from_frame(res: Resolution) -> BettiTable:
    """Betti numbers from a non-minimal frame via ranks of the constant parts.

    ``beta[i, j] = F[i, j] - rank(d_i)_j - rank(d_{i+1})_j`` where ``(d_i)_j``
    is the scalar block of the differential between degree-``j`` generators.
    Needs a prime field.
    """
    p = res.ring.field.p
    if not p:
        raise ValueError("frame ranks are computed over a prime field")
    counts: dict[tuple[int, int], int] = {}
    for i, s in enumerate(res.shifts):
        for j in s:
            counts[(i, j)] = counts.get((i, j), 0) + 1
    ranks: dict[tuple[int, int], int] = {}
    for i, m in enumerate(res.matrices, start=1):
        for j in set(m.source_shifts):
            cols = [c for c, sh in enumerate(m.source_shifts) if sh == j]
            rows = [r for r, sh in enumerate(m.target_shifts) if sh == j]
            if not rows or not cols:
                continue
            ri = {r: k for k, r in enumerate(rows)}
            a = np.zeros((len(rows), len(cols)), dtype=np.int64)
            for k, c in enumerate(cols):
                for r, f in m.columns[c].items():
                    if r in ri and 0 in f.terms:
                        a[ri[r], k] = f.terms[0]
            ranks[(i, j)] = rank_mod_p(a, p)
    out = {}
    for (i, j), v in counts.items():
        out[(i, j)] = v - ranks.get((i, j), 0) - ranks.get((i + 1, j), 0)
    return BettiTable(out)


# ---------------------------------------------------------------------------
# resolution polynomials


class ResPoly:
    """Bivariate integer polynomial ``sum c[i, j] x^i t^j``."""

    def __init__(self, coeffs: Mapping[tuple[int, int], int] | None = None):
        self.coeffs = {k: int(v) for k, v in (coeffs or {}).items() if v}

    @classmethod
    def one_plus_xt(cls, m: int = 1) -> "ResPoly":
        return cls({(k, k): comb(m, k) for k in range(m + 1)})

    def __mul__(self, other: "ResPoly") -> "ResPoly":
        out: dict[tuple[int, int], int] = {}
        for (a, b), u in self.coeffs.items():
            for (c, d), v in other.coeffs.items():
                out[(a + c, b + d)] = out.get((a + c, b + d), 0) + u * v
        return ResPoly(out)

    def __eq__(self, other):
        return isinstance(other, ResPoly) and self.coeffs == other.coeffs

    def __repr__(self):
        return f"ResPoly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for (i, j), c in sorted(self.coeffs.items()):
            mono = "*".join(x for x in (_pw("x", i), _pw("t", j)) if x)
            if not mono:
                parts.append(str(c))
            else:
                parts.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_betti(self) -> BettiTable:
        return BettiTable(self.coeffs)


def _pw(v: str, e: int) -> str:
    return "" if e == 0 else v if e == 1 else f"{v}^{e}"


def res_poly(table: BettiTable) -> ResPoly:
    return ResPoly(table.entries)


def res_poly_mul(p: ResPoly, q: ResPoly) -> ResPoly:
    return p * q


# ---------------------------------------------------------------------------
# Hilbert series


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u:
            for j, v in enumerate(b):
                out[i + j] += u * v
    return out


def _poly_add(a: list[int], b: list[int]) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, u in enumerate(a):
        out[i] += u
    for i, v in enumerate(b):
        out[i] += v
    return out


def _minimal_monos(mons: Iterable[tuple[int, ...]]) -> list[tuple[int, ...]]:
    ms = sorted(set(mons), key=sum)
    out: list[tuple[int, ...]] = []
    for m in ms:
        if not any(all(a <= b for a, b in zip(g, m)) for g in out):
            out.append(m)
    return out


def monomial_numerator(mons: Sequence[tuple[int, ...]], weights: Sequence[int] | None = None) -> list[int]:
    """K(t) with HS(R/I) = K(t) / prod(1 - t^{w_i}) for a monomial ideal I.

    Pivot recursion ``N(I) = N(I + (x)) + t^{w_x} N(I : x)``; pairwise
    coprime generators give the product of ``1 - t^{deg}``.
    """
    cache: dict = {}
    n = len(mons[0]) if mons else 0
    w = list(weights) if weights is not None else [1] * n

    def wdeg(m):
        return sum(a * b for a, b in zip(m, w))

    def rec(gens: tuple) -> list[int]:
        hit = cache.get(gens)
        if hit is not None:
            return hit
        support_count = [0] * n
        for g in gens:
            for k, e in enumerate(g):
                if e:
                    support_count[k] += 1
        if all(c <= 1 for c in support_count):
            out = [1]
            for g in gens:
                f = [0] * (wdeg(g) + 1)
                f[0] = 1
                f[-1] -= 1
                out = _poly_mul(out, f)
        else:
            x = max(range(n), key=lambda k: support_count[k])
            unit = tuple(1 if k == x else 0 for k in range(n))
            plus = tuple(_minimal_monos([g for g in gens if g[x] == 0] + [unit]))
            quot = tuple(_minimal_monos([tuple(e - 1 if k == x and e else e for k, e in enumerate(g)) for g in gens]))
            a = rec(plus)
            b = [0] * w[x] + rec(quot)
            out = _poly_add(a, b)
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        cache[gens] = out
        return out

    if not mons:
        return [1]
    return rec(tuple(_minimal_monos(mons)))


@dataclass
class HilbertData:
    """``HS(t) = numerator(t) / (1 - t)^var_count``; polynomial coefficients are low degree first."""

    numerator: list[int]
    var_count: int
    hilbert_polynomial: list[Fraction]
    h_vector: list[int] = field(default_factory=list)
    dimension: int = 0

    def hilbert_function(self, ell: int) -> int:
        """Exact dim of the degree-``ell`` piece, from the series."""
        n = self.var_count
        total = 0
        for k, c in enumerate(self.numerator):
            if c and ell - k >= 0:
                total += c * comb(ell - k + n - 1, n - 1) if n else (c if ell == k else 0)
        return total

    def hp(self, ell) -> Fraction:
        return sum((c * Fraction(ell) ** k for k, c in enumerate(self.hilbert_polynomial)), Fraction(0))

    def degree(self) -> int:
        return sum(self.h_vector)

    def hp_string(self, var: str = "t") -> str:
        return format_univariate(self.hilbert_polynomial, var)


def format_univariate(coeffs: Sequence, var: str = "t") -> str:
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = Fraction(coeffs[k])
        if not c:
            continue
        mag = abs(c)
        mono = "" if k == 0 else var if k == 1 else f"{var}^{k}"
        if mono:
            body = mono if mag == 1 else f"{mag}{mono}" if mag.denominator == 1 else f"({mag}){mono}"
        else:
            body = str(mag)
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def hilbert_from_numerator(num: Sequence[int], n: int) -> HilbertData:
    h = list(num)
    D = n
    while D > 0 and sum(h) == 0:
        # divide by (1 - t)
        q = []
        acc = 0
        for c in h[:-1]:
            acc += c
            q.append(acc)
        h = q or [0]
        D -= 1
    hp = [Fraction(0)]
    if D >= 1:
        fact = 1
        for m in range(1, D):
            fact *= m
        for k, c in enumerate(h):
            if not c:
                continue
            # C(l - k + D - 1, D - 1) as a polynomial in l
            term = [Fraction(1)]
            for m in range(1, D):
                term = _fpoly_mul(term, [Fraction(m - k), Fraction(1)])
            term = [Fraction(c) * v / fact for v in term]
            hp = _fpoly_add(hp, term)
    while len(hp) > 1 and hp[-1] == 0:
        hp.pop()
    return HilbertData(list(num), n, hp, h, D)


def _fpoly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        for j, v in enumerate(b):
            out[i + j] += u * v
    return out


def _fpoly_add(a, b):
    out = [Fraction(0)] * max(len(a), len(b))
    for i, u in enumerate(a):
        out[i] += u
    for i, v in enumerate(b):
        out[i] += v
    return out


def hilbert(gens: Sequence, ring: Ring | None = None) -> HilbertData:
    """Hilbert data of the cokernel of ``gens`` (R/I for an ideal).

    An empty generator list needs ``ring`` and gives the free ring.
    """
    elts = [_as_elt(g) for g in gens if g]
    if not elts:
        if ring is None:
            raise ValueError("zero ideal: pass the ring")
        return hilbert_from_numerator([1], ring.n)
    space = elts[0].space
    ring = space.ring
    if any(w != 1 for w in ring.weights):
        raise ValueError("Hilbert data needs the standard grading")
    gb = buchberger(elts)
    by_pos: dict[int, list] = {}
    for pos, e in gb.lead_monomials():
        by_pos.setdefault(pos, []).append(e)
    num = [0]
    for pos, sh in enumerate(space.shifts):
        part = monomial_numerator(by_pos.get(pos, []), None) if by_pos.get(pos) else [1]
        num = _poly_add(num, [0] * sh + part)
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return hilbert_from_numerator(num, ring.n)


# ---------------------------------------------------------------------------
# linear algebra oracles


def monomials_of_degree(n: int, d: int) -> list[tuple[int, ...]]:
    if n == 0:
        return [()] if d == 0 else []
    if n == 1:
        return [(d,)]
    return [(a, *rest) for a in range(d, -1, -1) for rest in monomials_of_degree(n - 1, d - a)]


def ideal_graded_dim(gens: Sequence[Poly], ell: int) -> int:
    """dim_k I_ell by rank of all (monomial x generator) products; prime fields only."""
    if not gens:
        return 0
    ring = gens[0].ring
    p = ring.field.p
    if not p:
        raise ValueError("prime field required")
    cols = {ring.mono(e): k for k, e in enumerate(monomials_of_degree(ring.n, ell))}
    rows = []
    for g in gens:
        dg = g.degree()
        if dg > ell:
            continue
        for e in monomials_of_degree(ring.n, ell - dg):
            m = ring.mono(e)
            row = np.zeros(len(cols), dtype=np.int64)
            for t, c in g.terms.items():
                row[cols[t + m]] = c
            rows.append(row)
    if not rows:
        return 0
    return rank_mod_p(np.array(rows), p)


def koszul_betti(gens: Sequence[Poly], pairs: Iterable[tuple[int, int]]) -> BettiTable:
    """beta[i, j] of R/I as Koszul homology dimensions, computed independently of any resolution.

    Uses ``Tor_i(R/I, k)_j = H_i(wedge^i V (x) (R/I)_{j-i})`` with a
    standard-monomial basis of R/I from a Gröbner basis.
    """
    ring = gens[0].ring
    p = ring.field.p
    if not p:
        raise ValueError("prime field required")
    gb = buchberger(gens)
    red = gb.reducer()
    n = ring.n
    basis_cache: dict[int, dict[int, int]] = {}

    def std(deg: int) -> dict[int, int]:
        if deg not in basis_cache:
            ms = [ring.mono(e) for e in monomials_of_degree(n, deg)] if deg >= 0 else []
            std_ms = [m for m in ms if red.find_divisor(m)[0] < 0]
            basis_cache[deg] = {m: k for k, m in enumerate(std_ms)}
        return basis_cache[deg]

    nf_cache: dict[int, dict] = {}

    def nf(m: int) -> dict:
        if m not in nf_cache:
            nf_cache[m] = red.full_reduce({m: 1})
        return nf_cache[m]

    def boundary(i: int, j: int) -> np.ndarray:
        # wedge^i V (x) A_{j-i}  ->  wedge^{i-1} V (x) A_{j-i+1}
        src_b, tgt_b = std(j - i), std(j - i + 1)
        src_s = list(combinations(range(n), i))
        tgt_s = {s: k for k, s in enumerate(combinations(range(n), i - 1))}
        mat = np.zeros((len(tgt_s) * len(tgt_b), len(src_s) * len(src_b)), dtype=np.int64)
        xs = ring.var_monos
        for a, S in enumerate(src_s):
            for m, b in src_b.items():
                col = a * len(src_b) + b
                for pos, s in enumerate(S):
                    sign = 1 if pos % 2 == 0 else -1
                    T = S[:pos] + S[pos + 1:]
                    base = tgt_s[T] * len(tgt_b)
                    for mm, c in nf(m + xs[s]).items():
                        r = base + tgt_b[mm]
                        mat[r, col] = (mat[r, col] + sign * c) % p
        return mat

    out = {}
    for i, j in pairs:
        if i < 0 or i > n or j - i < 0:
            continue
        dim_c = comb(n, i) * len(std(j - i))
        if dim_c == 0:
            continue
        r_i = rank_mod_p(boundary(i, j), p) if i >= 1 else 0
        r_next = rank_mod_p(boundary(i + 1, j), p) if i + 1 <= n and j - i - 1 >= 0 else 0
        out[(i, j)] = dim_c - r_i - r_next
    return BettiTable(out)
