"""Schur-functor decompositions of plethysms S^t(S^d V).

Decompositions are stored at the GL level (partitions of the total degree)
except where noted: the dimension-2 recurrences work with SL_2 highest
weights, i.e. one-row partitions ``(m,)`` standing for ``S^m``.
"""

from __future__ import annotations

import json
import re
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping

import numpy as np

from ._kernels import multiset_weight_counts


class PlethysmError(ArithmeticError):
    """A decomposition that should be effective came out with a negative multiplicity."""


# ---------------------------------------------------------------------------
# partitions


class Partition(tuple):
    """Weakly decreasing tuple of positive integers; ``()`` is the trivial representation."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if any(p <= 0 for p in parts):
            raise ValueError(f"parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def parts(self) -> tuple[int, ...]:
        return tuple(self)

    @property
    def weight(self) -> int:
        return sum(self)

    def __repr__(self):
        return f"Partition({list(self)})"

    def __str__(self):
        if not self:
            return "S0"
        if len(self) == 1:
            return f"S{self[0]}"
        return "S[" + ",".join(str(p) for p in self) + "]"

    def padded(self, n: int) -> tuple[int, ...]:
        if len(self) > n:
            raise ValueError(f"{self} has more than {n} rows")
        return tuple(self) + (0,) * (n - len(self))


def schur_dim(lam, dim_v: int) -> int:
    """Weyl dimension formula for GL(dim_v)."""
    lam = Partition(lam)
    lp = lam.padded(dim_v)
    num, den = 1, 1
    for i in range(dim_v):
        for j in range(i + 1, dim_v):
            num *= lp[i] - lp[j] + j - i
            den *= j - i
    return num // den


def sl_reduce(lam, dim_v: int) -> Partition:
    """Strip full columns (powers of the determinant)."""
    lam = Partition(lam)
    lp = lam.padded(dim_v)
    return Partition(p - lp[-1] for p in lp)


def sym_sym_dim(t: int, d: int, dim_v: int) -> int:
    return comb(comb(d + dim_v - 1, d) + t - 1, t)


# ---------------------------------------------------------------------------
# decompositions


_TERM = re.compile(r"^(?:(\d+)\s*\*?\s*)?(?:S(\d+)|S\[(\d+(?:\s*,\s*\d+)*)\]|I)$")


class Decomp:
    """Virtual representation: signed integer multiplicities on partitions with at most ``dim_v`` rows."""

    def __init__(self, dim_v: int, terms: Mapping | None = None):
        self.dim_v = dim_v
        self.terms: dict[Partition, int] = {}
        for lam, m in (terms or {}).items():
            lam = Partition(lam)
            if len(lam) > dim_v:
                raise ValueError(f"{lam} has more than {dim_v} rows")
            if m:
                self.terms[lam] = self.terms.get(lam, 0) + int(m)
        self.terms = {k: v for k, v in self.terms.items() if v}

    @classmethod
    def single(cls, lam, dim_v: int, mult: int = 1) -> "Decomp":
        return cls(dim_v, {Partition(lam): mult})

    @classmethod
    def zero(cls, dim_v: int) -> "Decomp":
        return cls(dim_v)

    @classmethod
    def trivial(cls, dim_v: int) -> "Decomp":
        return cls(dim_v, {Partition(): 1})

    def _same(self, other: "Decomp"):
        if not isinstance(other, Decomp) or other.dim_v != self.dim_v:
            raise ValueError("decompositions for different dim V")

    def __add__(self, other: "Decomp") -> "Decomp":
        self._same(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return Decomp(self.dim_v, out)

    def __neg__(self) -> "Decomp":
        return Decomp(self.dim_v, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "Decomp") -> "Decomp":
        return self + (-other)

    def scale(self, c: int) -> "Decomp":
        return Decomp(self.dim_v, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other: "Decomp") -> "Decomp":
        """Tensor product by the Littlewood–Richardson rule."""
        self._same(other)
        out: dict[Partition, int] = {}
        for a, u in self.terms.items():
            for b, v in other.terms.items():
                for c, w in lr_product(a, b, self.dim_v).terms.items():
                    out[c] = out.get(c, 0) + u * v * w
        return Decomp(self.dim_v, out)

    def __eq__(self, other):
        return isinstance(other, Decomp) and self.dim_v == other.dim_v and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim_v, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def dimension(self) -> int:
        return sum(m * schur_dim(lam, self.dim_v) for lam, m in self.terms.items())

    def is_effective(self) -> bool:
        return all(m > 0 for m in self.terms.values())

    def check_effective(self, what: str = "decomposition") -> "Decomp":
        bad = {lam: m for lam, m in self.terms.items() if m < 0}
        if bad:
            raise PlethysmError(f"{what} has negative multiplicities: "
                                + ", ".join(f"{m} {lam}" for lam, m in sorted(bad.items(), reverse=True)))
        return self

    def sl_reduced(self) -> "Decomp":
        out: dict[Partition, int] = {}
        for lam, m in self.terms.items():
            r = sl_reduce(lam, self.dim_v)
            out[r] = out.get(r, 0) + m
        return Decomp(self.dim_v, out)

    def sorted_terms(self) -> list[tuple[Partition, int]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0], reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        out = ""
        for k, (lam, m) in enumerate(self.sorted_terms()):
            mag = abs(m)
            body = str(lam) if mag == 1 else f"{mag} {lam}"
            if k == 0:
                out = ("-" if m < 0 else "") + body
            else:
                out += (" - " if m < 0 else " + ") + body
        return out

    def __repr__(self):
        return f"Decomp(dim_v={self.dim_v}, {self})"

    def to_json(self) -> dict:
        return {"dim_v": self.dim_v, "terms": [[list(lam), m] for lam, m in self.sorted_terms()]}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data) -> "Decomp":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["dim_v"], {Partition(p): m for p, m in data["terms"]})

    @classmethod
    def parse(cls, text: str, dim_v: int) -> "Decomp":
        """Inverse of ``str``: ``S6 + S[4,2] + 2 S[2,2,2]``; ``I`` and ``S0`` are the trivial rep."""
        text = text.strip()
        if text == "0":
            return cls(dim_v)
        out: dict[Partition, int] = {}
        pieces = re.split(r"\s*([+-])\s*", text)
        sign = 1
        if pieces and pieces[0] == "":
            pieces = pieces[1:]
        else:
            pieces = ["+"] + pieces
        for op, term in zip(pieces[0::2], pieces[1::2]):
            sign = -1 if op == "-" else 1
            m = _TERM.match(term.strip())
            if not m:
                raise ValueError(f"cannot parse term {term!r}")
            mult = int(m.group(1)) if m.group(1) else 1
            if m.group(2) is not None:
                lam = Partition([int(m.group(2))])
            elif m.group(3) is not None:
                lam = Partition(int(x) for x in m.group(3).split(","))
            else:
                lam = Partition()
            out[lam] = out.get(lam, 0) + sign * mult
        return cls(dim_v, out)


# ---------------------------------------------------------------------------
# Clebsch–Gordan and Littlewood–Richardson


def cg_product(m: int, n: int) -> Decomp:
    """S^m * S^n for SL_2: S^{m+n} + S^{m+n-2} + ... + S^{|m-n|}."""
    if m < 0 or n < 0:
        raise ValueError("negative degree")
    return Decomp(2, {Partition([m + n - 2 * k]): 1 for k in range(min(m, n) + 1)})


def _horizontal_strips(shape: tuple[int, ...], size: int, max_rows: int):
    """New shapes obtained by adding a horizontal strip of ``size`` boxes."""
    rows = list(shape) + [0]
    rows = rows[:max_rows]
    n = len(rows)

    def rec(r: int, left: int, acc: list[int]):
        if r == n:
            if left == 0:
                yield tuple(acc)
            return
        cap = left if r == 0 else min(left, shape[r - 1] - rows[r])
        for a in range(cap, -1, -1):
            yield from rec(r + 1, left - a, acc + [a])

    yield from rec(0, size, [])


@lru_cache(maxsize=None)
def _lr_coeffs(lam: tuple, mu: tuple, dim_v: int) -> tuple:
    out: dict[tuple, int] = {}
    # states: (shape, per-row list of label counts)
    states = [(tuple(lam), tuple(() for _ in lam))]
    for label, size in enumerate(mu):
        nxt = []
        for shape, fill in states:
            for adds in _horizontal_strips(shape, size, dim_v):
                rows = list(shape) + [0] * (len(adds) - len(shape))
                new_shape = tuple(r + a for r, a in zip(rows, adds))
                new_fill = list(fill) + [()] * (len(adds) - len(fill))
                new_fill = tuple(f + ((label, a),) if a else f for f, a in zip(new_fill, adds))
                if _lattice_ok(new_fill, label + 1):
                    nxt.append((tuple(x for x in new_shape if x), new_fill))
        states = nxt
    for shape, _ in states:
        out[shape] = out.get(shape, 0) + 1
    return tuple(sorted(out.items()))


def _lattice_ok(fill, nlabels: int) -> bool:
    counts = [0] * nlabels
    for row in fill:
        # right to left: larger labels first within a row
        for label, a in sorted(row, reverse=True):
            counts[label] += a
            if label and counts[label] > counts[label - 1]:
                return False
    return True


def lr_product(lam, mu, dim_v: int) -> Decomp:
    """Littlewood–Richardson expansion of S_lam * S_mu, truncated to dim_v rows."""
    if dim_v < 1:
        raise ValueError("dim_v must be positive")
    lam, mu = Partition(lam), Partition(mu)
    if len(lam) > dim_v or len(mu) > dim_v:
        return Decomp(dim_v)
    return Decomp(dim_v, dict(_lr_coeffs(tuple(lam), tuple(mu), dim_v)))


# ---------------------------------------------------------------------------
# dimension two


def _cg_mul(a: Decomp, b: Decomp) -> Decomp:
    out: dict[Partition, int] = {}
    for la, u in a.terms.items():
        for lb, v in b.terms.items():
            for c in cg_product(la.weight, lb.weight).terms:
                out[c] = out.get(c, 0) + u * v
    return Decomp(2, out)


@lru_cache(maxsize=None)
def _sym_sym_dim2(t: int, d: int) -> Decomp:
    if t < 0:
        return Decomp(2)
    if t == 0 or d == 0:
        return Decomp.trivial(2)
    if t == 1:
        return Decomp.single([d], 2)
    out = Decomp.single([t * d], 2)
    for k in range(2, d + 1):
        rest = _sym_sym_dim2(t - k, d)
        if not rest:
            continue
        term = _cg_mul(_cg_mul(Decomp.single([k - 2], 2), _sym_sym_dim2(k, d - k)), rest)
        out = out + term.scale((-1) ** k)
    return out


def sym_sym_dim2(t: int, d: int) -> Decomp:
    """S^t(S^d V) for dim V = 2 as SL_2 highest weights (one-row partitions)."""
    if t < 0 or d < 0:
        raise ValueError("t and d must be non-negative")
    return _sym_sym_dim2(t, d).check_effective(f"S^{t}(S^{d})")


def lambda_sym_dim2(m: int, n: int) -> Decomp:
    """Exterior power of S^n V for dim V = 2, via wedge^m(S^n) = S^m(S^{n-m+1})."""
    if n < 0 or not (0 <= m <= n + 1):
        raise ValueError("need 0 <= m <= n + 1")
    return sym_sym_dim2(m, n - m + 1)


# ---------------------------------------------------------------------------
# the higher-dimensional recurrences


_A = ((5, 4), (5, 1), (4, 2), (2, 1))
_B = ((6, 3), (5, 4), (5, 1), (4, 2), (3, 3), (3,), (2, 1))

# (dim V, d, [(sign, shift j, coefficient partitions)]): S^t(S^d) = S^{td} + sum sign * coeff * S^{t-j}(S^d)
RECURRENCES = {
    "II": (3, 2, [(1, 2, ((2, 2),)), (-1, 3, ((2, 1),)), (1, 4, ((1, 1),))]),
    "III": (3, 3, [(1, 2, ((4, 2),)), (-1, 3, _A), (1, 4, _B), (-1, 5, _B), (1, 6, _A),
                   (-1, 7, ((4, 2),)), (1, 9, ((),))]),
    "IV": (4, 2, [(1, 2, ((2, 2),)), (-1, 3, ((3, 2, 1),)), (1, 4, ((3, 3, 2), (3, 1))),
                  (-1, 5, ((3, 2, 1),)), (1, 6, ((2, 2),)), (-1, 8, ((),))]),
}
RECURRENCE_ALIASES = {"dim3_deg2": "II", "dim3_deg3": "III", "dim4_deg2": "IV"}


def _lift(lam, weight: int, dim_v: int) -> Partition:
    """Add full columns so the partition has the given weight."""
    lam = Partition(lam)
    extra = weight - lam.weight
    if extra < 0 or extra % dim_v:
        raise ValueError(f"cannot lift {lam} to weight {weight} in dim {dim_v}")
    c = extra // dim_v
    return Partition(p + c for p in lam.padded(dim_v))


@lru_cache(maxsize=None)
def _recurrence(name: str, t: int) -> Decomp:
    dim_v, d, rows = RECURRENCES[name]
    if t < 0:
        return Decomp(dim_v)
    out = Decomp.single([t * d], dim_v)
    for sign, j, coeffs in rows:
        rest = _recurrence(name, t - j)
        if not rest:
            continue
        coef = Decomp(dim_v, {_lift(p, d * j, dim_v): 1 for p in coeffs})
        out = out + (coef * rest).scale(sign)
    return out


def sym_sym_recurrence(t: int, base: str) -> Decomp:
    """S^t(S^d V) from one of the recurrences "II" (dim 3, d=2), "III" (dim 3, d=3), "IV" (dim 4, d=2).

    Coefficients are lifted to GL by full columns so every term has weight td.
    """
    name = RECURRENCE_ALIASES.get(base, base)
    if name not in RECURRENCES:
        raise ValueError(f"unknown recurrence {base!r}")
    if t < 0:
        raise ValueError("t must be non-negative")
    return _recurrence(name, t).check_effective(f"recurrence {name} at t={t}")


# ---------------------------------------------------------------------------
# character oracle


ORACLE_GUARD = 10 ** 6


class SymPolynomial:
    """Homogeneous polynomial in ``dim_v`` variables as ``{exponent tuple: coefficient}``."""

    def __init__(self, dim_v: int, coeffs: Mapping[tuple[int, ...], int]):
        self.dim_v = dim_v
        self.coeffs = {tuple(k): int(v) for k, v in coeffs.items() if v}

    def is_symmetric(self) -> bool:
        for k, v in self.coeffs.items():
            for i in range(self.dim_v - 1):
                sw = list(k)
                sw[i], sw[i + 1] = sw[i + 1], sw[i]
                if self.coeffs.get(tuple(sw), 0) != v:
                    return False
        return True

    def __sub__(self, other: "SymPolynomial") -> "SymPolynomial":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) - v
        return SymPolynomial(self.dim_v, out)

    def scale(self, c: int) -> "SymPolynomial":
        return SymPolynomial(self.dim_v, {k: c * v for k, v in self.coeffs.items()})

    def __bool__(self):
        return bool(self.coeffs)

    def value_at_one(self) -> int:
        return sum(self.coeffs.values())

    def leading(self) -> tuple[tuple[int, ...], int]:
        k = max(self.coeffs)
        return k, self.coeffs[k]


@lru_cache(maxsize=None)
def _schur_poly(lam: tuple, n: int) -> tuple:
    """Semistandard tableau count by weight, via branching x_n off one horizontal strip at a time."""
    if n == 0:
        return (((), 1),) if not lam else ()
    if len(lam) > n:
        return ()
    if n == 1:
        return (((sum(lam),), 1),)
    out: dict[tuple, int] = {}
    # mu interlaces lam: lam_{i+1} <= mu_i <= lam_i, with at most n-1 rows
    lp = list(lam) + [0] * (n - len(lam))

    def rec(i: int, acc: list[int]):
        if i == n - 1:
            mu = tuple(x for x in acc if x)
            rest = sum(lam) - sum(mu)
            for w, c in _schur_poly(mu, n - 1):
                key = w + (rest,)
                out[key] = out.get(key, 0) + c
            return
        for v in range(lp[i + 1], lp[i] + 1):
            rec(i + 1, acc + [v])

    rec(0, [])
    return tuple(out.items())


def schur_polynomial(lam, dim_v: int) -> SymPolynomial:
    return SymPolynomial(dim_v, dict(_schur_poly(tuple(Partition(lam)), dim_v)))


def _weights_of_sym(d: int, n: int) -> list[tuple[int, ...]]:
    if n == 1:
        return [(d,)]
    return [(a, *rest) for a in range(d, -1, -1) for rest in _weights_of_sym(d - a, n - 1)]


def sym_sym_character(t: int, d: int, dim_v: int) -> SymPolynomial:
    """Character of S^t(S^d V): weights of all size-t multisets of degree-d monomials."""
    if sym_sym_dim(t, d, dim_v) > ORACLE_GUARD:
        raise ValueError(f"oracle guard: dim S^{t}(S^{d}) exceeds {ORACLE_GUARD}")
    base = t * d + 1
    length = base ** dim_v
    weights = _weights_of_sym(d, dim_v)
    offsets = [sum(a * base ** i for i, a in enumerate(w)) for w in weights]
    counts = multiset_weight_counts(offsets, t, length)[t]
    out = {}
    for idx in np.flatnonzero(counts):
        idx = int(idx)
        key = []
        for _ in range(dim_v):
            key.append(idx % base)
            idx //= base
        out[tuple(key)] = int(counts[int(sum(a * base ** i for i, a in enumerate(key)))])
    return SymPolynomial(dim_v, out)


def exterior_sym_character(m: int, n: int, dim_v: int) -> SymPolynomial:
    """Character of wedge^m(S^n V): weights of size-m subsets of degree-n monomials."""
    weights = _weights_of_sym(n, dim_v)
    table: dict[tuple[int, tuple], int] = {(0, (0,) * dim_v): 1}
    for w in weights:
        new = dict(table)
        for (k, key), c in table.items():
            if k < m:
                nk = (k + 1, tuple(a + b for a, b in zip(key, w)))
                new[nk] = new.get(nk, 0) + c
        table = new
    return SymPolynomial(dim_v, {key: c for (k, key), c in table.items() if k == m})


def decompose_character(ch: SymPolynomial) -> Decomp:
    """Peel off Schur polynomials at the lex-largest (dominant) weight until nothing is left."""
    if not ch.is_symmetric():
        raise ValueError("character is not symmetric")
    n = ch.dim_v
    out: dict[Partition, int] = {}
    rest = ch
    while rest:
        lam, m = rest.leading()
        if any(a < b for a, b in zip(lam, lam[1:])):
            raise AssertionError("leading weight is not dominant")
        out[Partition(lam)] = m
        rest = rest - schur_polynomial(lam, n).scale(m)
    return Decomp(n, out).check_effective("character decomposition")


def sym_sym_oracle(t: int, d: int, dim_v: int) -> Decomp:
    """S^t(S^d V) at the GL level, from the character alone."""
    if t < 0 or d < 0 or dim_v < 1:
        raise ValueError("need t, d >= 0 and dim_v >= 1")
    return decompose_character(sym_sym_character(t, d, dim_v))


def exterior_oracle(m: int, n: int, dim_v: int) -> Decomp:
    return decompose_character(exterior_sym_character(m, n, dim_v))
