"""Exact coefficient fields, monomial orders and sparse polynomials.

Monomials are packed into a single Python int.  The low ``17*n`` bits hold
the exponent vector (16 bits per variable plus a guard bit used for the
divisibility test); the bits above hold an order key that is *linear* in the
exponents.  As a consequence

* multiplying monomials is integer addition,
* comparing monomials under the ring's order is integer comparison,
* ``m | n`` is a single masked subtraction.

Exponents and weighted degrees are limited to ``< 2**16``; exceeding that
raises :class:`OverflowError` instead of silently wrapping.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence

FIELD_BITS = 17
EXP_LIMIT = 1 << 16
_FIELD_MASK = (1 << 16) - 1

DEFAULT_PRIME = 32003


# ---------------------------------------------------------------------------
# coefficient fields


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class PrimeField:
    """F_p with canonical representatives in ``[0, p)``."""

    def __init__(self, p: int = DEFAULT_PRIME):
        if p == 2 or not _is_prime(p) or p >= 1 << 31:
            raise ValueError(f"need an odd prime below 2^31, got {p}")
        self.p = p
        self.char = p
        self.zero = 0
        self.one = 1

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __call__(self, x) -> int:
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            return self.div(x.numerator % self.p, x.denominator % self.p)
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return pow(a, -1, self.p)

    def div(self, a, b):
        return (a * self.inv(b)) % self.p

    def to_str(self, a) -> str:
        # symmetric representative reads better and parses back to the same class
        return str(a - self.p if a > self.p // 2 else a)


class RationalField:
    """The rationals, as :class:`fractions.Fraction` in lowest terms."""

    p = 0
    char = 0
    zero = Fraction(0)
    one = Fraction(1)

    def __repr__(self):
        return "RationalField()"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __call__(self, x) -> Fraction:
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero in Q")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) * self.inv(b)

    def to_str(self, a) -> str:
        return str(a)


QQ = RationalField()


def field_from_spec(char: int | None) -> PrimeField | RationalField:
    """``None`` or 0 selects the rationals, anything else F_char."""
    return QQ if not char else PrimeField(char)


# ---------------------------------------------------------------------------
# monomial orders


class MonomialOrder:
    """One of ``grevlex``, ``lex`` or ``elim`` (block elimination of the first k variables).

    ``elim`` compares the degree in the eliminated block first and breaks ties
    with weighted grevlex, so any monomial involving an eliminated variable is
    larger than every monomial that does not.
    """

    KINDS = ("grevlex", "lex", "elim")

    def __init__(self, kind: str = "grevlex", k: int = 0):
        if kind not in self.KINDS:
            raise ValueError(f"unknown monomial order {kind!r}")
        if kind == "elim" and k < 1:
            raise ValueError("block elimination needs k >= 1")
        self.kind = kind
        self.k = k if kind == "elim" else 0

    def __repr__(self):
        return f"MonomialOrder({self.kind!r}, {self.k})" if self.kind == "elim" else f"MonomialOrder({self.kind!r})"

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.kind, self.k) == (other.kind, other.k)

    def __hash__(self):
        return hash((self.kind, self.k))

    def key_increments(self, n: int, weights: Sequence[int]) -> list[int]:
        """Per-variable contribution to the integer order key."""
        x = FIELD_BITS * n
        if self.kind == "lex":
            return [1 << (FIELD_BITS * (n - 1 - i)) for i in range(n)]
        inc = [(weights[i] << x) - (1 << (FIELD_BITS * i)) for i in range(n)]
        if self.kind == "elim":
            top = x + FIELD_BITS
            inc = [v + ((1 << top) if i < self.k else 0) for i, v in enumerate(inc)]
        return inc

    def compare(self, a: Sequence[int], b: Sequence[int], weights: Sequence[int] | None = None) -> int:
        """-1, 0, 1 for LT, EQ, GT."""
        if len(a) != len(b):
            raise ValueError("exponent vectors of different length")
        w = weights or [1] * len(a)
        inc = self.key_increments(len(a), w)
        ka = sum(e * v for e, v in zip(a, inc))
        kb = sum(e * v for e, v in zip(b, inc))
        return (ka > kb) - (ka < kb)


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


# ---------------------------------------------------------------------------
# rings


class Ring:
    """k[x_0..x_{n-1}] with a fixed field, monomial order and variable weights."""

    def __init__(self, names: Sequence[str] | int, field=None, order: MonomialOrder | str = GREVLEX,
                 weights: Sequence[int] | None = None):
        if isinstance(names, int):
            names = [f"z{i}" for i in range(names)]
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        self.names = names
        self.n = n = len(names)
        self.field = field if field is not None else PrimeField()
        self.order = MonomialOrder(order) if isinstance(order, str) else order
        self.weights = tuple(weights) if weights is not None else (1,) * n
        if len(self.weights) != n or any(w < 1 for w in self.weights):
            raise ValueError("weights must be positive, one per variable")
        self.exp_bits = FIELD_BITS * n
        self.exp_mask = (1 << self.exp_bits) - 1
        self.guard = sum(1 << (FIELD_BITS * i + 16) for i in range(n))
        inc = self.order.key_increments(n, self.weights)
        self.var_monos = [(inc[i] << self.exp_bits) + (1 << (FIELD_BITS * i)) for i in range(n)]
        self.mono_bits = self.exp_bits + 3 * FIELD_BITS + self.exp_bits + 2
        self._deg = {0: 0}
        self._hash = hash((names, self.field, self.order, self.weights))

    def __repr__(self):
        return f"Ring({list(self.names)}, {self.field!r}, {self.order!r})"

    def __eq__(self, other):
        return self is other or (isinstance(other, Ring) and self.names == other.names and
                                 self.field == other.field and self.order == other.order and
                                 self.weights == other.weights)

    def __hash__(self):
        return self._hash

    def with_order(self, order, weights=None) -> "Ring":
        return Ring(self.names, self.field, order, self.weights if weights is None else weights)

    def with_field(self, field) -> "Ring":
        return Ring(self.names, field, self.order, self.weights)

    # -- monomials -------------------------------------------------------

    def mono(self, exps: Sequence[int]) -> int:
        if len(exps) != self.n:
            raise ValueError(f"exponent vector of length {len(exps)} in a ring with {self.n} variables")
        m = 0
        for e, v in zip(exps, self.var_monos):
            if e < 0:
                raise ValueError("negative exponent")
            if e:
                m += e * v
        if sum(exps) >= EXP_LIMIT or sum(e * w for e, w in zip(exps, self.weights)) >= EXP_LIMIT:
            raise OverflowError("monomial degree exceeds 2^16")
        return m

    def exps(self, m: int) -> tuple[int, ...]:
        low = m & self.exp_mask
        return tuple((low >> (FIELD_BITS * i)) & _FIELD_MASK for i in range(self.n))

    def deg(self, m: int) -> int:
        d = self._deg.get(m)
        if d is None:
            d = sum(e * w for e, w in zip(self.exps(m), self.weights))
            self._deg[m] = d
        return d

    def divides(self, a: int, b: int) -> bool:
        g = self.guard
        return ((b & self.exp_mask | g) - (a & self.exp_mask)) & g == g

    def lcm(self, a: int, b: int) -> int:
        return self.mono([max(x, y) for x, y in zip(self.exps(a), self.exps(b))])

    def coprime(self, a: int, b: int) -> bool:
        return all(x == 0 or y == 0 for x, y in zip(self.exps(a), self.exps(b)))

    # -- constructors ----------------------------------------------------

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return Poly(self, {0: self.field.one})

    def const(self, c) -> "Poly":
        c = self.field(c)
        return Poly(self, {0: c} if c else {})

    def gens(self) -> list["Poly"]:
        return [Poly(self, {m: self.field.one}) for m in self.var_monos]

    def var(self, name_or_index) -> "Poly":
        i = self.names.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        return Poly(self, {self.var_monos[i]: self.field.one})

    def from_terms(self, terms: Iterable[tuple[Sequence[int], object]]) -> "Poly":
        d: dict[int, object] = {}
        f = self.field
        for exps, c in terms:
            m = self.mono(exps)
            d[m] = f.add(d.get(m, f.zero), f(c))
        return Poly(self, {m: c for m, c in d.items() if c})

    def parse(self, text: str) -> "Poly":
        return _Parser(self, text).parse()


# ---------------------------------------------------------------------------
# polynomials


class Poly:
    """Immutable sparse polynomial; ``terms`` maps packed monomials to nonzero coefficients."""

    __slots__ = ("ring", "terms", "_lead")

    def __init__(self, ring: Ring, terms: dict):
        self.ring = ring
        self.terms = terms
        self._lead = None

    # -- inspection ------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def lead_mono(self) -> int:
        if self._lead is None:
            if not self.terms:
                raise ValueError("zero polynomial has no leading term")
            self._lead = max(self.terms)
        return self._lead

    def lead_exps(self) -> tuple[int, ...]:
        return self.ring.exps(self.lead_mono())

    def lead_coeff(self):
        return self.terms[self.lead_mono()]

    def sorted_terms(self) -> list[tuple[tuple[int, ...], object]]:
        """(exponents, coefficient) pairs, strictly descending in the ring order."""
        ex = self.ring.exps
        return [(ex(m), self.terms[m]) for m in sorted(self.terms, reverse=True)]

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(self.ring.deg(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {self.ring.deg(m) for m in self.terms}
        return len(degs) <= 1

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def coeff(self, exps: Sequence[int]):
        return self.terms.get(self.ring.mono(exps), self.ring.field.zero)

    # -- arithmetic ------------------------------------------------------

    def _check(self, other: "Poly"):
        if not isinstance(other, Poly):
            raise TypeError(f"expected Poly, got {type(other).__name__}")
        if other.ring is not self.ring and other.ring != self.ring:
            raise ValueError("polynomials live in different rings")

    def _coerce(self, other):
        if isinstance(other, Poly):
            self._check(other)
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        return Poly(self.ring, _add(self.terms, other.terms, self.ring.field, 1))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return Poly(self.ring, _add(self.terms, other.terms, self.ring.field, -1))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        f = self.ring.field
        return Poly(self.ring, {m: f.neg(c) for m, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(self.ring.field(other))
        self._check(other)
        if self.terms and other.terms:
            if self.degree() + other.degree() >= EXP_LIMIT:
                raise OverflowError("product degree exceeds 2^16")
        return Poly(self.ring, _mul(self.terms, other.terms, self.ring.field))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        if self.terms and self.degree() * k >= EXP_LIMIT:
            raise OverflowError("power degree exceeds 2^16")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> "Poly":
        f = self.ring.field
        if not c:
            return self.ring.zero()
        return Poly(self.ring, {m: f.mul(v, c) for m, v in self.terms.items()})

    def shift(self, mono: int, c=None) -> "Poly":
        """Multiply by the monomial ``mono`` (and optionally a scalar)."""
        f = self.ring.field
        if c is None:
            return Poly(self.ring, {m + mono: v for m, v in self.terms.items()})
        return Poly(self.ring, {m + mono: f.mul(v, c) for m, v in self.terms.items()})

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.lead_coeff()))

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    # -- maps --------------------------------------------------------------

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Apply the ring map x_i -> images[i]; all images share one target ring."""
        if len(images) != self.ring.n:
            raise ValueError("need one image per variable")
        target = images[0].ring
        out = target.zero()
        cache: dict[tuple[int, int], Poly] = {}
        for m, c in self.terms.items():
            term = target.const(c) if target.field == self.ring.field else target.const(Fraction(c))
            for i, e in enumerate(self.ring.exps(m)):
                if e:
                    pw = cache.get((i, e))
                    if pw is None:
                        pw = cache[(i, e)] = images[i] ** e
                    term = term * pw
            out = out + term
        return out

    def to_ring(self, ring: Ring, var_map: Sequence[int] | None = None) -> "Poly":
        """Re-express in ``ring``; variable i goes to ``var_map[i]`` (default: same index)."""
        if var_map is None:
            var_map = list(range(self.ring.n))
        out = {}
        f = ring.field
        for m, c in self.terms.items():
            exps = [0] * ring.n
            for i, e in enumerate(self.ring.exps(m)):
                if e:
                    exps[var_map[i]] += e
            cc = f(c) if f == self.ring.field else f(Fraction(c) if isinstance(c, Fraction) else c)
            if cc:
                out[ring.mono(exps)] = cc
        return Poly(ring, out)

    # -- printing ----------------------------------------------------------

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        return format_poly(self)


def _add(a: dict, b: dict, field, sign: int) -> dict:
    out = dict(a)
    p = field.p
    for m, c in b.items():
        v = out.get(m)
        if v is None:
            out[m] = c if sign > 0 else field.neg(c)
            continue
        v = v + c if sign > 0 else v - c
        if p:
            v %= p
        if v:
            out[m] = v
        else:
            del out[m]
    return out


def _mul(a: dict, b: dict, field) -> dict:
    if len(a) > len(b):
        a, b = b, a
    out: dict = {}
    p = field.p
    get = out.get
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = ma + mb
            out[m] = get(m, 0) + ca * cb
    if p:
        return {m: v % p for m, v in out.items() if v % p}
    return {m: v for m, v in out.items() if v}


def format_poly(f: Poly, names: Sequence[str] | None = None, term_order: str = "ring") -> str:
    """Text form ``x*z - y^2``.  ``term_order='lex'`` lists terms in lex order instead."""
    ring = f.ring
    names = names or ring.names
    if not f.terms:
        return "0"
    if term_order == "lex":
        monos = sorted(f.terms, key=ring.exps, reverse=True)
    else:
        monos = sorted(f.terms, reverse=True)
    parts = []
    for m in monos:
        c = ring.field.to_str(f.terms[m])
        neg = c.startswith("-")
        c = c.lstrip("-")
        factors = []
        for name, e in zip(names, ring.exps(m)):
            if e == 1:
                factors.append(name)
            elif e:
                factors.append(f"{name}^{e}")
        if not factors:
            body = c
        elif c == "1":
            body = "*".join(factors)
        else:
            body = c + "*" + "*".join(factors)
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


# ---------------------------------------------------------------------------
# parser

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


class ParseError(ValueError):
    pass


class _Parser:
    def __init__(self, ring: Ring, text: str):
        self.ring = ring
        self.toks = self._tokenize(text)
        self.i = 0

    def _tokenize(self, text: str) -> list[tuple[str, str]]:
        toks = []
        for num, ident, other in _TOKEN.findall(text):
            if num:
                toks.append(("num", num))
            elif ident:
                toks.extend(("var", v) for v in self._split_ident(ident))
            elif other.strip():
                if other not in "+-*^/()":
                    raise ParseError(f"unexpected character {other!r}")
                toks.append(("op", other))
        return toks

    def _split_ident(self, ident: str) -> list[str]:
        names = self.ring.names
        if ident in names:
            return [ident]
        out = []
        pos = 0
        while pos < len(ident):
            for name in sorted(names, key=len, reverse=True):
                if ident.startswith(name, pos):
                    out.append(name)
                    pos += len(name)
                    break
            else:
                raise ParseError(f"unknown symbol {ident!r}")
        return out

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> Poly:
        if not self.toks:
            raise ParseError("empty polynomial")
        p = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input at token {self.peek()[1]!r}")
        return p

    def expr(self) -> Poly:
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        elif self.peek() == ("op", "+"):
            self.take()
        out = self.term()
        if sign < 0:
            out = -out
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self) -> Poly:
        out = self.factor()
        while True:
            kind, val = self.peek()
            if (kind, val) == ("op", "*"):
                self.take()
                out = out * self.factor()
            elif kind in ("num", "var") or (kind, val) == ("op", "("):
                out = out * self.factor()
            else:
                return out

    def factor(self) -> Poly:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ParseError("malformed exponent")
            e = int(val)
            if e >= EXP_LIMIT:
                raise OverflowError("exponent exceeds 2^16")
            base = base ** e
        return base

    def atom(self) -> Poly:
        kind, val = self.take()
        if kind == "num":
            c = Fraction(int(val))
            if self.peek() == ("op", "/"):
                self.take()
                k2, v2 = self.take()
                if k2 != "num" or int(v2) == 0:
                    raise ParseError("malformed rational coefficient")
                c = Fraction(int(val), int(v2))
            return self.ring.const(c)
        if kind == "var":
            return self.ring.var(val)
        if (kind, val) == ("op", "("):
            inner = self.expr()
            if self.take() != ("op", ")"):
                raise ParseError("unbalanced parenthesis")
            return inner
        raise ParseError(f"unexpected token {val!r}")
