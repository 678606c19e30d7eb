"""Gröbner bases of ideals and graded submodules, elimination and Schreyer syzygies.

A module element is stored as a dict ``key -> coefficient`` where ``key``
encodes (position, monomial) so that integer comparison is the module order
and multiplying by a monomial ``m`` adds ``space.shift(m)`` to every key.
Rank-one spaces use the packed ring monomial itself as key, so the term
dict of a :class:`~linsyz.arith.Poly` is already a rank-one module element.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Iterable, Sequence

from .arith import FIELD_BITS, MonomialOrder, Poly, Ring


class NotHomogeneousError(ValueError):
    pass


# ---------------------------------------------------------------------------
# free module spaces


class FreeModule:
    """Graded free module ``⊕ R(-shift_k)`` with position-over-term order.

    Lower positions are larger: ``e_0 > e_1 > ...``.
    """

    def __init__(self, ring: Ring, shifts: Sequence[int]):
        self.ring = ring
        self.shifts = tuple(shifts)
        self.rank = len(self.shifts)
        self._bits = ring.mono_bits
        self._mask = (1 << self._bits) - 1

    def __repr__(self):
        return f"FreeModule(rank={self.rank}, shifts={list(self.shifts)})"

    def __eq__(self, other):
        return (type(other) is FreeModule and self.ring == other.ring and self.shifts == other.shifts)

    def __hash__(self):
        return hash((self.ring, self.shifts))

    def key(self, pos: int, mono: int) -> int:
        return ((self.rank - 1 - pos) << self._bits) + mono

    def split(self, key: int) -> tuple[int, int]:
        return self.rank - 1 - (key >> self._bits), key & self._mask

    def shift(self, mono: int) -> int:
        return mono

    def deg(self, key: int) -> int:
        pos, m = self.split(key)
        return self.ring.deg(m) + self.shifts[pos]


class SchreyerModule(FreeModule):
    """Free module on a list of elements of ``parent``, ordered by Schreyer's induced order.

    ``m e_i > n e_j`` iff ``lead(m g_i) > lead(n g_j)`` in the parent, or they
    are equal and ``i < j``.
    """

    def __init__(self, parent: FreeModule, lead_keys: Sequence[int], shifts: Sequence[int]):
        self.ring = parent.ring
        self.parent = parent
        self.shifts = tuple(shifts)
        self.rank = n = len(self.shifts)
        self._rbits = max(1, n.bit_length())
        self._rmask = (1 << self._rbits) - 1
        self._T = getattr(parent, "_T", 0) + self._rbits
        self._C = [(lk << self._rbits) + (n - 1 - i) for i, lk in enumerate(lead_keys)]

    def __repr__(self):
        return f"SchreyerModule(rank={self.rank})"

    __hash__ = object.__hash__

    def __eq__(self, other):
        return self is other

    def key(self, pos: int, mono: int) -> int:
        return self._C[pos] + (mono << self._T)

    def split(self, key: int) -> tuple[int, int]:
        pos = self.rank - 1 - (key & self._rmask)
        return pos, (key - self._C[pos]) >> self._T

    def shift(self, mono: int) -> int:
        return mono << self._T


def ideal_space(ring: Ring) -> FreeModule:
    return FreeModule(ring, (0,))


# ---------------------------------------------------------------------------
# module elements


class FreeElt:
    """Element of a graded free module; ``components`` gives one Poly per generator."""

    __slots__ = ("space", "terms")

    def __init__(self, space: FreeModule, terms: dict):
        self.space = space
        self.terms = terms

    @classmethod
    def from_components(cls, space: FreeModule, comps: Sequence[Poly]) -> "FreeElt":
        if len(comps) != space.rank:
            raise ValueError(f"need {space.rank} components, got {len(comps)}")
        terms = {}
        for pos, f in enumerate(comps):
            if f.ring != space.ring:
                raise ValueError("component in the wrong ring")
            for m, c in f.terms.items():
                terms[space.key(pos, m)] = c
        return cls(space, terms)

    @classmethod
    def from_poly(cls, f: Poly) -> "FreeElt":
        return cls(ideal_space(f.ring), dict(f.terms))

    @property
    def shifts(self) -> tuple[int, ...]:
        return self.space.shifts

    @property
    def components(self) -> tuple[Poly, ...]:
        out = [dict() for _ in range(self.space.rank)]
        for k, c in self.terms.items():
            pos, m = self.space.split(k)
            out[pos][m] = c
        return tuple(Poly(self.space.ring, d) for d in out)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, FreeElt) and self.space == other.space and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def degrees(self) -> set[int]:
        return {self.space.deg(k) for k in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int:
        degs = self.degrees()
        return max(degs) if degs else -1

    def lead(self) -> tuple[int, int]:
        return self.space.split(max(self.terms))

    def __repr__(self):
        return "FreeElt(" + ", ".join(str(c) for c in self.components) + ")"


def _as_elt(x) -> FreeElt:
    if isinstance(x, FreeElt):
        return x
    if isinstance(x, Poly):
        return FreeElt.from_poly(x)
    raise TypeError(f"expected Poly or FreeElt, got {type(x).__name__}")


# ---------------------------------------------------------------------------
# reduction engine


class _Reducer:
    """Division by a growing list of module elements in one space."""

    def __init__(self, space: FreeModule):
        self.space = space
        self.ring = space.ring
        self.field = space.ring.field
        self.elems: list[dict] = []
        self.leads: list[int] = []
        self.lead_mono: list[int] = []
        self.lead_pos: list[int] = []
        self.lc_inv: list = []
        self.by_pos: dict[int, list[int]] = {}

    def add(self, f: dict) -> int:
        k = max(f)
        pos, m = self.space.split(k)
        idx = len(self.elems)
        self.elems.append(f)
        self.leads.append(k)
        self.lead_mono.append(m)
        self.lead_pos.append(pos)
        self.lc_inv.append(self.field.inv(f[k]))
        self.by_pos.setdefault(pos, []).append(idx)
        return idx

    def find_divisor(self, key: int, skip: int = -1) -> tuple[int, int]:
        pos, m = self.space.split(key)
        ring = self.ring
        g = ring.guard
        low = m & ring.exp_mask | g
        lm = self.lead_mono
        for j in self.by_pos.get(pos, ()):
            if j != skip and (low - (lm[j] & ring.exp_mask)) & g == g:
                return j, m - lm[j]
        return -1, 0

    def _sub(self, f: dict, j: int, q: int, c) -> None:
        # f -= c * q * elems[j]
        p = self.field.p
        sh = self.space.shift(q)
        get = f.get
        if p:
            for k, v in self.elems[j].items():
                kk = k + sh
                nv = (get(kk, 0) - c * v) % p
                if nv:
                    f[kk] = nv
                else:
                    f.pop(kk, None)
        else:
            for k, v in self.elems[j].items():
                kk = k + sh
                nv = get(kk, 0) - c * v
                if nv:
                    f[kk] = nv
                else:
                    f.pop(kk, None)

    def top_reduce(self, f: dict, quotients: list | None = None) -> dict:
        """Reduce leading terms until the lead is irreducible (or f is zero)."""
        fld = self.field
        while f:
            k = max(f)
            j, q = self.find_divisor(k)
            if j < 0:
                return f
            c = fld.mul(f[k], self.lc_inv[j])
            if quotients is not None:
                quotients.append((j, q, c))
            self._sub(f, j, q, c)
        return f

    def full_reduce(self, f: dict, skip: int = -1, quotients: list | None = None) -> dict:
        fld = self.field
        rem: dict = {}
        while f:
            k = max(f)
            j, q = self.find_divisor(k, skip)
            if j < 0:
                rem[k] = f.pop(k)
                continue
            c = fld.mul(f[k], self.lc_inv[j])
            if quotients is not None:
                quotients.append((j, q, c))
            self._sub(f, j, q, c)
        return rem


def _monic(f: dict, field) -> dict:
    if not f:
        return f
    inv = field.inv(f[max(f)])
    if inv == 1:
        return f
    return {k: field.mul(v, inv) for k, v in f.items()}


# ---------------------------------------------------------------------------
# Gröbner bases


class GroebnerBasis:
    """A Gröbner basis of a submodule of ``space`` (an ideal when rank is 1)."""

    def __init__(self, space: FreeModule, elements: list[dict], reduced: bool = True):
        self.space = space
        self.ring = space.ring
        self.order = space.ring.order
        self.reduced = reduced
        self._elements = elements
        self._reducer = None

    def __len__(self):
        return len(self._elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def raw(self) -> list[dict]:
        return self._elements

    @property
    def elements(self) -> list[FreeElt]:
        return [FreeElt(self.space, dict(f)) for f in self._elements]

    def polys(self) -> list[Poly]:
        if self.space.rank != 1:
            raise ValueError("not an ideal")
        return [Poly(self.ring, dict(f)) for f in self._elements]

    def lead_keys(self) -> list[int]:
        return [max(f) for f in self._elements]

    def lead_monomials(self) -> list[tuple[int, tuple[int, ...]]]:
        out = []
        for f in self._elements:
            pos, m = self.space.split(max(f))
            out.append((pos, self.ring.exps(m)))
        return out

    def reducer(self) -> _Reducer:
        if self._reducer is None:
            r = _Reducer(self.space)
            for f in self._elements:
                r.add(f)
            self._reducer = r
        return self._reducer

    def normal_form(self, f):
        """Fully reduced remainder; returns the same type as the input."""
        if isinstance(f, Poly):
            if self.space.rank != 1 or f.ring != self.ring:
                raise ValueError("polynomial is not in the ambient ring of the basis")
            return Poly(self.ring, self.reducer().full_reduce(dict(f.terms)))
        if not isinstance(f, FreeElt) or f.space != self.space:
            raise ValueError("element is not in the ambient module of the basis")
        return FreeElt(self.space, self.reducer().full_reduce(dict(f.terms)))

    def contains(self, f) -> bool:
        return not self.normal_form(f)

    def s_pairs_reduce_to_zero(self) -> bool:
        """Buchberger's criterion, checked exhaustively."""
        red = self.reducer()
        ring = self.ring
        fld = ring.field
        els = self._elements
        for i in range(len(els)):
            for j in range(i + 1, len(els)):
                if red.lead_pos[i] != red.lead_pos[j]:
                    continue
                L = ring.lcm(red.lead_mono[i], red.lead_mono[j])
                s = {}
                _axpy(s, els[i], self.space.shift(L - red.lead_mono[i]), red.lc_inv[i], fld)
                _axpy(s, els[j], self.space.shift(L - red.lead_mono[j]), fld.neg(red.lc_inv[j]), fld)
                if red.full_reduce(s):
                    return False
        return True


def _axpy(f: dict, g: dict, sh: int, c, field) -> None:
    p = field.p
    for k, v in g.items():
        kk = k + sh
        nv = f.get(kk, 0) + c * v
        if p:
            nv %= p
        if nv:
            f[kk] = nv
        else:
            f.pop(kk, None)


def _prepare(gens, order: MonomialOrder | None) -> tuple[FreeModule, list[dict]]:
    elts = [_as_elt(g) for g in gens]
    if not elts:
        raise ValueError("empty generator list: pass the ambient space explicitly")
    space = elts[0].space
    for e in elts:
        if e.space != space:
            raise ValueError("generators live in different modules")
    if order is not None and order != space.ring.order:
        if space.rank != 1 or type(space) is not FreeModule:
            raise ValueError("order change is only supported for ideals")
        ring = space.ring.with_order(order)
        space = ideal_space(ring)
        elts = [FreeElt.from_poly(e.components[0].to_ring(ring)) for e in elts]
    return space, [dict(e.terms) for e in elts]


def buchberger(gens: Sequence, order: MonomialOrder | None = None, space: FreeModule | None = None) -> GroebnerBasis:
    """Reduced Gröbner basis of the submodule generated by homogeneous ``gens``.

    Normal selection strategy (lowest degree first, ties by insertion index)
    with Buchberger's product and chain criteria.
    """
    if gens:
        space, raw = _prepare(gens, order)
    else:
        if space is None:
            raise ValueError("empty generator list: pass the ambient space explicitly")
        raw = []
    return _buchberger(space, raw)


def _buchberger(space: FreeModule, raw: list[dict]) -> GroebnerBasis:
    ring = space.ring
    fld = ring.field
    for f in raw:
        if len({space.deg(k) for k in f}) > 1:
            raise NotHomogeneousError("inhomogeneous input rejected")
    red = _Reducer(space)
    rank_one = space.rank == 1
    heap: list = []
    seq = 0
    for f in raw:
        if f:
            heapq.heappush(heap, (space.deg(max(f)), seq, -1, -1, f))
            seq += 1
    pending: set[tuple[int, int]] = set()

    def add(h: dict):
        nonlocal seq
        k = red.add(h)
        mk, pk = red.lead_mono[k], red.lead_pos[k]
        for i in range(k):
            if red.lead_pos[i] != pk:
                continue
            if rank_one and ring.coprime(red.lead_mono[i], mk):
                continue
            L = ring.lcm(red.lead_mono[i], mk)
            heapq.heappush(heap, (ring.deg(L) + space.shifts[pk], seq, i, k, L))
            pending.add((i, k))
            seq += 1

    while heap:
        deg, _, i, j, data = heapq.heappop(heap)
        if i < 0:
            h = red.top_reduce(dict(data))
        else:
            pending.discard((i, j))
            L = data
            if _chain_skip(red, i, j, L, pending, ring):
                continue
            h = {}
            _axpy(h, red.elems[i], space.shift(L - red.lead_mono[i]), red.lc_inv[i], fld)
            _axpy(h, red.elems[j], space.shift(L - red.lead_mono[j]), fld.neg(red.lc_inv[j]), fld)
            h = red.top_reduce(h)
        if h:
            add(_monic(h, fld))

    return GroebnerBasis(space, _interreduce(space, red.elems), reduced=True)


def _chain_skip(red: _Reducer, i: int, j: int, L: int, pending: set, ring: Ring) -> bool:
    pos = red.lead_pos[i]
    for k in red.by_pos.get(pos, ()):
        if k == i or k == j:
            continue
        if not ring.divides(red.lead_mono[k], L):
            continue
        if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
            return True
    return False


def _interreduce(space: FreeModule, elems: list[dict]) -> list[dict]:
    ring = space.ring
    fld = ring.field
    order = sorted(range(len(elems)), key=lambda t: max(elems[t]))
    keep: list[dict] = []
    for idx in order:
        pos, m = space.split(max(elems[idx]))
        if any(space.split(max(g))[0] == pos and ring.divides(space.split(max(g))[1], m) for g in keep):
            continue
        keep.append(elems[idx])
    out = []
    red = _Reducer(space)
    for g in keep:
        red.add(g)
    for t, g in enumerate(keep):
        k = max(g)
        tail = dict(g)
        lead_c = tail.pop(k)
        r = red.full_reduce(tail, skip=t)
        r[k] = lead_c
        out.append(_monic(r, fld))
    out.sort(key=max)
    return out


def normal_form(f, gb: GroebnerBasis):
    return gb.normal_form(f)


# ---------------------------------------------------------------------------
# minimal generators


def minimal_generators(gens: Sequence, space: FreeModule | None = None) -> list:
    """A minimal homogeneous generating subset, chosen greedily in input order per degree."""
    elts = [_as_elt(g) for g in gens]
    if not elts:
        return []
    space = elts[0].space
    fld = space.ring.field
    by_deg: dict[int, list[int]] = {}
    for i, e in enumerate(elts):
        if not e:
            continue
        if not e.is_homogeneous():
            raise NotHomogeneousError("inhomogeneous input rejected")
        by_deg.setdefault(e.degree(), []).append(i)
    chosen: list[int] = []
    for D in sorted(by_deg):
        gb = _buchberger(space, [dict(elts[i].terms) for i in chosen]) if chosen else None
        echelon = _Reducer(space)
        for i in by_deg[D]:
            h = dict(elts[i].terms)
            if gb is not None:
                h = gb.reducer().full_reduce(h)
            h = echelon.full_reduce(h)
            if h:
                # echelon elements are reduced against each other on all terms
                echelon.add(h)
                chosen.append(i)
    chosen.sort()
    return [gens[i] for i in chosen]


# ---------------------------------------------------------------------------
# Schreyer syzygies


def schreyer_sort(gb: GroebnerBasis) -> GroebnerBasis:
    """Reorder so that, per lead position, lead monomials are lex-decreasing.

    This ordering makes iterated Schreyer syzygies terminate within the
    number of variables.
    """
    space = gb.space
    ring = gb.ring

    def key(f):
        pos, m = space.split(max(f))
        return (pos, tuple(-e for e in ring.exps(m)))

    out = GroebnerBasis(space, sorted(gb.raw, key=key), reduced=gb.reduced)
    return out


def syzygies(gb: GroebnerBasis, minimal_frame: bool = True) -> list[FreeElt]:
    """Generators of the syzygy module of ``gb``'s elements (Schreyer's algorithm).

    The result lives in a :class:`SchreyerModule` with shifts equal to the
    degrees of the basis elements; under that order the returned elements
    are again a Gröbner basis.
    """
    space = gb.space
    ring = gb.ring
    fld = ring.field
    els = gb.raw
    red = gb.reducer()
    shifts = [space.deg(max(f)) for f in els]
    target = SchreyerModule(space, [max(f) for f in els], shifts)
    out: list[FreeElt] = []
    for i in range(len(els)):
        cands = []
        for j in range(i + 1, len(els)):
            if red.lead_pos[j] != red.lead_pos[i]:
                continue
            L = ring.lcm(red.lead_mono[i], red.lead_mono[j])
            cands.append((j, L - red.lead_mono[i], L))
        if minimal_frame:
            kept = []
            for t, (j, mj, L) in enumerate(cands):
                redundant = False
                for u, (k, mk, _) in enumerate(cands):
                    if u != t and ring.divides(mk, mj) and (mk != mj or u < t):
                        redundant = True
                        break
                if not redundant:
                    kept.append((j, mj, L))
            cands = kept
        for j, mj, L in cands:
            ci, cj = red.lc_inv[i], red.lc_inv[j]
            s: dict = {}
            _axpy(s, els[i], space.shift(mj), ci, fld)
            _axpy(s, els[j], space.shift(L - red.lead_mono[j]), fld.neg(cj), fld)
            quots: list = []
            rest = red.top_reduce(s, quots)
            if rest:
                raise ValueError("input is not a Gröbner basis")
            tau: dict = {}
            _axpy(tau, {target.key(i, mj): 1}, 0, ci, fld)
            _axpy(tau, {target.key(j, L - red.lead_mono[j]): 1}, 0, fld.neg(cj), fld)
            for u, q, c in quots:
                k = target.key(u, q)
                nv = tau.get(k, 0) - c
                if fld.p:
                    nv %= fld.p
                if nv:
                    tau[k] = nv
                else:
                    tau.pop(k, None)
            out.append(FreeElt(target, tau))
    return out


def pairing(syz: FreeElt, gens: Sequence[dict], space: FreeModule) -> dict:
    """Σ syz_k · gens[k] as a raw element of ``space`` (zero for a syzygy)."""
    fld = space.ring.field
    out: dict = {}
    for k, c in syz.terms.items():
        pos, m = syz.space.split(k)
        _axpy(out, gens[pos], space.shift(m), c, fld)
    return out


# ---------------------------------------------------------------------------
# elimination


def _rational_nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    mat = [list(r) for r in rows]
    piv_cols = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        piv_cols.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in piv_cols]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(piv_cols):
            v[pc] = -mat[i][fc]
        basis.append(v)
    return basis


def grading_weights(images: Sequence[Poly], relations: Sequence[Poly]) -> tuple[list[int], int]:
    """Positive integer weights on the auxiliary variables making the map graded.

    Returns ``(weights, c)`` where every nonzero image is homogeneous of
    weighted degree ``c`` and every relation is homogeneous.
    """
    if not images:
        raise ValueError("no images")
    ring = images[0].ring
    n = ring.n
    rows = []
    for f in images:
        for m in f.terms:
            rows.append([Fraction(e) for e in ring.exps(m)] + [Fraction(-1)])
    for f in relations:
        ms = list(f.terms)
        for m in ms[1:]:
            a, b = ring.exps(ms[0]), ring.exps(m)
            rows.append([Fraction(x - y) for x, y in zip(a, b)] + [Fraction(0)])
    basis = _rational_nullspace(rows, n + 1)
    if not basis:
        raise NotHomogeneousError("no grading makes the map homogeneous")
    used = [any(ring.exps(m)[i] for f in list(images) + list(relations) for m in f.terms) for i in range(n)]
    candidates = [[sum(col) for col in zip(*basis)]] + basis
    for v in candidates:
        den = 1
        for x in v:
            den = den * x.denominator // _gcd(den, x.denominator)
        iv = [int(x * den) for x in v]
        if iv[-1] < 0:
            iv = [-x for x in iv]
        if iv[-1] > 0 and all(x > 0 for x, u in zip(iv[:-1], used) if u):
            g = 0
            for x in iv:
                g = _gcd(g, abs(x))
            iv = [x // g for x in iv]
            return [x if x > 0 else 1 for x in iv[:-1]], iv[-1]
    raise NotHomogeneousError("no positive grading makes the map homogeneous")


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def elim_kernel(target_images: Sequence[Poly], relations: Sequence[Poly], source_vars: int | None = None,
                source_ring: Ring | None = None) -> list[Poly]:
    """Generators of ker(k[z] -> A/(relations)), z_i -> target_images[i].

    Computed as the elimination ideal of (z_i - image_i) + relations under a
    block order eliminating the auxiliary variables.  The result is the
    reduced grevlex Gröbner basis of the kernel in ``source_ring``.
    """
    if not target_images:
        raise ValueError("no images")
    aux = target_images[0].ring
    if source_ring is None:
        source_ring = Ring(source_vars if source_vars is not None else len(target_images), aux.field)
    if source_ring.n != len(target_images):
        raise ValueError("need one image per source variable")
    w, c = grading_weights(target_images, relations)
    names = tuple(f"_a{i}" for i in range(aux.n)) + tuple(f"_s{i}" for i in range(source_ring.n))
    big = Ring(names, aux.field, MonomialOrder("elim", aux.n), list(w) + [c] * source_ring.n)
    emb = list(range(aux.n))
    gens = []
    for i, img in enumerate(target_images):
        gens.append(big.var(aux.n + i) - img.to_ring(big, emb))
    for r in relations:
        if r:
            gens.append(r.to_ring(big, emb))
    gb = buchberger(gens)
    back = [0] * big.n
    for i in range(source_ring.n):
        back[aux.n + i] = i
    out = []
    for f in gb.polys():
        exps = f.lead_exps()
        if any(exps[:aux.n]):
            continue
        # the lead has no auxiliary variable, hence neither does any term
        out.append(_pull_back(f, source_ring, aux.n))
    gbk = buchberger(out) if out else GroebnerBasis(ideal_space(source_ring), [])
    return gbk.polys()


def _pull_back(f: Poly, ring: Ring, offset: int) -> Poly:
    terms = {}
    for m, c in f.terms.items():
        e = f.ring.exps(m)
        terms[ring.mono(e[offset:])] = c
    return Poly(ring, terms)
