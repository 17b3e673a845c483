"""Polynomials over F_q and the structure of x^n - 1.

Two layers serve different consumers. The coset layer describes the
factorization of x^n - 1 over F_q purely through q-cyclotomic cosets mod n'
(n stripped of its p-part): factor degrees, their count, and the ratio of
low-degree factors. It needs no field construction at all, which is what
lets the criteria engine handle q = 3^21 without blinking. The explicit
layer produces actual irreducible factor polynomials by splitting integer
cyclotomic polynomials mod p, and a general-purpose factorization routine
for arbitrary monic inputs (square-free decomposition, distinct-degree,
equal-degree splitting).

Coefficients live in a canonical copy of F_q: the field built by
coeff_field(p, k), whose elements serialize as plain coordinate lists.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import intfact
from .gf import FieldDescriptor, FieldElement, build_field


def coeff_field(p: int, k: int) -> FieldDescriptor:
    """The canonical standalone copy of F_{p^k} used for coefficients."""
    return build_field(p, 1, k)


class FqPoly:
    """Dense polynomial over F_q, lowest coefficient first, trimmed."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldDescriptor, coeffs):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.field = field
        self.coeffs = tuple(coeffs)

    # -- constructors --------------------------------------------------------

    @staticmethod
    def from_ints(field: FieldDescriptor, ints) -> "FqPoly":
        return FqPoly(field, [field.from_int(c) for c in ints])

    @staticmethod
    def zero(field) -> "FqPoly":
        return FqPoly(field, [])

    @staticmethod
    def one(field) -> "FqPoly":
        return FqPoly(field, [field.one])

    @staticmethod
    def x_pow(field, e: int) -> "FqPoly":
        return FqPoly(field, [field.zero] * e + [field.one])

    @staticmethod
    def xn_minus_1(field, n: int) -> "FqPoly":
        coeffs = [field.zero] * (n + 1)
        coeffs[0] = -field.one
        coeffs[n] = field.one
        return FqPoly(field, coeffs)

    @staticmethod
    def parse(text: str, field: FieldDescriptor) -> "FqPoly":
        """Parse '1', 'x+2', 'x^4+2x^2+1' with prime-field integer coefficients."""
        s = text.replace(" ", "").replace("**", "^")
        if not s:
            raise ValueError("empty polynomial")
        terms = re.findall(r"[+-]?[^+-]+", s)
        if "".join(terms) != s:
            raise ValueError(f"cannot parse polynomial {text!r}")
        coeffs: dict[int, int] = {}
        for term in terms:
            m = re.fullmatch(r"([+-]?)(\d*)(x(\^(\d+))?)?", term)
            if not m or (not m.group(2) and not m.group(3)):
                raise ValueError(f"bad term {term!r} in {text!r}")
            sign = -1 if m.group(1) == "-" else 1
            coeff = int(m.group(2)) if m.group(2) else 1
            exp = 0 if not m.group(3) else (int(m.group(5)) if m.group(5) else 1)
            coeffs[exp] = coeffs.get(exp, 0) + sign * coeff
        deg = max(coeffs)
        return FqPoly.from_ints(field, [coeffs.get(i, 0) for i in range(deg + 1)])

    # -- basic queries ---------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == self.field.one

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one

    def key(self) -> tuple[int, ...]:
        """Deterministic sort key: degree then packed coefficient keys."""
        return (self.degree, *(c.key() for c in self.coeffs))

    # -- arithmetic -------------------------------------------------------------

    def __add__(self, other):
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [f.zero] * (n - len(self.coeffs))
        b = list(other.coeffs) + [f.zero] * (n - len(other.coeffs))
        return FqPoly(f, [x + y for x, y in zip(a, b)])

    def __sub__(self, other):
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [f.zero] * (n - len(self.coeffs))
        b = list(other.coeffs) + [f.zero] * (n - len(other.coeffs))
        return FqPoly(f, [x - y for x, y in zip(a, b)])

    def __neg__(self):
        return FqPoly(self.field, [-c for c in self.coeffs])

    def __mul__(self, other):
        f = self.field
        if self.is_zero() or other.is_zero():
            return FqPoly.zero(f)
        out = [f.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x.is_zero():
                continue
            for j, y in enumerate(other.coeffs):
                out[i + j] = out[i + j] + x * y
        return FqPoly(f, out)

    def __divmod__(self, other):
        f = self.field
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        inv_lead = other.coeffs[-1].inverse()
        quot = [f.zero] * max(0, len(rem) - db)
        while len(rem) - 1 >= db and rem:
            c = rem[-1] * inv_lead
            d = len(rem) - 1 - db
            quot[d] = c
            for i, y in enumerate(other.coeffs):
                rem[d + i] = rem[d + i] - c * y
            while rem and rem[-1].is_zero():
                rem.pop()
        return FqPoly(f, quot), FqPoly(f, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other: "FqPoly") -> bool:
        return (other % self).is_zero()

    def monic(self) -> "FqPoly":
        if self.is_zero() or self.is_monic():
            return self
        inv = self.coeffs[-1].inverse()
        return FqPoly(self.field, [c * inv for c in self.coeffs])

    def gcd(self, other: "FqPoly") -> "FqPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def pow_mod(self, e: int, mod: "FqPoly") -> "FqPoly":
        if mod.degree >= 4 and e.bit_length() > 8:
            ring = _PackedRing(self.field, mod)
            return ring.pow(self % mod, e)
        result = FqPoly.one(self.field)
        base = self % mod
        while e:
            if e & 1:
                result = result * base % mod
            base = base * base % mod
            e >>= 1
        return result

    def derivative(self) -> "FqPoly":
        f = self.field
        return FqPoly(
            f,
            [c * f.from_int(i) for i, c in enumerate(self.coeffs)][1:],
        )

    def eval(self, point: FieldElement) -> FieldElement:
        acc = point.field.zero
        for c in reversed(self.coeffs):
            acc = acc * point + c
        return acc

    def eval_embedded(self, point: FieldElement) -> FieldElement:
        """Evaluate at a point of an extension carrying this F_q as subfield."""
        big = point.field
        acc = big.zero
        for c in reversed(self.coeffs):
            acc = acc * point + big.embed_subfield(c)
        return acc

    # -- misc ------------------------------------------------------------------

    def to_json(self):
        return [list(c.coords) for c in self.coeffs]

    def __eq__(self, other):
        return (
            isinstance(other, FqPoly)
            and self.field is other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            if self.field.deg == 1:
                cs = str(c.coords[0])
            else:
                cs = "(" + ",".join(str(v) for v in c.coords) + ")"
            if i == 0:
                parts.append(cs)
            else:
                xs = "x" if i == 1 else f"x^{i}"
                parts.append(xs if cs == "1" else f"{cs}{xs}")
        return "+".join(parts)

    def __repr__(self):
        return f"FqPoly({self}, GF({self.field.order}))"


class _PackedRing:
    """Fast multiplication in F_q[x]/(f) by flattening into integer lanes.

    A polynomial of x-degree < D with F_q coefficients (F_p y-polys of degree
    < k) becomes one integer with a lane grid: stride S = 3k-2 lanes per
    x-coefficient, 16 or 32 bits per lane. One big-int multiply then performs
    the whole bivariate convolution; the y-overhang is reduced mod the F_q
    modulus and the x-overhang folded with precomputed rows of x^(D+t) mod f.
    """

    def __init__(self, field: FieldDescriptor, mod: "FqPoly"):
        assert mod.is_monic() and mod.degree >= 1
        self.field = field
        self.mod = mod
        p, k = field.p, field.deg
        self.p = p
        self.k = k
        self.D = mod.degree
        self.S = max(1, 3 * k - 2)
        worst = (2 * self.D - 1) * k * (p - 1) ** 2 + self.D * k * (p - 1) ** 2
        self.lane = 16 if worst < (1 << 16) else 32
        self.mask = (1 << self.lane) - 1
        self.block = self.lane * self.S
        # y-reduction rows: y^(k+t) mod m_k as coordinate tuples
        m = field.modulus
        rows = []
        cur = [(-c) % p for c in m[:-1]]
        for _ in range(2 * k):
            rows.append(tuple(cur))
            cur = [0] + cur
            top = cur.pop()
            if top:
                cur = [(a - top * b) % p for a, b in zip(cur, m[:-1])]
        self._yred = rows
        # x-reduction rows: x^(D+t) mod f, flattened
        xred = []
        cur_poly = [-c for c in mod.coeffs[:-1]]  # x^D mod f
        for _ in range(self.D - 1):
            xred.append(self._flatten([c.coords for c in cur_poly]))
            top = cur_poly[-1]
            cur_poly = [field.zero] + cur_poly[:-1]
            if not top.is_zero():
                cur_poly = [
                    a - top * b for a, b in zip(cur_poly, mod.coeffs[:-1])
                ]
        self._xred = xred

    def _flatten(self, coords_list) -> int:
        v = 0
        shift = 0
        for block in coords_list:
            for j, c in enumerate(block):
                if c:
                    v |= c << (shift + j * self.lane)
            shift += self.block
        return v

    def _y_reduce(self, lanes) -> tuple[int, ...]:
        p, k = self.p, self.k
        vals = list(lanes[:k])
        for t, c in enumerate(lanes[k:]):
            c %= p
            if c:
                row = self._yred[t]
                for j in range(k):
                    vals[j] += c * row[j]
        return tuple(v % p for v in vals)

    def _extract_block(self, packed: int, i: int) -> tuple[int, ...]:
        chunk = (packed >> (i * self.block)) & ((1 << self.block) - 1)
        lanes = []
        for _ in range(self.S):
            lanes.append(chunk & self.mask)
            chunk >>= self.lane
        return self._y_reduce(lanes)

    def mulmod_packed(self, a: int, b: int) -> int:
        prod = a * b
        D = self.D
        low_mask = (1 << (self.block * D)) - 1
        acc = prod & low_mask
        high = prod >> (self.block * D)
        t = 0
        while high:
            coeff = self._y_reduce(
                [(high >> (j * self.lane)) & self.mask for j in range(self.S)]
            )
            if any(coeff):
                cpacked = 0
                for j, c in enumerate(coeff):
                    if c:
                        cpacked |= c << (j * self.lane)
                acc += cpacked * self._xred[t]
            high >>= self.block
            t += 1
        # renormalize lanes mod p so they stay small across repeated squarings
        out = 0
        for i in range(D):
            blk = self._extract_block(acc, i)
            for j, c in enumerate(blk):
                if c:
                    out |= c << (i * self.block + j * self.lane)
        return out

    def pack(self, poly: "FqPoly") -> int:
        return self._flatten([c.coords for c in poly.coeffs])

    def unpack(self, packed: int) -> "FqPoly":
        coeffs = [
            FieldElement(self.field, self._extract_block(packed, i))
            for i in range(self.D)
        ]
        return FqPoly(self.field, coeffs)

    def pow(self, base: "FqPoly", e: int) -> "FqPoly":
        if e == 0:
            return FqPoly.one(self.field) % self.mod
        b = self.pack(base)
        result = None
        while e:
            if e & 1:
                result = b if result is None else self.mulmod_packed(result, b)
            e >>= 1
            if e:
                b = self.mulmod_packed(b, b)
        return self.unpack(result)


# ---------------------------------------------------------------------------
# general factorization over F_q


def squarefree_decomposition(f: FqPoly) -> list[tuple[FqPoly, int]]:
    """[(g, m)] with f = prod g^m, each g square-free, m strictly increasing."""
    field = f.field
    p = field.p
    f = f.monic()
    out: dict[int, FqPoly] = {}

    def accumulate(g: FqPoly, mult: int):
        if g.degree > 0:
            prev = out.get(mult)
            out[mult] = g if prev is None else prev * g

    def recurse(f: FqPoly, scale: int):
        if f.degree <= 0:
            return
        deriv = f.derivative()
        if deriv.is_zero():
            # f is a p-th power: root the exponents, p-th-root the coefficients
            root_coeffs = []
            for i in range(0, f.degree + 1, p):
                c = f.coeffs[i]
                root_coeffs.append(field.pow(c, field.order // p))
            recurse(FqPoly(field, root_coeffs), scale * p)
            return
        c = f.gcd(deriv)
        w = (f // c).monic()
        mult = 1
        while not w.is_one():
            y = w.gcd(c)
            accumulate((w // y).monic(), mult * scale)
            w = y
            c = (c // y).monic()
            mult += 1
        if not c.is_one():
            recurse(c, scale)  # c is a p-th power; the root branch rescales

    recurse(f, 1)
    return sorted(((g.monic(), m) for m, g in out.items()), key=lambda t: t[1])


def _distinct_degree(f: FqPoly) -> list[tuple[FqPoly, int]]:
    """[(product of irreducible factors of degree d, d)] for square-free monic f."""
    field = f.field
    q = field.order
    out = []
    x = FqPoly.x_pow(field, 1)
    h = x
    rest = f
    d = 0
    while rest.degree > 0:
        d += 1
        if 2 * d > rest.degree:
            out.append((rest, rest.degree))
            break
        h = h.pow_mod(q, rest)
        g = rest.gcd(h - x)
        if g.degree > 0:
            out.append((g, d))
            rest = (rest // g).monic()
            h = h % rest
    return out


def _equal_degree_split(f: FqPoly, d: int, rng: random.Random) -> list[FqPoly]:
    """Split monic square-free f, all of whose factors have degree d."""
    field = f.field
    q = field.order
    if f.degree == d:
        return [f.monic()]
    while True:
        w = FqPoly(field, [field.random_element(rng) for _ in range(f.degree)])
        if w.degree < 1:
            continue
        if field.p == 2:
            # trace map splits in even characteristic
            t = w
            acc = w
            for _ in range(d * _log2_int(q) - 1):
                t = t.pow_mod(2, f)
                acc = (acc + t) % f
            g = f.gcd(acc)
        else:
            g = f.gcd(w.pow_mod((q**d - 1) // 2, f) - FqPoly.one(field))
        if 0 < g.degree < f.degree:
            left = g.monic()
            right = (f // g).monic()
            return _equal_degree_split(left, d, rng) + _equal_degree_split(right, d, rng)


def _log2_int(q: int) -> int:
    return q.bit_length() - 1


def factor_poly(f: FqPoly, seed: int = 0) -> list[tuple[FqPoly, int]]:
    """Full factorization of a monic polynomial into irreducibles.

    Deterministic for a given seed; factors sorted by (degree, coefficients).
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if not f.is_monic():
        raise ValueError("factor_poly expects a monic polynomial")
    rng = random.Random(f"factor:{seed}:{f.field.order}:{f.degree}")
    counts: dict[FqPoly, int] = {}
    for squarefree, mult in squarefree_decomposition(f):
        for block, d in _distinct_degree(squarefree):
            for irred in _equal_degree_split(block, d, rng):
                counts[irred] = counts.get(irred, 0) + mult
    return sorted(counts.items(), key=lambda t: t[0].key())


def mobius_q(f: FqPoly) -> int:
    """(-1)^r for a product of r distinct monic irreducibles, else 0."""
    if f.is_zero() or not f.is_monic():
        raise ValueError("mobius_q expects a monic nonzero polynomial")
    if f.is_one():
        return 1
    factors = factor_poly(f)
    if any(m > 1 for _, m in factors):
        return 0
    return -1 if len(factors) % 2 else 1


def phi_q(f: FqPoly) -> int:
    """Order of the unit group of F_q[x]/(f), computed exactly in integers."""
    if f.is_zero():
        raise ValueError("phi_q expects a nonzero polynomial")
    q = f.field.order
    result = 1
    for irred, m in factor_poly(f.monic()):
        dp = irred.degree
        result *= q ** ((m - 1) * dp) * (q**dp - 1)
    return result


# ---------------------------------------------------------------------------
# structure of x^n - 1 via q-cyclotomic cosets


@dataclass(frozen=True)
class XnFactorization:
    """Shape of x^n - 1 over F_q, from q-cyclotomic cosets mod n'.

    n = n' * p^i with gcd(n', p) = 1; every distinct irreducible factor has
    multiplicity p^i and degree equal to its coset size; d is the order of q
    mod n' (the maximal degree). rho = n0/n is the ratio of factors of
    degree strictly below d -- relative to n itself, so that
    n * rho(q, n) == n' * rho(q, n') holds across p-power multiples (for n
    coprime to p the denominator is n').
    """

    p: int
    k: int
    n: int
    n_prime: int
    p_power: int
    cosets: tuple[tuple[int, ...], ...]
    d: int
    n0: int
    rho: Fraction

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def distinct_count(self) -> int:
        return len(self.cosets)

    @property
    def w(self) -> int:
        """Number of square-free divisors of x^n - 1: 2^(distinct factors)."""
        return 1 << len(self.cosets)

    def degrees(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.cosets)

    def distinct_factors(self) -> tuple[FqPoly, ...]:
        """Explicit monic irreducible factors (each of multiplicity p_power)."""
        return xn_factor_polys(self.p, self.k, self.n_prime)


@lru_cache(maxsize=None)
def xn_structure(p: int, k: int, n: int) -> XnFactorization:
    """Coset-level factorization data for x^n - 1 over F_{p^k}."""
    if n < 1:
        raise ValueError("n must be positive")
    q = p**k
    n_prime = n
    p_power = 1
    while n_prime % p == 0:
        n_prime //= p
        p_power *= p
    seen = [False] * n_prime
    cosets = []
    for c in range(n_prime):
        if seen[c]:
            continue
        coset = []
        cur = c
        while not seen[cur]:
            seen[cur] = True
            coset.append(cur)
            cur = cur * q % n_prime
        cosets.append(tuple(sorted(coset)))
    cosets.sort(key=lambda cs: (len(cs), cs))
    d = max(len(cs) for cs in cosets)
    n0 = sum(1 for cs in cosets if len(cs) < d)
    return XnFactorization(
        p=p,
        k=k,
        n=n,
        n_prime=n_prime,
        p_power=p_power,
        cosets=tuple(cosets),
        d=d,
        n0=n0,
        rho=Fraction(n0, n),
    )


def factor_xn_minus_1(field: FieldDescriptor) -> XnFactorization:
    """Structure of x^n - 1 over the F_q of the given tower descriptor."""
    return xn_structure(field.p, field.k, field.n)


@lru_cache(maxsize=None)
def cyclotomic_factors_mod_q(p: int, k: int, t: int) -> tuple[FqPoly, ...]:
    """Irreducible factors over F_q of the t-th integer cyclotomic polynomial.

    Requires gcd(t, p) = 1; all factors share the degree ord_t(q), so the
    split goes straight to equal-degree Cantor-Zassenhaus.
    """
    if t % p == 0:
        raise ValueError("t must be coprime to p")
    field = coeff_field(p, k)
    q = p**k
    f = FqPoly.from_ints(field, _integer_cyclotomic(t))
    d_t = _order_mod(q, t)
    assert f.degree % d_t == 0
    rng = random.Random(f"cycfactor:{q}:{t}")
    factors = _equal_degree_split(f, d_t, rng)
    return tuple(sorted(factors, key=lambda g: g.key()))


@lru_cache(maxsize=None)
def xn_factor_polys(p: int, k: int, n_prime: int) -> tuple[FqPoly, ...]:
    """Distinct monic irreducible factors of x^{n'} - 1 over F_q, explicitly.

    x^{n'} - 1 is the product of the cyclotomic polynomials Phi_t for t | n';
    the factor degrees always agree with the coset picture, which is asserted.
    """
    if n_prime % p == 0:
        raise ValueError("n' must be coprime to p")
    factors: list[FqPoly] = []
    for t in range(1, n_prime + 1):
        if n_prime % t == 0:
            factors.extend(cyclotomic_factors_mod_q(p, k, t))
    structure = xn_structure(p, k, n_prime)
    assert sorted(f.degree for f in factors) == sorted(structure.degrees())
    return tuple(sorted(factors, key=lambda f: f.key()))


@lru_cache(maxsize=None)
def _integer_cyclotomic(t: int) -> tuple[int, ...]:
    """Coefficients of the t-th cyclotomic polynomial over the integers."""
    # divide x^t - 1 by the cyclotomic polynomials of the proper divisors
    poly = [-1] + [0] * (t - 1) + [1]
    for d in range(1, t):
        if t % d:
            continue
        phi_d = _integer_cyclotomic(d)
        quot = [0] * (len(poly) - len(phi_d) + 1)
        rem = list(poly)
        for i in range(len(quot) - 1, -1, -1):
            c = rem[i + len(phi_d) - 1]
            quot[i] = c
            if c:
                for j, y in enumerate(phi_d):
                    rem[i + j] -= c * y
        assert not any(rem), "exact division of cyclotomic parts"
        poly = quot
    return tuple(poly)


def _order_mod(q: int, t: int) -> int:
    if t == 1:
        return 1
    order = 1
    cur = q % t
    while cur != 1:
        cur = cur * q % t
        order += 1
    return order


def w_of_xn(p: int, k: int, n: int) -> int:
    return xn_structure(p, k, n).w


def w_of_divisor(g: FqPoly, n: int) -> int:
    """W(g) = 2^(distinct irreducible factors) for a divisor g of x^n - 1."""
    field = g.field
    if g.is_zero():
        raise ValueError("g must be nonzero")
    if g.degree == 0:
        return 1
    if not g.monic().divides(FqPoly.xn_minus_1(field, n)):
        raise ValueError(f"{g} does not divide x^{n} - 1")
    return 1 << len(factor_poly(g.monic()))


def rho_qn(p: int, k: int, n: int) -> tuple[Fraction, int]:
    """(rho, d): ratio of below-maximal-degree factors of x^{n'} - 1, and d."""
    s = xn_structure(p, k, n)
    return s.rho, s.d
