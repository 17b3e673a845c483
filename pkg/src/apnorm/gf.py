"""Arithmetic in F_p, F_q = F_{p^k} and F_{q^n}.

One polynomial-basis representation of degree k*n over the prime field
carries the whole tower: the intermediate field F_q lives inside it as the
fixed points of the k-fold p-power map, with an explicitly stored embedding
of a canonical copy of F_q. Elements are coordinate tuples over F_p;
multiplication packs coordinates into integer lanes so a product is a single
big-int multiply plus one reduction fold.

Moduli are chosen by a deterministic lexicographic scan, so coordinates,
packed keys and every table derived from them are reproducible across
machines and runs.
"""

from __future__ import annotations

import math
import os
import random
from functools import lru_cache

from . import intfact

DEFAULT_ELEMENT_CAP = 3**16


def memory_cap() -> int:
    """Element-count cap for table construction (APNORM_MEM_CAP overrides)."""
    return int(os.environ.get("APNORM_MEM_CAP", DEFAULT_ELEMENT_CAP))


# ---------------------------------------------------------------------------
# dense polynomial helpers over F_p (coefficient lists, lowest degree first)


def _trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _poly_sub(a, b, p):
    width = max(len(a), len(b))
    a = list(a) + [0] * (width - len(a))
    b = list(b) + [0] * (width - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _poly_divmod(a, b, p):
    a = list(a)
    db, da = len(b) - 1, len(a) - 1
    if db < 0:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], -1, p)
    q = [0] * max(0, da - db + 1)
    while len(a) - 1 >= db and a:
        d = len(a) - 1 - db
        c = a[-1] * inv_lead % p
        q[d] = c
        for i, y in enumerate(b):
            a[d + i] = (a[d + i] - c * y) % p
        _trim(a)
    return _trim(q), a


def _poly_powmod(base, e, mod, p):
    result = [1]
    base = _poly_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _poly_divmod(_poly_mul(result, base, p), mod, p)[1]
        base = _poly_divmod(_poly_mul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def _poly_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _poly_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _is_irreducible(coeffs, p):
    """Rabin test for a monic polynomial given as a full coefficient list."""
    deg = len(coeffs) - 1
    if deg == 1:
        return True
    x = [0, 1]
    xq = _poly_powmod(x, p**deg, coeffs, p)
    if _poly_sub(xq, x, p) != []:
        return False
    for r in {f for f, _ in intfact.factor(deg).factors}:
        h = _poly_powmod(x, p ** (deg // r), coeffs, p)
        if _poly_gcd(_poly_sub(h, x, p), list(coeffs), p) != [1]:
            return False
    return True


@lru_cache(maxsize=None)
def find_irreducible(p: int, deg: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of given degree over F_p.

    Candidates are ordered by the packed value of their low coefficients, so
    the choice is deterministic. Returned as a full coefficient tuple
    (length deg+1, leading 1).
    """
    if deg == 1:
        return (0, 1)  # the polynomial x; F_p[x]/(x) is F_p itself
    for value in range(p**deg):
        if value % p == 0:
            continue  # constant term 0 means divisible by x
        coeffs = []
        v = value
        for _ in range(deg):
            coeffs.append(v % p)
            v //= p
        coeffs.append(1)
        if _is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise RuntimeError("no irreducible polynomial found (impossible)")


# ---------------------------------------------------------------------------


class FieldElement:
    """An element of F_{q^n}, stored as a coordinate tuple over F_p."""

    __slots__ = ("field", "coords")

    def __init__(self, field: "FieldDescriptor", coords: tuple[int, ...]):
        self.field = field
        self.coords = coords

    def key(self) -> int:
        """Coordinates packed little-endian base p into one integer."""
        key = 0
        for c in reversed(self.coords):
            key = key * self.field.p + c
        return key

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other):
        f = self.field
        return FieldElement(
            f, tuple((a + b) % f.p for a, b in zip(self.coords, other.coords))
        )

    def __sub__(self, other):
        f = self.field
        return FieldElement(
            f, tuple((a - b) % f.p for a, b in zip(self.coords, other.coords))
        )

    def __neg__(self):
        f = self.field
        return FieldElement(f, tuple((-a) % f.p for a in self.coords))

    def __mul__(self, other):
        f = self.field
        return FieldElement(f, f.mul_coords(self.coords, other.coords))

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, e: int):
        return self.field.pow(self, e)

    def inverse(self):
        return self.field.inverse(self)

    def frobenius(self, i: int = 1):
        """The q-power Frobenius applied i times: alpha -> alpha^(q^i)."""
        return self.field.frobenius(self, i)

    def norm(self):
        return self.field.norm(self)

    def trace(self):
        return self.field.trace(self)

    def mult_order(self) -> int:
        return self.field.mult_order(self)

    def is_primitive(self) -> bool:
        return self.field.is_primitive(self)

    def is_normal(self) -> bool:
        from . import freeness  # deferred: freeness builds on this module

        return freeness.is_normal(self)

    def __eq__(self, other):
        return (
            isinstance(other, FieldElement)
            and self.field is other.field
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((id(self.field), self.coords))

    def __repr__(self):
        return f"FieldElement({list(self.coords)}, GF({self.field.p}^{self.field.deg}))"


class FieldDescriptor:
    """F_{q^n} over F_q = F_{p^k}, with modulus, embedding and lazy tables.

    Use build_field() rather than the constructor; descriptors are cached by
    (p, k, n, seed) and carry lazily built state (order factorization,
    generator, Frobenius matrices, discrete-log tables).
    """

    def __init__(self, p: int, k: int, n: int, seed: int = 0):
        if not intfact.is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if k < 1 or n < 1:
            raise ValueError("k and n must be positive")
        self.p = p
        self.k = k
        self.n = n
        self.seed = seed
        self.deg = k * n
        self.q = p**k
        self.order = p**self.deg  # number of field elements
        self.modulus = find_irreducible(p, self.deg)
        self._init_mul_tables()
        self.zero = FieldElement(self, (0,) * self.deg)
        self.one = FieldElement(self, (1,) + (0,) * (self.deg - 1))
        self._init_subfield()
        self._order_fact = None
        self._generator = None
        self._frob_q_cols = None  # columns of the q-power matrix
        self._dlog = None
        self._exp_keys = None

    # -- multiplication ----------------------------------------------------

    def _init_mul_tables(self):
        p, deg = self.p, self.deg
        lane_need = ((2 * deg - 1) * (p - 1) ** 2 + deg * (p - 1)).bit_length() + 1
        self._lane = 16 if lane_need <= 16 else 32
        lane = self._lane
        self._lane_mask = (1 << lane) - 1
        self._low_mask = (1 << (lane * deg)) - 1
        # x^(deg+t) mod modulus, packed, for folding high convolution lanes
        red = []
        cur = [(-c) % p for c in self.modulus[:-1]]  # x^deg mod f
        for _ in range(deg - 1):
            red.append(self._pack(cur))
            cur = [0] + cur
            top = cur.pop()
            if top:
                cur = [(a - top * b) % p for a, b in zip(cur, self.modulus[:-1])]
        self._red_packed = red

    def _pack(self, coords) -> int:
        v = 0
        for c in reversed(coords):
            v = (v << self._lane) | c
        return v

    def mul_coords(self, a, b) -> tuple[int, ...]:
        p, deg, lane = self.p, self.deg, self._lane
        prod = self._pack(a) * self._pack(b)
        acc = prod & self._low_mask
        prod >>= lane * deg
        t = 0
        mask = self._lane_mask
        while prod:
            c = (prod & mask) % p
            if c:
                acc += c * self._red_packed[t]
            prod >>= lane
            t += 1
        return tuple(((acc >> (lane * i)) & mask) % p for i in range(deg))

    def element(self, coords) -> FieldElement:
        coords = tuple(c % self.p for c in coords)
        if len(coords) != self.deg:
            coords = coords + (0,) * (self.deg - len(coords))
        return FieldElement(self, coords)

    def from_key(self, key: int) -> FieldElement:
        coords = []
        for _ in range(self.deg):
            coords.append(key % self.p)
            key //= self.p
        if key:
            raise ValueError("key out of range")
        return FieldElement(self, tuple(coords))

    def from_int(self, c: int) -> FieldElement:
        """The prime-field constant c as a field element."""
        return self.element((c % self.p,) + (0,) * (self.deg - 1))

    def all_elements(self):
        for key in range(self.order):
            yield self.from_key(key)

    def random_element(self, rng: random.Random) -> FieldElement:
        return self.from_key(rng.randrange(self.order))

    def inverse(self, a: FieldElement) -> FieldElement:
        if a.is_zero():
            raise ZeroDivisionError("inversion of zero")
        p = self.p
        # extended Euclid over F_p[x]
        r0, r1 = list(self.modulus), _trim(list(a.coords))
        t0, t1 = [], [1]
        while r1:
            q, rem = _poly_divmod(r0, r1, p)
            r0, r1 = r1, rem
            t_next = _poly_sub(t0, _poly_mul(q, t1, p), p)
            t0, t1 = t1, t_next
        inv_lead = pow(r0[-1], -1, p)
        return self.element(tuple(c * inv_lead % p for c in t0))

    def pow(self, a: FieldElement, e: int) -> FieldElement:
        if e < 0:
            return self.pow(a.inverse(), -e)
        if a.is_zero():
            return self.zero if e else self.one
        e %= self.order - 1
        if e == 0:
            return self.one
        result = None
        base = a.coords
        while e:
            if e & 1:
                result = base if result is None else self.mul_coords(result, base)
            e >>= 1
            if e:
                base = self.mul_coords(base, base)
        return FieldElement(self, result)

    # -- subfield F_q ------------------------------------------------------

    def _frobenius_p_cols(self):
        """Columns of the p-power map (an F_p-linear map on coordinates)."""
        cols = []
        for j in range(self.deg):
            xj = [0] * j + [1]
            img = _poly_powmod(xj, self.p, list(self.modulus), self.p)
            cols.append(tuple(img + [0] * (self.deg - len(img))))
        return cols

    @staticmethod
    def _apply_cols(cols, coords, p):
        out = [0] * len(coords)
        for j, c in enumerate(coords):
            if c:
                col = cols[j]
                for i in range(len(coords)):
                    if col[i]:
                        out[i] = (out[i] + c * col[i]) % p
        return tuple(out)

    def _init_subfield(self):
        p, k = self.p, self.k
        self.subfield_modulus = find_irreducible(p, k)
        if k == 1:
            self.subfield_gen = self.one
            return
        if p**k > 6561:
            raise ValueError("subfield embedding supported only for q <= 6561")
        # kernel of (Frob_p^k - I): the copy of F_q inside this field
        cols = self._frobenius_p_cols()
        powk = cols
        for _ in range(k - 1):
            powk = [self._apply_cols(cols, col, p) for col in powk]
        rows = [
            [
                (powk[j][i] - (1 if i == j else 0)) % p
                for j in range(self.deg)
            ]
            for i in range(self.deg)
        ]
        basis = _nullspace(rows, p)
        assert len(basis) == k, "fixed field of Frob^k must have dimension k"
        # root of the canonical degree-k modulus inside that copy, smallest key
        root = None
        for combo in range(1, p**k):
            coeffs = []
            v = combo
            for _ in range(k):
                coeffs.append(v % p)
                v //= p
            cand = [0] * self.deg
            for c, vec in zip(coeffs, basis):
                for i in range(self.deg):
                    cand[i] = (cand[i] + c * vec[i]) % p
            z = FieldElement(self, tuple(cand))
            if self._eval_subfield_modulus(z).is_zero():
                if root is None or z.key() < root.key():
                    root = z
        assert root is not None, "canonical subfield modulus must split here"
        self.subfield_gen = root

    def _eval_subfield_modulus(self, z: FieldElement) -> FieldElement:
        acc = self.zero
        power = self.one
        for c in self.subfield_modulus:
            if c:
                acc = acc + power * self.from_int(c)
            power = power * z
        return acc

    @property
    def canonical_subfield(self) -> "FieldDescriptor":
        """The standalone copy of F_q these coordinates embed."""
        return build_field(self.p, 1, self.k)

    def subfield_basis(self):
        basis = [self.one]
        for _ in range(self.k - 1):
            basis.append(basis[-1] * self.subfield_gen)
        return basis

    def embed_subfield(self, c: FieldElement) -> FieldElement:
        """Map an element of the canonical F_q into this field."""
        assert c.field is self.canonical_subfield
        acc = self.zero
        for coeff, b in zip(c.coords, self.subfield_basis()):
            if coeff:
                acc = acc + b * self.from_int(coeff)
        return acc

    def project_subfield(self, z: FieldElement) -> FieldElement:
        """Inverse of embed_subfield; fails if z is outside the F_q copy."""
        if self.k == 1:
            if any(z.coords[1:]):
                raise ValueError("element not in the prime subfield")
            return self.canonical_subfield.element((z.coords[0],))
        cols = [b.coords for b in self.subfield_basis()]
        sol = _solve(cols, z.coords, self.p)
        if sol is None:
            raise ValueError("element not in the embedded subfield")
        return self.canonical_subfield.element(tuple(sol))

    def in_subfield(self, z: FieldElement) -> bool:
        return self.pow(z, self.q) == z

    def subfield_elements(self):
        """All q elements of the embedded copy of F_q."""
        for c in self.canonical_subfield.all_elements():
            yield self.embed_subfield(c)

    # -- Frobenius, norm, trace ---------------------------------------------

    def _frob_q_columns(self):
        if self._frob_q_cols is None:
            cols = []
            for j in range(self.deg):
                xj = [0] * j + [1]
                img = _poly_powmod(xj, self.q, list(self.modulus), self.p)
                cols.append(tuple(img + [0] * (self.deg - len(img))))
            self._frob_q_cols = cols
        return self._frob_q_cols

    def frobenius(self, a: FieldElement, i: int = 1) -> FieldElement:
        coords = a.coords
        for _ in range(i % self.n):
            coords = self._apply_cols(self._frob_q_columns(), coords, self.p)
        return FieldElement(self, coords)

    def norm(self, a: FieldElement) -> FieldElement:
        """N_{q^n/q}(a) = a^((q^n-1)/(q-1)), computed by one power."""
        if a.is_zero():
            return self.zero
        result = self.pow(a, (self.order - 1) // (self.q - 1))
        assert self.in_subfield(result)
        return result

    def trace(self, a: FieldElement) -> FieldElement:
        acc = a
        conj = a
        for _ in range(self.n - 1):
            conj = self.frobenius(conj)
            acc = acc + conj
        assert self.in_subfield(acc)
        return acc

    # -- multiplicative structure -------------------------------------------

    @property
    def order_factorization(self) -> intfact.Factorization:
        if self._order_fact is None:
            self._order_fact = intfact.factor_pn_minus_1(self.p, self.deg)
        return self._order_fact

    def mult_order(self, a: FieldElement) -> int:
        if a.is_zero():
            raise ZeroDivisionError("order of zero is undefined")
        o = self.order - 1
        for ell, _ in self.order_factorization.factors:
            while o % ell == 0 and self.pow(a, o // ell) == self.one:
                o //= ell
        return o

    def is_primitive(self, a: FieldElement) -> bool:
        if a.is_zero():
            return False
        top = self.order - 1
        return all(
            self.pow(a, top // ell) != self.one
            for ell, _ in self.order_factorization.factors
        )

    @property
    def generator(self) -> FieldElement:
        """A primitive element, found by a seeded random search."""
        if self._generator is None:
            rng = random.Random(f"generator:{self.p}:{self.deg}:{self.seed}")
            while True:
                cand = self.from_key(rng.randrange(2, self.order))
                if self.is_primitive(cand):
                    self._generator = cand
                    break
        return self._generator

    # -- exp/dlog tables ----------------------------------------------------

    def ensure_exp_tables(self):
        """Discrete-log and exponent tables from one multiplicative pass."""
        if self._dlog is None:
            import numpy as np

            if self.order > memory_cap():
                raise MemoryError(
                    f"field order {self.order} exceeds table cap {memory_cap()}"
                )
            dlog = np.full(self.order, -1, dtype=np.int64)
            exp_keys = np.zeros(self.order - 1, dtype=np.int64)
            g = self.generator
            cur = self.one
            for j in range(self.order - 1):
                key = cur.key()
                exp_keys[j] = key
                dlog[key] = j
                cur = cur * g
            assert cur == self.one
            self._dlog = dlog
            self._exp_keys = exp_keys
        return self._dlog, self._exp_keys

    def dlog(self, a: FieldElement) -> int:
        if a.is_zero():
            raise ZeroDivisionError("dlog of zero")
        table, _ = self.ensure_exp_tables()
        return int(table[a.key()])

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "k": self.k,
            "n": self.n,
            "modulus": list(self.modulus),
            "generator": list(self.generator.coords),
            "seed": self.seed,
        }

    def __repr__(self):
        return f"FieldDescriptor(p={self.p}, k={self.k}, n={self.n})"


def _nullspace(rows, p):
    """Basis of the right nullspace of a matrix over F_p (row lists)."""
    m = [list(r) for r in rows]
    ncols = len(m[0]) if m else 0
    pivots = {}
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots[c] = r
        r += 1
    basis = []
    free = [c for c in range(ncols) if c not in pivots]
    for fc in free:
        vec = [0] * ncols
        vec[fc] = 1
        for c, row in pivots.items():
            vec[c] = (-m[row][fc]) % p
        basis.append(tuple(vec))
    return basis


def _solve(cols, target, p):
    """Solve sum_j x_j * cols[j] = target over F_p; None if inconsistent."""
    nrows = len(target)
    ncols = len(cols)
    aug = [[cols[j][i] for j in range(ncols)] + [target[i]] for i in range(nrows)]
    r = 0
    pivots = []
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if aug[i][c]), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = pow(aug[r][c], -1, p)
        aug[r] = [x * inv % p for x in aug[r]]
        for i in range(nrows):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(x - f * y) % p for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    for i in range(r, nrows):
        if aug[i][-1]:
            return None
    sol = [0] * ncols
    for row, c in enumerate(pivots):
        sol[c] = aug[row][-1]
    return sol


@lru_cache(maxsize=None)
def _build_field_cached(p: int, k: int, n: int, seed: int) -> FieldDescriptor:
    return FieldDescriptor(p, k, n, seed)


def build_field(p: int, k: int, n: int, seed: int = 0) -> FieldDescriptor:
    """Construct (and cache) the descriptor for F_{p^k}^n / F_{p^k} / F_p."""
    return _build_field_cached(p, k, n, seed)
