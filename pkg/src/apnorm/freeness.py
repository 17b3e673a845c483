"""Freeness predicates, characters, and the exact counting functions.

The multiplicative side: alpha is e-free when no divisor d > 1 of e exhibits
alpha as a d-th power; primitivity is (q^n - 1)-freeness. The additive side
mirrors it through the F_q[x]-module structure given by the q-power map:
the F_q-order of alpha is the minimal divisor h of x^n - 1 annihilating it,
g-freeness asks that h misses no factor of g, and normality is
(x^n - 1)-freeness. Both sides have complex-valued characteristic functions
built from characters; those are evaluated literally here so the closed
forms can be checked against the boolean predicates.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from . import intfact
from .fqpoly import FqPoly, factor_poly, phi_q, xn_factor_polys, xn_structure
from .gf import FieldDescriptor, FieldElement


# ---------------------------------------------------------------------------
# F_q[x]-module machinery


def _xn_context(field: FieldDescriptor):
    """(x^n - 1, distinct factors, multiplicity) over the canonical F_q."""
    cached = getattr(field, "_xn_context", None)
    if cached is None:
        structure = xn_structure(field.p, field.k, field.n)
        factors = xn_factor_polys(field.p, field.k, structure.n_prime)
        K = field.canonical_subfield
        xn = FqPoly.xn_minus_1(K, field.n)
        cached = (xn, factors, structure.p_power)
        field._xn_context = cached
    return cached


def conjugates(alpha: FieldElement) -> list[FieldElement]:
    """alpha, alpha^q, ..., alpha^(q^(n-1))."""
    field = alpha.field
    out = [alpha]
    for _ in range(field.n - 1):
        out.append(out[-1].frobenius())
    return out


def apply_poly(h: FqPoly, alpha: FieldElement, conj=None) -> FieldElement:
    """h acting on alpha: sum of h_i * alpha^(q^i)."""
    field = alpha.field
    conj = conj or conjugates(alpha)
    acc = field.zero
    for i, c in enumerate(h.coeffs):
        if not c.is_zero():
            acc = acc + field.embed_subfield(c) * conj[i % field.n]
    return acc


def fq_order(alpha: FieldElement) -> FqPoly:
    """Minimal monic divisor h of x^n - 1 with h acting on alpha as zero.

    fq_order(0) = 1; alpha is normal exactly when the result is x^n - 1.
    """
    field = alpha.field
    xn, factors, mult = _xn_context(field)
    conj = conjugates(alpha)
    h = xn
    for irred in factors:
        for _ in range(mult):
            cand = h // irred
            if apply_poly(cand, alpha, conj).is_zero():
                h = cand
            else:
                break
    return h


def is_normal(alpha: FieldElement) -> bool:
    """Conjugates form an F_q-basis, i.e. the F_q-order is all of x^n - 1."""
    if alpha.is_zero():
        return False
    field = alpha.field
    xn, factors, _ = _xn_context(field)
    conj = conjugates(alpha)
    return all(
        not apply_poly(xn // irred, alpha, conj).is_zero() for irred in factors
    )


def is_g_free(alpha: FieldElement, g: FqPoly) -> bool:
    """gcd(g, (x^n - 1) / fq_order(alpha)) = 1."""
    field = alpha.field
    xn, _, _ = _xn_context(field)
    if g.is_zero() or not g.monic().divides(xn):
        raise ValueError(f"{g} does not divide x^{field.n} - 1")
    cofactor = xn // fq_order(alpha)
    return g.monic().gcd(cofactor).is_one()


def is_e_free(alpha: FieldElement, e: intfact.Factorization) -> bool:
    """No prime of e divides (q^n - 1) / ord(alpha); zero is never e-free."""
    field = alpha.field
    if (field.order - 1) % e.value:
        raise ValueError(f"e = {e.value} does not divide q^n - 1")
    if alpha.is_zero():
        return False
    top = field.order - 1
    return all(
        field.pow(alpha, top // ell) != field.one for ell in e.primes()
    )


def norm_split_e_free(alpha: FieldElement, e: intfact.Factorization) -> bool:
    """The split form of e-freeness: the part of e coprime to q - 1 is
    tested on alpha itself, the rest on its norm down in F_q.

    Contract: equal to is_e_free(alpha, e) for every nonzero alpha.
    """
    field = alpha.field
    if alpha.is_zero():
        return False
    q = field.q
    delta = math.gcd(e.value, q - 1)
    L = intfact.compute_L(e, q)
    if not is_e_free(alpha, L):
        return False
    z = field.project_subfield(field.norm(alpha))
    K = field.canonical_subfield
    for ell in intfact.factor(delta).primes():
        if K.pow(z, (q - 1) // ell) == K.one:
            return False
    return True


# ---------------------------------------------------------------------------
# characters


@dataclass(frozen=True)
class CharacterSpec:
    """A character of F_{q^n}: multiplicative chi_t or additive lambda_y.

    Multiplicative: alpha -> exp(2 pi i t dlog(alpha) / (q^n - 1)), zero at 0.
    Additive: alpha -> exp(2 pi i AbsTr(y alpha) / p).
    """

    kind: str  # "multiplicative" | "additive"
    t: int = 0
    y: FieldElement | None = None

    def order(self, field: FieldDescriptor) -> int:
        if self.kind == "multiplicative":
            n = field.order - 1
            return n // math.gcd(self.t, n)
        raise ValueError("order() only for multiplicative specs")


def _abs_trace_vector(field: FieldDescriptor) -> tuple[int, ...]:
    cached = getattr(field, "_abs_trace_vec", None)
    if cached is None:
        vec = []
        for i in range(field.deg):
            z = field.element((0,) * i + (1,))
            acc = z
            for _ in range(field.deg - 1):
                z = field.pow(z, field.p)
                acc = acc + z
            assert not any(acc.coords[1:]), "absolute trace lies in F_p"
            vec.append(acc.coords[0])
        cached = tuple(vec)
        field._abs_trace_vec = cached
    return cached


def abs_trace(alpha: FieldElement) -> int:
    """Trace all the way down to F_p, as an integer in [0, p)."""
    vec = _abs_trace_vector(alpha.field)
    return sum(v * c for v, c in zip(vec, alpha.coords)) % alpha.field.p


def char_eval(spec: CharacterSpec, alpha: FieldElement) -> complex:
    field = alpha.field
    if spec.kind == "multiplicative":
        if alpha.is_zero():
            return 0j
        n = field.order - 1
        return cmath.exp(2j * cmath.pi * ((spec.t * field.dlog(alpha)) % n) / n)
    if spec.kind == "additive":
        t = abs_trace(spec.y * alpha)
        return cmath.exp(2j * cmath.pi * t / field.p)
    raise ValueError(f"unknown character kind {spec.kind!r}")


def multiplicative_chars_of_order(field: FieldDescriptor, d: int):
    """All multiplicative characters of exact order d | q^n - 1."""
    n = field.order - 1
    if n % d:
        raise ValueError(f"{d} does not divide q^n - 1")
    step = n // d
    return [
        CharacterSpec(kind="multiplicative", t=step * u)
        for u in range(1, d + 1)
        if math.gcd(u, d) == 1
    ]


def _adjoint_apply(h: FqPoly, y: FieldElement, conj) -> FieldElement:
    # lambda_y composed with the action of h is lambda at this element
    field = y.field
    acc = field.zero
    for i, c in enumerate(h.coeffs):
        if not c.is_zero():
            acc = acc + field.embed_subfield(c) * conj[(field.n - i) % field.n]
    return acc


def additive_order(y: FieldElement) -> FqPoly:
    """F_q-order of the additive character lambda_y."""
    field = y.field
    xn, factors, mult = _xn_context(field)
    conj = conjugates(y)
    h = xn
    for irred in factors:
        for _ in range(mult):
            cand = h // irred
            if _adjoint_apply(cand, y, conj).is_zero():
                h = cand
            else:
                break
    return h


def _additive_order_groups(field: FieldDescriptor) -> dict:
    """All y grouped by the F_q-order of lambda_y (table-scale fields only)."""
    cached = getattr(field, "_additive_groups", None)
    if cached is None:
        groups: dict = {}
        for key in range(field.order):
            y = field.from_key(key)
            h = additive_order(y)
            groups.setdefault(h, []).append(y)
        for h, ys in groups.items():
            assert len(ys) == phi_q(h), "character count per order"
        cached = groups
        field._additive_groups = cached
    return cached


def additive_chars_of_order(field: FieldDescriptor, h: FqPoly):
    groups = _additive_order_groups(field)
    return [CharacterSpec(kind="additive", y=y) for y in groups.get(h, [])]


# ---------------------------------------------------------------------------
# characteristic functions, evaluated literally


def indicator_e_free(alpha: FieldElement, e: intfact.Factorization) -> complex:
    """The character-sum form of the e-free indicator."""
    field = alpha.field
    e.require_complete()
    if (field.order - 1) % e.value:
        raise ValueError("e must divide q^n - 1")
    total = 0j
    for d in e.divisors():
        mu = intfact.mobius(d)
        if mu == 0:
            continue
        phi_d = intfact.factor(d).phi()
        inner = sum(
            char_eval(chi, alpha) for chi in multiplicative_chars_of_order(field, d)
        )
        total += mu / phi_d * inner
    return e.phi() / e.value * total


def indicator_g_free(alpha: FieldElement, g: FqPoly) -> complex:
    """The character-sum form of the g-free indicator."""
    field = alpha.field
    xn, _, _ = _xn_context(field)
    g = g.monic() if not g.is_zero() else g
    if g.is_zero() or not g.divides(xn):
        raise ValueError(f"{g} does not divide x^{field.n} - 1")
    total = 0j
    for h, r in _squarefree_divisors(g):
        mu = -1 if r % 2 else 1
        inner = sum(
            char_eval(lam, alpha) for lam in additive_chars_of_order(field, h)
        )
        total += mu / phi_q(h) * inner
    return phi_q(g) / field.q**g.degree * total


def _squarefree_divisors(g: FqPoly):
    """(h, number of irreducible parts) for each square-free divisor h of g."""
    parts = [irred for irred, _ in factor_poly(g)]
    out = []
    for mask in range(1 << len(parts)):
        h = FqPoly.one(g.field)
        r = 0
        for i, irred in enumerate(parts):
            if mask >> i & 1:
                h = h * irred
                r += 1
        out.append((h, r))
    return out


def indicator_norm(alpha: FieldElement, c: FieldElement) -> complex:
    """The character-sum form of the indicator of N(alpha) = c, c in F_q^*."""
    field = alpha.field
    K = field.canonical_subfield
    if c.is_zero():
        raise ValueError("norm target must be nonzero")
    if alpha.is_zero():
        return 0j
    q = field.q
    w = field.project_subfield(field.norm(alpha)) * c.inverse()
    j = K.dlog(w)
    return sum(
        cmath.exp(2j * cmath.pi * ((i * j) % (q - 1)) / (q - 1))
        for i in range(1, q)
    ) / (q - 1)


# ---------------------------------------------------------------------------
# complete character sums and their degree bounds


def weil_sum_check(
    field: FieldDescriptor,
    f_parts: list[tuple[FqPoly, int]],
    chi: CharacterSpec,
    lam: CharacterSpec | None = None,
    g_poly: FqPoly | None = None,
    tol: float = 1e-6,
):
    """Complete sum of chi(f(alpha)) [times lam(g(alpha))] and its bound.

    f is given factored as distinct monic irreducibles with nonzero integer
    exponents. Hypotheses are checked syntactically: chi nontrivial and f not
    a d-th power for the pure multiplicative sum; lam nontrivial and g a
    nonconstant polynomial for the mixed sum. Returns (sum, bound, ok).
    """
    if chi.kind != "multiplicative":
        raise ValueError("chi must be multiplicative")
    d = chi.order(field)
    polys = [fp for fp, _ in f_parts]
    if len({fp.key() for fp in polys}) != len(polys):
        raise ValueError("f parts must be distinct")
    for fp, a in f_parts:
        if a == 0:
            raise ValueError("zero exponent in f")
        if not fp.is_monic() or len(factor_poly(fp)) != 1:
            raise ValueError("f parts must be monic irreducible")
    if lam is None:
        if d == 1:
            raise ValueError("chi must be nontrivial")
        if all(a % d == 0 for _, a in f_parts):
            raise ValueError("f is a d-th power: bound hypothesis fails")
    else:
        if lam.kind != "additive" or lam.y is None or lam.y.is_zero():
            raise ValueError("lam must be a nontrivial additive character")
        if g_poly is None or g_poly.degree < 1:
            raise ValueError("g must be a nonconstant polynomial")
    total = 0j
    for alpha in field.all_elements():
        value = field.one
        order_zero = 0
        for fp, a in f_parts:
            v = fp.eval(alpha)
            if v.is_zero():
                order_zero = a
                break
            value = value * field.pow(v, a % (field.order - 1))
        if order_zero > 0:
            continue  # chi(0) = 0
        if order_zero < 0:
            continue  # pole of f: term excluded
        term = char_eval(chi, value) if d > 1 else (1 + 0j)
        if lam is not None:
            term *= char_eval(lam, g_poly.eval(alpha))
        total += term
    d1 = sum(fp.degree for fp, _ in f_parts)
    if lam is None:
        bound = (d1 - 1) * math.sqrt(field.order)
    else:
        d2 = max(g_poly.degree, 0)
        bound = (d1 + d2 - 1) * math.sqrt(field.order)
    return total, bound, abs(total) <= bound + tol


# ---------------------------------------------------------------------------
# the counting functions


@dataclass(frozen=True)
class PsiQuery:
    """Count of alpha making the m-term progression freeness-constrained.

    e_list gives the multiplicative freeness demanded of each progression
    element, c_list the prescribed norms (nonzero, in the canonical F_q),
    g the additive freeness; j = None means "some progression element is
    g-free", a concrete j pins which one.
    """

    e_list: tuple
    g: FqPoly
    c_list: tuple
    beta: FieldElement
    j: int | None = None


def count_psi(query: PsiQuery, field: FieldDescriptor) -> int:
    m = len(query.e_list)
    if m < 1 or len(query.c_list) != m:
        raise ValueError("need m >= 1 with matching norm targets")
    if query.beta.is_zero():
        raise ValueError("beta must be nonzero")
    if any(c.is_zero() for c in query.c_list):
        raise ValueError("norm targets must be nonzero")
    if query.j is not None and not 1 <= query.j <= m:
        raise ValueError("j out of range")
    from .gf import memory_cap

    if field.order > memory_cap():
        raise MemoryError("field too large for exhaustive counting")
    targets = [field.embed_subfield(c) for c in query.c_list]
    beta = query.beta
    count = 0
    for alpha in field.all_elements():
        elems = [alpha]
        for _ in range(m - 1):
            elems.append(elems[-1] + beta)
        if any(z.is_zero() for z in elems):
            continue
        if not all(is_e_free(z, e) for z, e in zip(elems, query.e_list)):
            continue
        if not all(field.norm(z) == t for z, t in zip(elems, targets)):
            continue
        if query.j is None:
            if not any(is_g_free(z, query.g) for z in elems):
                continue
        else:
            if not is_g_free(elems[query.j - 1], query.g):
                continue
        count += 1
    return count
