"""Integer factorization and square-free-divisor machinery.

Everything downstream leans on certified factorizations of the group orders
q^n - 1: the e-free tests, the W(.) counts in the criteria inequalities, and
the split of e-freeness into a norm part and a part coprime to q - 1.
p^e - 1 is factored through its cyclotomic parts so desk-scale runs never
hand a hundred-digit composite to Pollard rho.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from functools import lru_cache

# Deterministic Miller-Rabin: the first twelve primes certify primality for
# every n below this bound (Sorenson & Webster).
_MR_DETERMINISTIC_BOUND = 3317044064679887385961981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

DEFAULT_RHO_BUDGET = 10**7
DEFAULT_TRIAL_BOUND = 10**4


class BudgetExceededError(RuntimeError):
    """Raised when a factoring budget runs out; carries the partial result."""

    def __init__(self, message: str, partial: "Factorization"):
        super().__init__(message)
        self.partial = partial


def primes_up_to(limit: int) -> list[int]:
    """All primes <= limit, by a sieve of Eratosthenes.

    >>> primes_up_to(20)
    [2, 3, 5, 7, 11, 13, 17, 19]
    """
    if limit < 2:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return [i for i in range(2, limit + 1) if sieve[i]]


@lru_cache(maxsize=None)
def first_n_primes(count: int) -> tuple[int, ...]:
    """The first `count` primes (1-indexed callers use result[i-1])."""
    if count <= 0:
        return ()
    # overshoot the prime counting estimate, extend if it falls short
    limit = max(30, int(count * (math.log(count + 1) + math.log(math.log(count + 3)) + 2)))
    ps = primes_up_to(limit)
    while len(ps) < count:
        limit *= 2
        ps = primes_up_to(limit)
    return tuple(ps[:count])


def _miller_rabin(n: int, bases) -> bool:
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in bases:
        a %= n
        if a == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _strong_lucas_prp(n: int) -> bool:
    """Strong Lucas probable-prime test with Selfridge's parameter choice."""
    if n % 2 == 0:
        return n == 2
    if math.isqrt(n) ** 2 == n:
        return False
    # first D in 5, -7, 9, -11, ... with Jacobi(D, n) == -1
    d = 5
    while True:
        j = _jacobi(d % n, n)
        if j == -1:
            break
        if j == 0 and abs(d) != n:
            return False
        d = -(d + 2) if d > 0 else -(d - 2)
    p, q = 1, (1 - d) // 4
    s = n + 1
    r = 0
    while s % 2 == 0:
        s //= 2
        r += 1
    # Lucas sequence U_k, V_k, Q^k by binary ladder up to index s
    inv2 = pow(2, -1, n)
    u, v, qk = 1, p, q % n
    for bit in bin(s)[3:]:
        u, v, qk = u * v % n, (v * v - 2 * qk) % n, qk * qk % n
        if bit == "1":
            u, v = (p * u + v) * inv2 % n, (d * u + p * v) * inv2 % n
            qk = qk * q % n
    if u == 0 or v == 0:
        return True
    for _ in range(r - 1):
        v = (v * v - 2 * qk) % n
        if v == 0:
            return True
        qk = qk * qk % n
    return False


def _jacobi(a: int, n: int) -> int:
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    if n == 1:
        return result
    return 0


def prime_check(n: int) -> tuple[bool, bool]:
    """(is_prime, certified) for n >= 1.

    Below the twelve-base Miller-Rabin bound the verdict is deterministic.
    Above it the test is Miller-Rabin plus a strong Lucas check, and the
    second flag drops to False so reports can surface "probable".
    """
    if n < 2:
        return False, True
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p, True
    if n < _MR_DETERMINISTIC_BOUND:
        return _miller_rabin(n, _MR_BASES), True
    if not _miller_rabin(n, _MR_BASES):
        return False, True
    return _strong_lucas_prp(n), False


def is_prime(n: int) -> bool:
    return prime_check(n)[0]


def pollard_rho(n: int, seed: int = 0, budget: int = DEFAULT_RHO_BUDGET) -> int:
    """A nontrivial factor of composite n by Brent's cycle variant.

    Deterministic for a given seed. Raises BudgetExceededError (with an
    empty partial) when `budget` iterations are not enough.
    """
    if n % 2 == 0:
        return 2
    rng = random.Random(seed ^ (n & 0xFFFFFFFF))
    spent = 0
    while spent < budget:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g, r, q = 1, 1, 1
        x = ys = y
        while g == 1 and spent < budget:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                spent += min(m, r - k)
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            # backtrack one step at a time
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
        # cycle degenerated; retry with fresh parameters
    raise BudgetExceededError(
        f"pollard rho budget {budget} exhausted on {n}",
        Factorization(value=n, factors=(), complete=False, cofactor=n),
    )


@dataclass(frozen=True)
class Factorization:
    """A (possibly partial) prime factorization of a positive integer.

    factors lists (prime, multiplicity) with primes strictly increasing;
    cofactor is the unfactored remainder, so value == prod(p^m) * cofactor
    always holds and complete <=> cofactor == 1. probable names primes whose
    certification is probabilistic (never at desk scale; see prime_check).
    """

    value: int
    factors: tuple[tuple[int, int], ...]
    complete: bool = True
    cofactor: int = 1
    probable: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        assert self.value >= 1
        prod = self.cofactor
        last = 1
        for p, m in self.factors:
            assert p > last and m >= 1, "primes must increase, multiplicities >= 1"
            last = p
            prod *= p**m
        assert prod == self.value, "factors * cofactor must reproduce value"
        assert self.complete == (self.cofactor == 1)

    @property
    def omega(self) -> int:
        """Number of distinct prime divisors."""
        return len(self.factors)

    @property
    def w(self) -> int:
        """Number of square-free divisors, 2^omega."""
        return 1 << len(self.factors)

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def radical(self) -> int:
        return math.prod(self.primes())

    def phi(self) -> int:
        """Euler totient (requires completeness)."""
        self.require_complete()
        result = self.value
        for p, _ in self.factors:
            result = result // p * (p - 1)
        return result

    def divisors(self, limit: int = 1 << 20) -> list[int]:
        """All divisors, ascending. Guarded against blowup by `limit`."""
        self.require_complete()
        divs = [1]
        for p, m in self.factors:
            divs = [d * p**i for d in divs for i in range(m + 1)]
            if len(divs) > limit:
                raise ValueError(f"divisor count exceeds {limit}")
        return sorted(divs)

    def require_complete(self):
        if not self.complete:
            raise ValueError(f"incomplete factorization of {self.value}")

    def restricted(self, keep) -> "Factorization":
        """Sub-factorization keeping only primes for which keep(p) is true."""
        kept = tuple((p, m) for p, m in self.factors if keep(p))
        return Factorization(
            value=math.prod(p**m for p, m in kept),
            factors=kept,
            probable=frozenset(p for p in self.probable if keep(p)),
        )

    def to_json(self) -> dict:
        out = {
            "value": str(self.value),
            "factors": [[p if p < 2**53 else str(p), m] for p, m in self.factors],
            "complete": self.complete,
        }
        if self.cofactor != 1:
            out["cofactor"] = str(self.cofactor)
        if self.probable:
            out["probable"] = [str(p) for p in sorted(self.probable)]
        return out

    @staticmethod
    def from_json(data) -> "Factorization":
        if isinstance(data, str):
            data = json.loads(data)
        return Factorization(
            value=int(data["value"]),
            factors=tuple((int(p), int(m)) for p, m in data["factors"]),
            complete=bool(data["complete"]),
            cofactor=int(data.get("cofactor", 1)),
            probable=frozenset(int(p) for p in data.get("probable", [])),
        )

    def __str__(self):
        if not self.factors:
            body = "1"
        else:
            body = "·".join(
                f"{p}^{m}" if m > 1 else str(p) for p, m in self.factors
            )
        if self.cofactor != 1:
            body += f"·[{self.cofactor}]"
        return body


def _merge_counts(counts: dict, p: int, m: int):
    counts[p] = counts.get(p, 0) + m


def factor(
    n: int,
    effort: str = "full",
    *,
    trial_bound: int = DEFAULT_TRIAL_BOUND,
    budget: int = DEFAULT_RHO_BUDGET,
    seed: int = 0,
) -> Factorization:
    """Factor n >= 1.

    effort="full": trial division then Pollard rho, every prime certified;
    raises BudgetExceededError (carrying the partial factorization) rather
    than silently returning an incomplete result.
    effort="trial": trial division only; the result is complete exactly when
    the remaining cofactor is 1 or itself certified prime.

    >>> str(factor(728))
    '2^3·7·13'
    """
    if n < 1:
        raise ValueError("factor requires n >= 1")
    if effort not in ("trial", "full"):
        raise ValueError(f"unknown effort {effort!r}")
    counts: dict[int, int] = {}
    probable = set()
    rest = n
    for p in primes_up_to(trial_bound):
        if p * p > rest:
            break
        while rest % p == 0:
            _merge_counts(counts, p, 1)
            rest //= p
    if rest > 1:
        ok, certified = prime_check(rest)
        if ok:
            _merge_counts(counts, rest, 1)
            if not certified:
                probable.add(rest)
            rest = 1
    if rest > 1 and effort == "full":
        stack = [rest]
        rest = 1
        while stack:
            m = stack.pop()
            ok, certified = prime_check(m)
            if ok:
                _merge_counts(counts, m, 1)
                if not certified:
                    probable.add(m)
                continue
            root = math.isqrt(m)
            if root * root == m:
                stack.extend((root, root))
                continue
            try:
                d = pollard_rho(m, seed=seed, budget=budget)
            except BudgetExceededError:
                rest = m * math.prod(stack)
                break
            stack.extend((d, m // d))
    factors = tuple(sorted(counts.items()))
    result = Factorization(
        value=n,
        factors=factors,
        complete=(rest == 1),
        cofactor=rest,
        probable=frozenset(probable),
    )
    if effort == "full" and rest != 1:
        raise BudgetExceededError(f"budget exhausted factoring {n}", result)
    return result


@lru_cache(maxsize=None)
def mobius(n: int) -> int:
    """Moebius function of n >= 1 (trial division; meant for small n)."""
    if n == 1:
        return 1
    result = 1
    for p in primes_up_to(math.isqrt(n) + 1):
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        if n == 1:
            break
    if n > 1:
        result = -result
    return result


def cyclotomic_value(d: int, x: int) -> int:
    """The d-th cyclotomic polynomial evaluated at x, exactly.

    Uses the Moebius product over divisors of d; every division is exact.

    >>> cyclotomic_value(12, 3)
    73
    """
    if d < 1 or x < 2:
        raise ValueError("need d >= 1 and x >= 2")
    num = 1
    den = 1
    for t in range(1, d + 1):
        if d % t:
            continue
        mu = mobius(t)
        if mu == 1:
            num *= x ** (d // t) - 1
        elif mu == -1:
            den *= x ** (d // t) - 1
    assert num % den == 0
    return num // den


@lru_cache(maxsize=None)
def factor_pn_minus_1(
    p: int,
    e: int,
    effort: str = "full",
    budget: int = DEFAULT_RHO_BUDGET,
    seed: int = 0,
) -> Factorization:
    """Factor p^e - 1 through its cyclotomic parts.

    Each Phi_d(p) for d | e is factored independently, so the largest number
    ever handed to Pollard rho has roughly phi(d)*log(p) bits. A budget
    failure names the offending d.
    """
    counts: dict[int, int] = {}
    probable = set()
    for d in range(1, e + 1):
        if e % d:
            continue
        part = cyclotomic_value(d, p)
        try:
            f = factor(part, effort=effort, budget=budget, seed=seed)
        except BudgetExceededError as exc:
            partial = Factorization(
                value=p**e - 1,
                factors=tuple(sorted(counts.items())),
                complete=False,
                cofactor=(p**e - 1) // math.prod(q**m for q, m in counts.items()),
            )
            raise BudgetExceededError(
                f"budget exhausted on cyclotomic part d={d} of {p}^{e}-1", partial
            ) from exc
        if not f.complete:
            return Factorization(
                value=p**e - 1,
                factors=tuple(sorted(counts.items())),
                complete=False,
                cofactor=(p**e - 1)
                // math.prod(q**m for q, m in counts.items()),
                probable=frozenset(probable),
            )
        for q, m in f.factors:
            _merge_counts(counts, q, m)
        probable |= f.probable
    return Factorization(
        value=p**e - 1,
        factors=tuple(sorted(counts.items())),
        probable=frozenset(probable),
    )


def small_prime_divisors(p: int, k: int, n: int, bound: int) -> list[int]:
    """Primes l <= bound (l != p) dividing p^(k*n) - 1.

    Decided by whether the order of p mod l divides k*n, i.e. whether
    p^(k*n) == 1 (mod l); no large factorization is involved.
    """
    if bound < 2:
        raise ValueError("bound must be >= 2")
    e = k * n
    return [ell for ell in primes_up_to(bound) if ell != p and pow(p, e, ell) == 1]


def omega_and_w(f: Factorization) -> tuple[int, int]:
    """(number of distinct primes, number of square-free divisors)."""
    f.require_complete()
    return f.omega, f.w


@dataclass(frozen=True)
class LehmerBoundParams:
    """Parameters of the bound W(r) < c_value * r^(1/nu).

    c_value = 2^u / (p_1 ... p_u)^(1/nu) over the qualifying primes <= 2^nu
    that divide the target; with no primes the constant is 1.
    """

    nu: float
    u: int
    c_value: float
    divisors: tuple[int, ...] = ()
    worst_case: bool = False


def lehmer_c(nu: float, divisors) -> LehmerBoundParams:
    """Exact-divisor constant for the square-free-count bound.

    `divisors` must be exactly the primes <= 2^nu dividing the target r.
    Guarantees W(r) <= c_value * r^(1/nu); equality occurs exactly when r is
    square-free with every prime factor <= 2^nu, and the bound is strict
    otherwise.
    """
    if nu <= 0:
        raise ValueError("nu must be positive")
    ps = tuple(sorted(divisors))
    cap = 2.0**nu
    for ell in ps:
        if ell > cap:
            raise ValueError(f"divisor {ell} exceeds 2^nu = {cap}")
    if not ps:
        return LehmerBoundParams(nu=nu, u=0, c_value=1.0)
    log_c = len(ps) * math.log(2) - sum(math.log(p) for p in ps) / nu
    return LehmerBoundParams(nu=nu, u=len(ps), c_value=math.exp(log_c), divisors=ps)


def lehmer_c_worst_case(nu: float) -> LehmerBoundParams:
    """Worst-case constant using every prime <= 2^nu."""
    ps = primes_up_to(int(2.0**nu))
    params = lehmer_c(nu, ps)
    return LehmerBoundParams(
        nu=nu, u=params.u, c_value=params.c_value, divisors=params.divisors,
        worst_case=True,
    )


def compute_L(e: Factorization, q: int) -> Factorization:
    """Largest divisor of e coprime to gcd(e, q - 1).

    Strips every prime of the gcd entirely (all multiplicities); this is the
    defining maximality property, not the closed form (q^n-1)/((q-1) gcd(n,q-1)),
    which disagrees with it -- see l_closed_form_diagnostic.
    """
    e.require_complete()
    if q < 2:
        raise ValueError("q must be >= 2")
    delta = math.gcd(e.value, q - 1)
    return e.restricted(lambda p: delta % p != 0)


def l_closed_form_diagnostic(p: int, k: int, n: int) -> dict:
    """Compare the definition of L_{q^n-1} with the closed form.

    Returns both values and whether they agree; for example q = 3, n = 6 the
    closed form gives 182 (even, yet gcd with q-1 = 2 should be 1) while the
    definition gives 91.
    """
    q = p**k
    nfact = factor_pn_minus_1(p, k * n)
    by_definition = compute_L(nfact, q).value
    closed = (q**n - 1) // ((q - 1) * math.gcd(n, q - 1))
    return {
        "q": q,
        "n": n,
        "L_by_definition": by_definition,
        "L_closed_form": closed,
        "agree": by_definition == closed,
    }
