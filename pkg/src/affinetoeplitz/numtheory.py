"""Integer, supernatural and zeta arithmetic shared by every other module.

All integer arithmetic is exact (Python integers).  Real values are IEEE
doubles; series are accumulated with `math.fsum`, so the only error that
matters is the stated truncation error, which every routine bounds
explicitly.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from math import gcd, inf, isqrt
from typing import Iterable, Iterator

__all__ = [
    "Factorization",
    "SupernaturalNumber",
    "ResidueClass",
    "TruncatedAdele",
    "NABLA",
    "factorize",
    "is_prime",
    "primes_upto",
    "first_primes",
    "divisors",
    "smooth_numbers",
    "sn_divides",
    "sn_gcd",
    "sn_lcm",
    "int_divides_sn",
    "crt_split",
    "crt_combine",
    "times_a_embed",
    "zeta",
    "zeta_e",
]


# --------------------------------------------------------------------------
# primes and factorizations
# --------------------------------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all 64-bit inputs."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_upto(n: int) -> list[int]:
    """All primes <= n by sieve."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = b"\x00" * len(sieve[p * p :: p])
    return [i for i, v in enumerate(sieve) if v]


def first_primes(k: int) -> list[int]:
    """The first k primes."""
    if k <= 0:
        return []
    bound = max(16, int(k * (math.log(k + 1) + math.log(math.log(k + 3)) + 2)))
    ps = primes_upto(bound)
    while len(ps) < k:
        bound *= 2
        ps = primes_upto(bound)
    return ps[:k]


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as an ordered tuple of (prime, exponent) pairs.

    The empty tuple represents 1.
    """

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        last = 1
        for p, e in self.factors:
            if p <= last or not is_prime(p):
                raise ValueError(f"factors must list primes in increasing order, got {p}")
            if e < 1:
                raise ValueError(f"exponent for {p} must be >= 1, got {e}")
            last = p

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    @property
    def n(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.factors)


def factorize(n: int) -> Factorization:
    """Factor a positive integer by trial division."""
    if n < 1:
        raise ValueError(f"factorize requires n >= 1, got {n}")
    out: list[tuple[int, int]] = []
    for p in (2, 3):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                out.append((p, e))
        f += 6
    if n > 1:
        out.append((n, 1))
    return Factorization(tuple(out))


def divisors(n: int) -> list[int]:
    """Sorted positive divisors of n >= 1."""
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return sorted(ds)


def iter_smooth(primes: Iterable[int]) -> Iterator[int]:
    """Positive integers with all prime factors in `primes`, in increasing order."""
    ps = sorted(set(primes))
    heap = [1]
    seen = {1}
    while heap:
        n = heapq.heappop(heap)
        yield n
        for p in ps:
            m = n * p
            if m not in seen:
                seen.add(m)
                heapq.heappush(heap, m)


def smooth_numbers(primes: Iterable[int], *, count: int | None = None, limit: int | None = None) -> list[int]:
    """The first `count` smooth numbers over `primes`, or all of them <= `limit`."""
    if count is None and limit is None:
        raise ValueError("specify count or limit")
    out: list[int] = []
    for n in iter_smooth(primes):
        if limit is not None and n > limit:
            break
        out.append(n)
        if count is not None and len(out) >= count:
            break
    return out


# --------------------------------------------------------------------------
# supernatural numbers
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SupernaturalNumber:
    """Formal product prod_p p^{e_p} with exponents in N union {inf}.

    `listed` holds the finitely many primes whose exponent differs from
    `default`; `default` is 0 (finitely supported values) or inf (cofinite
    values such as the largest element, which has every exponent infinite).
    """

    listed: tuple[tuple[int, int | float], ...] = ()
    default: int | float = 0

    def __post_init__(self) -> None:
        if self.default not in (0, inf):
            raise ValueError("default exponent must be 0 or inf")
        last = 1
        for p, e in self.listed:
            if p <= last or not is_prime(p):
                raise ValueError(f"listed primes must increase, got {p}")
            if e == self.default:
                raise ValueError(f"exponent at {p} equals the default; not canonical")
            if e != inf and (not isinstance(e, int) or e < 0):
                raise ValueError(f"exponent at {p} must be a natural number or inf")
            last = p

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_int(cls, n: int) -> "SupernaturalNumber":
        return cls(tuple(factorize(n)), 0)

    @classmethod
    def nabla(cls) -> "SupernaturalNumber":
        """The largest supernatural number (every exponent infinite)."""
        return cls((), inf)

    @classmethod
    def from_exponents(cls, exps: dict[int, int | float], default: int | float = 0) -> "SupernaturalNumber":
        listed = tuple(sorted((p, e) for p, e in exps.items() if e != default))
        return cls(listed, default)

    # -- queries -----------------------------------------------------------

    def exponent(self, p: int) -> int | float:
        for q, e in self.listed:
            if q == p:
                return e
        return self.default

    @property
    def is_finite(self) -> bool:
        return self.default == 0 and all(e != inf for _, e in self.listed)

    def to_int(self) -> int:
        if not self.is_finite:
            raise ValueError("supernatural number is infinite")
        out = 1
        for p, e in self.listed:
            out *= p ** int(e)
        return out

    def finite_divisors_upto(self, bound: int) -> list[int]:
        """All positive integers a <= bound with a | self."""
        return [a for a in range(1, bound + 1) if int_divides_sn(a, self)]

    def __str__(self) -> str:
        if self.default == inf and not self.listed:
            return "nabla"
        parts = []
        for p, e in self.listed:
            parts.append(f"{p}^inf" if e == inf else (f"{p}^{e}" if e > 1 else f"{p}"))
        if self.default == inf:
            parts.append("(rest)^inf")
        return "*".join(parts) if parts else "1"

    # -- JSON --------------------------------------------------------------

    def to_json(self) -> dict:
        factors = {str(p): ("inf" if e == inf else e) for p, e in self.listed}
        return {"factors": factors, "default": "inf" if self.default == inf else 0}

    @classmethod
    def from_json(cls, obj: dict) -> "SupernaturalNumber":
        default = inf if obj.get("default") == "inf" else 0
        exps: dict[int, int | float] = {}
        for key, val in obj.get("factors", {}).items():
            exps[int(key)] = inf if val == "inf" else int(val)
        return cls.from_exponents(exps, default)


NABLA = SupernaturalNumber.nabla()


def _exp_pairs(m: SupernaturalNumber, n: SupernaturalNumber) -> Iterator[tuple[int, int | float, int | float]]:
    primes = sorted({p for p, _ in m.listed} | {p for p, _ in n.listed})
    for p in primes:
        yield p, m.exponent(p), n.exponent(p)


def sn_divides(m: SupernaturalNumber, n: SupernaturalNumber) -> bool:
    """Pointwise exponent comparison e_p(m) <= e_p(n)."""
    if m.default > n.default:
        return False
    return all(em <= en for _, em, en in _exp_pairs(m, n))


def sn_gcd(m: SupernaturalNumber, n: SupernaturalNumber) -> SupernaturalNumber:
    exps = {p: min(em, en) for p, em, en in _exp_pairs(m, n)}
    return SupernaturalNumber.from_exponents(exps, min(m.default, n.default))


def sn_lcm(m: SupernaturalNumber, n: SupernaturalNumber) -> SupernaturalNumber:
    exps = {p: max(em, en) for p, em, en in _exp_pairs(m, n)}
    return SupernaturalNumber.from_exponents(exps, max(m.default, n.default))


def int_divides_sn(a: int, n: SupernaturalNumber) -> bool:
    """Whether the positive integer a divides the supernatural number n."""
    if a < 1:
        raise ValueError("a must be positive")
    if a == 1:
        return True
    return all(e <= n.exponent(p) for p, e in factorize(a))


# --------------------------------------------------------------------------
# residues, truncated adeles, CRT
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ResidueClass:
    """A residue value in Z/modulus."""

    modulus: int
    value: int

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        if not 0 <= self.value < self.modulus:
            raise ValueError(f"value {self.value} outside [0, {self.modulus})")

    def reduce(self, modulus: int) -> "ResidueClass":
        """Project to Z/modulus; requires modulus | self.modulus."""
        if self.modulus % modulus != 0:
            raise ValueError(f"{modulus} does not divide {self.modulus}")
        return ResidueClass(modulus, self.value % modulus)

    def __str__(self) -> str:
        return f"{self.value} mod {self.modulus}"


@dataclass(frozen=True)
class TruncatedAdele:
    """A finite-level truncation of an N-adic integer: a residue at a declared level."""

    level: int
    residue: ResidueClass

    def __post_init__(self) -> None:
        if self.residue.modulus != self.level:
            raise ValueError("residue modulus must equal the level")

    @classmethod
    def of(cls, value: int, level: int) -> "TruncatedAdele":
        return cls(level, ResidueClass(level, value % level))

    @property
    def value(self) -> int:
        return self.residue.value


def times_a_embed(n: ResidueClass, a: int) -> ResidueClass:
    """The injection Z/b -> Z/ab induced by multiplication by a.

    The image is exactly the classes divisible by a, and reducing the result
    mod b' recovers the multiplication-by-a semantics of the short exact
    sequence 0 -> Z/b -> Z/ab -> Z/a -> 0.
    """
    if a < 1:
        raise ValueError("a must be positive")
    return ResidueClass(a * n.modulus, a * n.value)


def crt_split(r: TruncatedAdele) -> list[TruncatedAdele]:
    """Reduce a residue mod N to its prime-power components."""
    return [TruncatedAdele.of(r.value, p**e) for p, e in factorize(r.level)]


def crt_combine(parts: Iterable[TruncatedAdele]) -> TruncatedAdele:
    """Inverse of `crt_split`: assemble a residue from pairwise coprime levels."""
    parts = list(parts)
    if not parts:
        return TruncatedAdele.of(0, 1)
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            if gcd(parts[i].level, parts[j].level) != 1:
                raise ValueError(
                    f"moduli {parts[i].level} and {parts[j].level} are not coprime"
                )
    modulus = 1
    for part in parts:
        modulus *= part.level
    value = 0
    for part in parts:
        other = modulus // part.level
        value = (value + part.value * other * pow(other, -1, part.level)) % modulus
    return TruncatedAdele.of(value, modulus)


# --------------------------------------------------------------------------
# zeta values
# --------------------------------------------------------------------------


def zeta(s: float, tol: float = 1e-12) -> float:
    """Riemann zeta for s > 1 within absolute error `tol`.

    Direct series plus an integral tail correction; two Euler-Maclaurin
    correction terms keep the cutoff small near s = 1.  The remainder after
    the B_2 term is bounded by the first omitted term
    s(s+1)(s+2)/720 * N^(-s-3), which fixes the cutoff N.
    """
    if s == inf:
        return 1.0
    if s <= 1:
        raise ValueError(f"zeta series requires s > 1, got {s}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    c = s * (s + 1) * (s + 2) / 720.0
    n = max(16, math.ceil((c / (0.5 * tol)) ** (1.0 / (s + 3))))
    head = math.fsum(k**-s for k in range(1, n))
    tail = n ** (1 - s) / (s - 1) + 0.5 * n**-s + (s / 12.0) * n ** (-s - 1)
    return head + tail


def zeta_e(s: float, primes: Iterable[int]) -> float:
    """Euler product prod_{p in E} (1 - p^-s)^-1 over a finite prime set.

    Converges for every s > 0 because the product is finite.
    """
    if s != inf and s <= 0:
        raise ValueError(f"zeta_e requires s > 0, got {s}")
    ps = sorted(set(primes))
    for p in ps:
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
    if s == inf:
        return 1.0
    out = 1.0
    for p in ps:
        out *= 1.0 / (1.0 - p ** (-s))
    return out
