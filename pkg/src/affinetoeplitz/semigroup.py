"""The quasi-lattice ordered pair: affine maps over Q and the monoid over N.

Group elements (r, x) act on numbers by t -> r + x*t, so the product is
(r, x)(s, y) = (r + x*s, x*y).  The monoid of elements with r in N and
x in N^x induces a left-invariant order on the group, and any two elements
with a common upper bound have a least one; computing it reduces to finding
the smallest non-negative solution of k = alpha*c - beta*d for coprime c, d,
which `euclid_smallest` does by the alternating subtraction scheme (with a
direct modular formula alongside as an independent check).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

__all__ = [
    "SemigroupElement",
    "GroupElement",
    "Join",
    "group_mul",
    "group_inv",
    "leq",
    "euclid_smallest",
    "euclid_smallest_direct",
    "join",
]


@dataclass(frozen=True)
class SemigroupElement:
    """(m, a) with m a natural number and a a positive integer."""

    m: int
    a: int

    def __post_init__(self) -> None:
        if self.m < 0:
            raise ValueError(f"additive part must be >= 0, got {self.m}")
        if self.a < 1:
            raise ValueError(f"multiplicative part must be >= 1, got {self.a}")

    def __mul__(self, other: "SemigroupElement") -> "SemigroupElement":
        return SemigroupElement(self.m + self.a * other.m, self.a * other.a)

    def to_group(self) -> "GroupElement":
        return GroupElement(Fraction(self.m), Fraction(self.a))

    @classmethod
    def identity(cls) -> "SemigroupElement":
        return cls(0, 1)


@dataclass(frozen=True)
class GroupElement:
    """(r, x) with r rational and x a positive rational."""

    r: Fraction
    x: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", Fraction(self.r))
        object.__setattr__(self, "x", Fraction(self.x))
        if self.x <= 0:
            raise ValueError(f"multiplicative part must be positive, got {self.x}")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.r + self.x * other.r, self.x * other.x)

    def inverse(self) -> "GroupElement":
        return GroupElement(-self.r / self.x, 1 / self.x)

    @classmethod
    def identity(cls) -> "GroupElement":
        return cls(Fraction(0), Fraction(1))


def group_mul(g: GroupElement, h: GroupElement) -> GroupElement:
    return g * h


def group_inv(g: GroupElement) -> GroupElement:
    return g.inverse()


def _as_group(g: GroupElement | SemigroupElement) -> GroupElement:
    return g.to_group() if isinstance(g, SemigroupElement) else g


def leq(g: GroupElement | SemigroupElement, h: GroupElement | SemigroupElement) -> bool:
    """Left-invariant order: g <= h iff g^-1 h lies in the monoid.

    Equivalently x^-1 (s - r) is a natural number and x^-1 y a positive
    integer, for g = (r, x), h = (s, y).
    """
    g, h = _as_group(g), _as_group(h)
    step = (h.r - g.r) / g.x
    scale = h.x / g.x
    return step.denominator == 1 and step >= 0 and scale.denominator == 1


def _euclid_iterative(c: int, d: int, k: int) -> tuple[int, int]:
    """Alternating subtraction scheme for k >= 0, gcd(c, d) = 1.

    alpha_0 is the unique natural with -c < k - alpha_0*c <= 0; then beta_n
    lifts the running value into [0, d) and alpha_{n+1} drops it back into
    (-c, 0], until both corrections vanish.  The sums of the alpha_i and
    beta_i give the smallest non-negative solution of k = alpha*c - beta*d.
    """
    alpha = -((-k) // c)  # ceil(k / c)
    beta = 0
    t = k - alpha * c
    while True:
        beta_n = -(t // d)  # ceil(-t / d)
        t += beta_n * d
        alpha_n = -((-t) // c)
        t -= alpha_n * c
        if beta_n == 0 and alpha_n == 0:
            return alpha, beta
        alpha += alpha_n
        beta += beta_n


def euclid_smallest(c: int, d: int, k: int) -> tuple[int, int]:
    """Smallest non-negative (alpha, beta) with k = alpha*c - beta*d.

    For k >= 0 alpha is minimal (and beta comes along); for k < 0 the roles
    swap: (beta, alpha) is the smallest non-negative solution of
    -k = beta*d - alpha*c.  Requires gcd(c, d) = 1.
    """
    if c < 1 or d < 1:
        raise ValueError("c and d must be positive")
    if gcd(c, d) != 1:
        raise ValueError(f"gcd({c}, {d}) != 1")
    if k >= 0:
        return _euclid_iterative(c, d, k)
    beta, alpha = _euclid_iterative(d, c, -k)
    return alpha, beta


def euclid_smallest_direct(c: int, d: int, k: int) -> tuple[int, int]:
    """Modular-inverse route to the same smallest solution (cross-check path)."""
    if c < 1 or d < 1:
        raise ValueError("c and d must be positive")
    if gcd(c, d) != 1:
        raise ValueError(f"gcd({c}, {d}) != 1")
    if k >= 0:
        alpha = (k % d) * pow(c % d, -1, d) % d if d > 1 else 0
        if alpha * c < k:
            deficit = k - alpha * c
            alpha += d * (-(-deficit // (c * d)))
        return alpha, (alpha * c - k) // d
    beta = ((-k) % c) * pow(d % c, -1, c) % c if c > 1 else 0
    if beta * d < -k:
        deficit = -k - beta * d
        beta += c * (-(-deficit // (d * c)))
    return (k + beta * d) // c, beta


@dataclass(frozen=True)
class Join:
    """Least common upper bound (l, lcm) of (m, a) and (n, b), with the
    complement data a^-1 * (join) = (alpha, b_prime), b^-1 * (join) = (beta, a_prime)."""

    l: int
    lcm: int
    alpha: int
    beta: int
    a_prime: int
    b_prime: int

    def element(self) -> SemigroupElement:
        return SemigroupElement(self.l, self.lcm)


def join(p: SemigroupElement, q: SemigroupElement) -> Join | None:
    """Least upper bound of p and q, or None when they have no common upper bound.

    (m, a) and (n, b) have an upper bound iff the progressions m + aN and
    n + bN meet, i.e. gcd(a, b) | m - n; the join is then (l, lcm(a, b))
    where l = m + a*alpha = n + b*beta is the least common value.
    """
    m, a, n, b = p.m, p.a, q.m, q.a
    g = gcd(a, b)
    if (m - n) % g != 0:
        return None
    a1, b1 = a // g, b // g
    alpha, beta = euclid_smallest(a1, b1, (n - m) // g)
    l = m + a * alpha
    assert l == n + b * beta
    return Join(l=l, lcm=a * b // g, alpha=alpha, beta=beta, a_prime=a1, b_prime=b1)
