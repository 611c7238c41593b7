"""Exact elementary arithmetic: Kronecker symbols, multiplicative functions,
factorization, and imaginary quadratic discriminants split into a fundamental
part and a conductor.

Everything here is plain integer arithmetic; no floats anywhere.
"""

from dataclasses import dataclass
from math import gcd

TRIAL_LIMIT = 10**12
FACTOR_LIMIT = 10**24


class ValidationError(ValueError):
    """Raised when an input violates a documented precondition."""


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), fully extended: n of either sign, with the
    usual supplementary rules at 2, -1 and 0."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    if n % 2 == 0:
        if a % 2 == 0:
            return 0
        t = (n & -n).bit_length() - 1  # ord_2(n)
        n >>= t
        if t % 2 == 1 and a % 8 in (3, 5):
            result = -result
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _pollard_rho(n: int) -> int:
    # Floyd cycle with deterministic constant sweep; n odd composite.
    for c in range(1, 100):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = gcd(abs(x - y), n)
        if d != n:
            return d
    raise ValidationError(f"failed to factor {n}")


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    # this base set is a deterministic Miller-Rabin witness set for n < 3.3e24
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of ``n`` >= 1 as {prime: exponent}.

    Trial division handles the bulk; Pollard rho takes over for large
    semiprime cofactors (inputs past 10^24 are rejected outright).
    """
    if n < 1:
        raise ValidationError(f"factorize expects n >= 1, got {n}")
    if n > FACTOR_LIMIT:
        raise ValidationError(f"n = {n} exceeds the factorization guard {FACTOR_LIMIT}")
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while p * p <= n and p * p <= TRIAL_LIMIT:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += wheel[i]
        i = (i + 1) % 8
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if m < p * p or _is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return out


def divisors_from_factorization(fac: dict[int, int]) -> list[int]:
    divs = [1]
    for p, e in fac.items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def euler_phi(n: int) -> int:
    """Euler totient."""
    if n < 1:
        raise ValidationError(f"phi expects n >= 1, got {n}")
    result = n
    for p in factorize(n):
        result = result // p * (p - 1)
    return result


def psi(n: int) -> int:
    """Degree of X0(n) -> X(1): multiplicative with psi(l^a) = l^(a-1)(l+1)."""
    if n < 1:
        raise ValidationError(f"psi expects n >= 1, got {n}")
    result = 1
    for p, e in factorize(n).items():
        result *= p ** (e - 1) * (p + 1)
    return result


def _squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(n).values())


def is_fundamental(d: int) -> bool:
    """True iff ``d`` is a fundamental imaginary quadratic discriminant."""
    if d >= 0:
        return False
    if d % 4 == 1:
        return _squarefree(-d)
    if d % 4 == 0:
        m = d // 4
        return (-m) % 4 in (1, 2) and _squarefree(-m)
    return False


@dataclass(frozen=True)
class OrderDisc:
    """An imaginary quadratic discriminant split as delta = f^2 * delta_K."""

    delta: int
    delta_K: int
    f: int

    def __post_init__(self):
        if self.delta >= 0 or self.delta % 4 not in (0, 1):
            raise ValidationError(f"invalid discriminant {self.delta}")
        if self.f <= 0 or self.f * self.f * self.delta_K != self.delta:
            raise ValidationError(
                f"conductor mismatch: {self.f}^2 * {self.delta_K} != {self.delta}"
            )
        if not is_fundamental(self.delta_K):
            raise ValidationError(f"{self.delta_K} is not fundamental")

    @classmethod
    def from_parts(cls, delta_K: int, f: int) -> "OrderDisc":
        return cls(f * f * delta_K, delta_K, f)

    def ell_valuation(self, ell: int) -> int:
        """ord_ell of the conductor."""
        v, f = 0, self.f
        while f % ell == 0:
            v += 1
            f //= ell
        return v

    def prime_to_ell_conductor(self, ell: int) -> int:
        f = self.f
        while f % ell == 0:
            f //= ell
        return f


def split_discriminant(delta: int) -> OrderDisc:
    """Split ``delta`` into (delta_K, f) with delta_K fundamental."""
    if delta >= 0 or delta % 4 not in (0, 1):
        raise ValidationError(f"invalid discriminant {delta}")
    f = 1
    for p, e in factorize(-delta).items():
        f *= p ** (e // 2)
    d0 = delta // (f * f)
    # |d0| is squarefree; if d0 = 2, 3 mod 4 the fundamental part is 4*d0
    if d0 % 4 != 1:
        d0 *= 4
        f //= 2
    return OrderDisc(delta, d0, f)
