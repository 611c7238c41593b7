"""Binary quadratic forms: reduction, censuses, Gaussian composition.

The class-number oracle counts reduced primitive forms directly (kernel
backed); the ambiguous-form count gives the 2-torsion order of the form
class group, which is also the per-level count of conjugation-fixed
vertices in the isogeny graph.
"""

from functools import lru_cache
from math import gcd, isqrt

from . import _kernel
from .arith import ValidationError, divisors_from_factorization, factorize

DISC_CAP = 10**7  # census guard; O(|delta|) enumeration beyond this is refused


def _check_disc(delta: int) -> None:
    if delta >= 0 or delta % 4 not in (0, 1):
        raise ValidationError(f"not an imaginary quadratic discriminant: {delta}")


def reduced_forms(delta: int) -> list[tuple[int, int, int]]:
    """All reduced primitive forms (a, b, c) of discriminant ``delta``."""
    _check_disc(delta)
    if -delta > DISC_CAP:
        raise ValidationError(f"|delta| exceeds census cap {DISC_CAP}")
    out = []
    n = -delta
    for a in range(1, isqrt(n // 3) + 1):
        four_a = 4 * a
        b = -a + 1
        if (b - delta) % 2 != 0:
            b += 1
        while b <= a:
            num = b * b + n
            if num % four_a == 0:
                c = num // four_a
                if c >= a and gcd(gcd(a, abs(b)), c) == 1 and not (a == c and b < 0):
                    out.append((a, b, c))
            b += 2
    return out


@lru_cache(maxsize=None)
def class_number(delta: int) -> int:
    """h(delta) by exhaustive reduced-form enumeration."""
    _check_disc(delta)
    if -delta > DISC_CAP:
        raise ValidationError(f"|delta| exceeds census cap {DISC_CAP}")
    return _kernel.form_census(delta)[0]


@lru_cache(maxsize=None)
def two_torsion_count(delta: int) -> int:
    """Order of Pic(O(delta))[2] = number of ambiguous reduced forms."""
    _check_disc(delta)
    if -delta <= DISC_CAP:
        return _kernel.form_census(delta)[1]
    return _two_torsion_large(delta)


def _two_torsion_large(delta: int) -> int:
    # Ambiguous reduced forms found through the divisors of delta, so this
    # only needs a factorization, not an O(|delta|) sweep.
    n = -delta
    fac = factorize(n)
    count = 0
    if delta % 4 == 0:
        m = n // 4
        for a in divisors_from_factorization(factorize(m)):
            c = m // a
            if a > c:
                break
            if gcd(a, c) == 1:
                count += 1
    for a in divisors_from_factorization(fac):  # forms (a, a, c)
        if 3 * a * a > n:
            break
        if (a * a + n) % (4 * a) == 0:
            c = (a * a + n) // (4 * a)
            if c >= a and gcd(a, c) == 1:
                count += 1
    for d1 in divisors_from_factorization(fac):  # forms (a, b, a), 0 < b < a
        d2 = n // d1
        if d1 >= d2:
            break
        if (d1 + d2) % 4 == 0 and (d2 - d1) % 2 == 0:
            a = (d1 + d2) // 4
            b = (d2 - d1) // 2
            if 0 < b < a and gcd(a, b) == 1:
                count += 1
    return count


def reduce_form(form: tuple[int, int, int]) -> tuple[int, int, int]:
    """Gauss reduction of a positive definite form."""
    a, b, c = form
    while True:
        if -a < b <= a <= c:
            if a == c and b < 0:
                b = -b
            return (a, b, c)
        if c < a or (c == a and b < 0):
            a, b, c = c, -b, a
        else:
            r = (a - b) // (2 * a)
            b, c = b + 2 * r * a, a * r * r + b * r + c


def principal_form(delta: int) -> tuple[int, int, int]:
    _check_disc(delta)
    b = delta % 2
    return (1, b, (b * b - delta) // 4)


def inverse_form(form: tuple[int, int, int]) -> tuple[int, int, int]:
    a, b, c = form
    return reduce_form((a, -b, c))


def _represent_coprime_to(form, bound_val):
    # Find a primitive (x, y) whose represented value is coprime to bound_val.
    a, b, c = form
    for r in range(1, 40):
        for x in range(-r, r + 1):
            for y in range(-r, r + 1):
                if gcd(x, y) != 1:
                    continue
                v = a * x * x + b * x * y + c * y * y
                if v != 0 and gcd(v, bound_val) == 1:
                    return x, y
    raise ValidationError("no coprime representation found")


def _transform_to_leading(form, x, y):
    # Change of basis sending (x, y) to the leading coefficient slot.
    a, b, c = form
    g, u, v = _ext_gcd(x, y)
    assert g == 1
    # matrix [[x, -v], [y, u]] has det 1
    a2 = a * x * x + b * x * y + c * y * y
    b2 = 2 * a * x * (-v) + b * (x * u - v * y) + 2 * c * y * u
    c2 = a * v * v - b * v * u + c * u * u
    return (a2, b2, c2)


def _ext_gcd(x, y):
    if y == 0:
        return (abs(x), 1 if x >= 0 else -1, 0)
    g, u, v = _ext_gcd(y, x % y)
    return (g, v, u - (x // y) * v)


def compose(f1, f2, delta: int) -> tuple[int, int, int]:
    """Gaussian composition of primitive forms of discriminant ``delta``."""
    a1, b1, _ = f1
    if gcd(a1, f2[0]) != 1:
        x, y = _represent_coprime_to(f2, a1)
        f2 = _transform_to_leading(f2, x, y)
    a2, b2, _ = f2
    assert gcd(a1, a2) == 1
    # Dirichlet composition: B = b1 (mod 2a1), B = b2 (mod 2a2); the moduli
    # share a factor 2, but b1 = b2 = delta (mod 2) keeps this solvable.
    t = (((b2 - b1) // 2) * pow(a1, -1, a2)) % a2
    B = b1 + 2 * a1 * t
    a3 = a1 * a2
    assert (B * B - delta) % (4 * a3) == 0
    c3 = (B * B - delta) // (4 * a3)
    return reduce_form((a3, B, c3))


def form_pow(form, k: int, delta: int) -> tuple[int, int, int]:
    result = principal_form(delta)
    base = reduce_form(form)
    if k < 0:
        base = inverse_form(base)
        k = -k
    while k:
        if k & 1:
            result = compose(result, base, delta)
        base = compose(base, base, delta)
        k >>= 1
    return result


def prime_form(delta: int, ell: int) -> tuple[int, int, int]:
    """A reduced form of leading coefficient ``ell`` (the class of a prime
    ideal above a non-inert prime ell)."""
    _check_disc(delta)
    for b in range(2 * ell):
        if (b * b - delta) % (4 * ell) == 0:
            return reduce_form((ell, b, (b * b - delta) // (4 * ell)))
    raise ValidationError(f"{ell} is inert in discriminant {delta}")


def is_ambiguous(form: tuple[int, int, int]) -> bool:
    a, b, c = reduce_form(form)
    return b == 0 or a == b or a == c


def class_group_order_of(form, delta: int) -> int:
    """Order of a form class in Pic(O(delta)) by iterated composition."""
    one = principal_form(delta)
    cur = reduce_form(form)
    n = 1
    while cur != one:
        cur = compose(cur, form, delta)
        n += 1
        if n > 4 * class_number(delta):
            raise AssertionError("runaway order computation")
    return n
