"""Pure-Python kernels for reduced-form censuses.

Mirrors the compiled extension in ``_fastcore.pyx``; selected at import
time by ``_kernel`` when the extension is unavailable.
"""

from math import gcd, isqrt

BACKEND = "pure"


def form_census(delta: int) -> tuple[int, int]:
    """Count reduced primitive forms of discriminant ``delta``.

    Returns ``(h, ambiguous)`` where ``h`` is the class number and
    ``ambiguous`` counts the reduced forms with b = 0, a = b or a = c.
    Conventions: -a < b <= a <= c, b >= 0 when a == c, gcd(a, b, c) = 1.
    """
    if delta >= 0 or delta % 4 not in (0, 1):
        raise ValueError(f"not an imaginary quadratic discriminant: {delta}")
    h = 0
    ambiguous = 0
    n = -delta
    amax = isqrt(n // 3)
    for a in range(1, amax + 1):
        four_a = 4 * a
        # b runs over -a < b <= a with b^2 = delta (mod 4a), i.e. b = delta (mod 2)
        b = -a + 1
        if (b - delta) % 2 != 0:
            b += 1
        while b <= a:
            num = b * b + n
            if num % four_a == 0:
                c = num // four_a
                if c >= a and gcd(gcd(a, abs(b)), c) == 1:
                    if a == c and b < 0:
                        pass  # excluded boundary representative
                    else:
                        h += 1
                        if b == 0 or a == b or a == c:
                            ambiguous += 1
            b += 2
    return h, ambiguous
