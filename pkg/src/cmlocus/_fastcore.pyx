# cython: language_level=3
"""Compiled kernel for reduced-form censuses (hot loop of the class-number
oracle).  Semantics identical to ``_purecore.form_census``."""

from libc.math cimport sqrt

BACKEND = "fast"


cdef long long _gcd3(long long a, long long b, long long c) noexcept:
    cdef long long t
    while b:
        t = a % b
        a = b
        b = t
    if a < 0:
        a = -a
    while c:
        t = a % c
        a = c
        c = t
    if a < 0:
        a = -a
    return a


def form_census(delta):
    """Count reduced primitive forms of discriminant ``delta``.

    Returns ``(h, ambiguous)``; see the pure-Python twin for conventions.
    Discriminants beyond |delta| ~ 4e18 overflow int64 and are rejected.
    """
    if delta >= 0 or delta % 4 not in (0, 1):
        raise ValueError(f"not an imaginary quadratic discriminant: {delta}")
    if delta < -(2 ** 62):
        raise OverflowError("discriminant too large for compiled census")
    cdef long long d = delta
    cdef long long n = -d
    cdef long long h = 0
    cdef long long ambiguous = 0
    cdef long long amax = <long long> sqrt(n / 3.0)
    while (amax + 1) * (amax + 1) * 3 <= n:
        amax += 1
    while amax * amax * 3 > n:
        amax -= 1
    cdef long long a, b, c, num, four_a, b0
    cdef long long parity = d & 1
    for a in range(1, amax + 1):
        four_a = 4 * a
        b0 = -a + 1
        if ((b0 - parity) & 1) != 0:
            b0 += 1
        b = b0
        while b <= a:
            num = b * b + n
            if num % four_a == 0:
                c = num // four_a
                if c >= a and _gcd3(a, b, c) == 1:
                    if not (a == c and b < 0):
                        h += 1
                        if b == 0 or a == b or a == c:
                            ambiguous += 1
            b += 2
    return h, ambiguous
