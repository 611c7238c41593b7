"""Normative path-type tables for the fiber of X0(l^a) -> X(1) over a CM
point of the orders inside Q(i) and Q(sqrt(-3)).

Every closed point class of the fiber is listed with its path shape
(b, h, d) = (ascents, horizontal steps, descents), the number of classes of
that exact shape and field, and the residue field.  Dispatch is on
L = ord_l(conductor), the splitting symbol of the fundamental discriminant
at l, and (for l = 2) the 2-adic shape of the fundamental discriminant.

The isogeny-graph walker in ``pathstats`` rederives the path totals from
graph structure; these tables stay the source of truth for the Galois
grouping into closed points.
"""

from dataclasses import dataclass

from .arith import OrderDisc, ValidationError, kronecker, psi
from .fields import FieldSymbol, K, Q, field_degree, rcf_rel_degree


@dataclass(frozen=True)
class PathClass:
    """One closed point class: path shape, residue field, multiplicity."""

    bhd: tuple[int, int, int]
    field: FieldSymbol
    count: int
    type_tag: str

    @property
    def descents(self) -> int:
        return self.bhd[2]

    @property
    def horizontal(self) -> int:
        return self.bhd[1]

    @property
    def purely_descending(self) -> bool:
        return self.bhd[0] == 0 and self.bhd[1] == 0


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            return False
        p += 1
    return True


def path_classes(order: OrderDisc, ell: int, a: int) -> list[PathClass]:
    """All closed point classes of X0(ell^a) -> X(1) over the CM point of
    ``order``, for delta_K in {-3, -4}."""
    if order.delta_K not in (-3, -4):
        raise ValidationError("tables cover delta_K in {-3, -4} only")
    if not _is_prime(ell):
        raise ValidationError(f"{ell} is not prime")
    if a < 1:
        raise ValidationError("a must be >= 1")
    dK = order.delta_K
    f = order.f
    L = order.ell_valuation(ell)
    sym = kronecker(dK, ell)
    out: list[PathClass] = []

    def add(tag, b, h, d, field, count):
        if count > 0:
            out.append(PathClass((b, h, d), field, count, tag))

    # types shared by every prime
    add("I", 0, 0, a, Q(ell**a * f, dK), 1)
    if a <= L:
        add("II", a, 0, 0, Q(f, dK), 1)
    if L == 0 and sym == 0:
        add("III", 0, 1, a - 1, Q(ell ** (a - 1) * f, dK), 1)
    if L == 0 and sym == 1:
        for h in range(1, a + 1):
            add("IV", 0, h, a - h, K(ell ** (a - h) * f, dK), 1)
    if L >= 1 and a - L >= 1 and sym == 1:
        add("X", L, a - L, 0, K(f, dK), 1)

    if ell > 2:
        if L >= 2:
            for b in range(1, min(a - 1, L - 1) + 1):
                n = (ell - 1) // 2 * ell ** (min(b, a - b) - 1)
                add("V", b, 0, a - b, K(ell ** max(a - 2 * b, 0) * f, dK), n)
        if a > L >= 1 and sym == -1:
            m = ell ** max(a - 2 * L, 0) * f
            add("VI", L, 0, a - L, Q(m, dK), 1)
            add("VI", L, 0, a - L, K(m, dK), (ell ** min(L, a - L) - 1) // 2)
        if a >= L + 1 >= 2 and sym == 0:
            m = ell ** max(a - 2 * L, 0) * f
            n = (ell - 1) // 2 * ell ** (min(L, a - L) - 1)
            add("VII", L, 0, a - L, K(m, dK), n)
            m1 = ell ** max(a - 2 * L - 1, 0) * f
            add("VIII", L, 1, a - L - 1, Q(m1, dK), 1)
            add("VIII", L, 1, a - L - 1, K(m1, dK), (ell ** min(L, a - L - 1) - 1) // 2)
        if a >= L + 1 >= 2 and sym == 1:
            m = ell ** max(a - 2 * L, 0) * f
            add("IX", L, 0, a - L, Q(m, dK), 1)
            add("IX", L, 0, a - L, K(m, dK), ((ell - 2) * ell ** (min(L, a - L) - 1) - 1) // 2)
            for h in range(1, a - L):
                mh = ell ** max(a - 2 * L - h, 0) * f
                add("XI", L, h, a - L - h, K(mh, dK), (ell - 1) * ell ** (min(L, a - L - h) - 1))
    else:
        out.extend(_ell2_classes(dK, f, L, a, sym))

    total = sum(class_e(order, c) * class_d(order, c) * c.count for c in out)
    if total != psi(ell**a):
        raise AssertionError(
            f"table inconsistency at (dK={dK}, f={f}, l={ell}, a={a}): "
            f"sum e*d*count = {total} != psi = {psi(ell ** a)}"
        )
    return out


def _ell2_classes(dK: int, f: int, L: int, a: int, sym: int) -> list[PathClass]:
    out: list[PathClass] = []

    def add(tag, b, h, d, field, count):
        if count > 0:
            out.append(PathClass((b, h, d), field, count, tag))

    if sym != 0:
        # fundamental discriminant odd at 2
        if L >= 2 and a >= 2:
            add("V1", 1, 0, a - 1, Q(2 ** (a - 2) * f, dK), 1)
        if L >= a >= 3:
            add("V2", a - 1, 0, 1, Q(f, dK), 1)
        if a > L >= 3:
            m = 2 ** max(a - 2 * L + 2, 0) * f
            add("V3", L - 1, 0, a - L + 1, Q(m, dK), 2)
            add("V3", L - 1, 0, a - L + 1, K(m, dK), 2 ** (min(a - L + 1, L - 1) - 2) - 1)
        for b in range(2, min(L - 2, a - 2) + 1):
            add("V4", b, 0, a - b, K(2 ** max(a - 2 * b, 0) * f, dK), 2 ** (min(b, a - b) - 2))
        if a > L >= 1 and sym == -1:
            add("VI", L, 0, a - L, K(2 ** max(a - 2 * L, 0) * f, dK), 2 ** (min(L, a - L) - 1))
        if sym == 1 and L >= 1:
            for h in range(1, a - L):
                mh = 2 ** max(a - 2 * L - h, 0) * f
                add("XI", L, h, a - L - h, K(mh, dK), 2 ** (min(L, a - L - h) - 1))
        return out

    ord2 = 2 if dK % 8 == 4 else 3  # ord_2 of the even fundamental discriminant
    if L >= 2 and a >= 2:
        add("V1", 1, 0, a - 1, Q(2 ** (a - 2) * f, dK), 1)
    if L >= a >= 3:
        add("V2", a - 1, 0, 1, Q(f, dK), 1)
    for b in range(2, min(L - 1, a - 2) + 1):
        add("V3", b, 0, a - b, K(2 ** max(a - 2 * b, 0) * f, dK), 2 ** (min(b, a - b) - 2))
    if a > L >= 1:
        if L == 1:
            add("VI1", L, 0, a - L, Q(2 ** max(a - 2, 0) * f, dK), 1)
        elif a == L + 1:
            add("VI2", L, 0, a - L, Q(f, dK), 1)
        else:  # a >= L+2 >= 4
            m = 2 ** max(a - 2 * L, 0) * f
            if ord2 == 2:
                add("VI3", L, 0, a - L, Q(m, dK), 2)
                add("VI3", L, 0, a - L, K(m, dK), 2 ** (min(L, a - L) - 2) - 1)
            else:
                add("VI3", L, 0, a - L, K(m, dK), 2 ** (min(L, a - L) - 2))
    if a >= L + 1 >= 2:
        if a == L + 1:
            add("VIII1", L, 1, 0, Q(f, dK), 1)
        else:
            m = 2 ** max(a - 2 * L - 1, 0) * f
            if ord2 == 2:
                add("VIII2", L, 1, a - L - 1, K(m, dK), 2 ** (min(L, a - 1 - L) - 1))
            else:
                add("VIII2", L, 1, a - L - 1, Q(m, dK), 2)
                add("VIII2", L, 1, a - L - 1, K(m, dK), 2 ** (min(L, a - 1 - L) - 1) - 1)
    return out


def class_e(order: OrderDisc, cls: PathClass) -> int:
    """Ramification index over X(1): w_K/2 for a non-horizontal class over
    the maximal orders, 1 otherwise."""
    if order.f != 1:
        return 1
    if cls.descents == 0:
        return 1
    return 2 if order.delta_K == -4 else 3


def class_d(order: OrderDisc, cls: PathClass) -> int:
    """Residual degree over Q(J_delta)."""
    num = field_degree(cls.field)
    den = rcf_rel_degree(order.delta_K, order.f)
    assert num % den == 0
    return num // den
