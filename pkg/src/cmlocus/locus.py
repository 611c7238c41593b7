"""CM loci on X0(M,N): fibers over a CM point of X(1), residue fields,
point counts, primitive residue fields and degrees, and the transfer to
X1(M,N).

Conductor-1 orders (the two maximal orders with extra units) go through
dedicated residue-field rules; all larger orders inside the same
two fields go through the compositum/tensor algebra.
"""

from dataclasses import dataclass
from itertools import product
from math import lcm

from .arith import OrderDisc, ValidationError, euler_phi, factorize, kronecker, psi
from .fields import (
    FieldSymbol,
    K,
    Q,
    field_degree,
    minimal_fields,
    rcf_rel_degree,
    unit_count,
)
from .tables import PathClass, class_d, class_e, path_classes


@dataclass(frozen=True)
class ClosedPointClass:
    field: FieldSymbol
    d: int
    e: int
    count: int
    path_type: tuple[int, int, int] | None = None


@dataclass(frozen=True)
class FiberReport:
    M: int
    N: int
    order: OrderDisc
    classes: tuple[ClosedPointClass, ...]
    check_total: int

    @property
    def expected_total(self) -> int:
        return psi(self.N) * self.M * euler_phi(self.M)

    @property
    def psi_ok(self) -> bool:
        return self.check_total == self.expected_total


@dataclass(frozen=True)
class PrimeLocalDatum:
    """The ell-local data of a chosen downstairs class on X0(ell^a)."""

    ell: int
    a_prime: int
    a: int
    descents: int
    contains_K: bool
    split_surface_edge: bool
    purely_descending: bool
    conductor_exp: int | None = None  # ell-exponent of the downstairs field
    horizontal: int = 0

    def __post_init__(self):
        if not 0 <= self.a_prime <= self.a:
            raise ValidationError("need 0 <= a' <= a")
        if self.descents > self.a:
            raise ValidationError("descending count exceeds path length")
        if self.split_surface_edge and not self.contains_K:
            raise ValidationError("a split surface edge forces K in the field")

    @property
    def field_exp(self) -> int:
        return self.descents if self.conductor_exp is None else self.conductor_exp


def closed_point_classes(order: OrderDisc, ell: int, a: int) -> list[ClosedPointClass]:
    """The fiber of X0(ell^a) -> X(1) over the CM point of ``order``."""
    out = []
    for cls in path_classes(order, ell, a):
        out.append(
            ClosedPointClass(
                cls.field,
                class_d(order, cls),
                class_e(order, cls),
                cls.count,
                cls.bhd,
            )
        )
    return sorted(out, key=_class_key)


def _class_key(c: ClosedPointClass):
    return (c.field.base, c.field.m, c.path_type or (0, 0, 0))


def _datum(order: OrderDisc, ell: int, a_prime: int, a: int, cls: PathClass) -> PrimeLocalDatum:
    split = kronecker(order.delta, ell) == 1
    return PrimeLocalDatum(
        ell=ell,
        a_prime=a_prime,
        a=a,
        descents=cls.descents,
        contains_K=cls.field.contains_K,
        split_surface_edge=split and cls.horizontal > 0 and cls.field.contains_K,
        purely_descending=cls.purely_descending,
        conductor_exp=_ell_val(cls.field.m, ell) - _ell_val(order.f, ell),
        horizontal=cls.horizontal,
    )


def _ell_val(n: int, ell: int) -> int:
    v = 0
    while n % ell == 0:
        v += 1
        n //= ell
    return v


def x_nn_residue(order: OrderDisc, N: int) -> FieldSymbol:
    """Residue field of the CM point on X0(N,N)."""
    if N <= 1:
        raise ValidationError("X0(N,N) residue fields need N >= 2")
    dK, f = order.delta_K, order.f
    if N >= 3:
        return K(N * f, dK)
    if order.delta == -4:
        return Q(2 * f, dK)
    if order.delta == -3 or order.delta % 2 != 0:
        return K(2 * f, dK)
    return Q(2 * f, dK)


def lift_residue_prime_power(
    order: OrderDisc, datum: PrimeLocalDatum, downstairs_field: FieldSymbol
) -> FieldSymbol:
    """Residue field on X0(ell^a', ell^a) above a downstairs class."""
    if datum.a_prime == 0:
        return downstairs_field
    dK, f = order.delta_K, order.f
    ell, ap, a = datum.ell, datum.a_prime, datum.a
    if ell**ap == 2 and order.delta == -4:
        if a == 1 or datum.purely_descending:
            return downstairs_field
        return K(2 ** (a - 1), dK)
    if ell**ap == 2 and order.delta % 2 == 0:
        # Scalarizing the 2-torsion adjoins the 2-division field of the
        # source curve; that extension is real except when a surface
        # horizontal step of a -4 f^2 tower separates the two descents.
        m = lcm(2 * f, downstairs_field.m)
        if (
            a >= 2
            and dK % 8 == 4
            and order.ell_valuation(2) == 0
            and datum.horizontal > 0
        ):
            return K(m, dK)
        return FieldSymbol(downstairs_field.base, m, dK)
    return K(lcm(ell**ap * f, downstairs_field.m), dK)


def residue_X0N(order: OrderDisc, data) -> FieldSymbol:
    """Residue field on X0(N) from per-prime data; conductor-1 orders only."""
    if order.f != 1:
        raise ValidationError("residue_X0N applies to the maximal orders")
    _check_distinct_primes(data)
    m = 1
    for d in data:
        m *= d.ell**d.descents
    if any(d.split_surface_edge for d in data):
        return K(m, order.delta_K)
    return Q(m, order.delta_K)


def _check_distinct_primes(data):
    primes = [d.ell for d in data]
    if len(set(primes)) != len(primes):
        raise ValidationError("one datum per prime")


def residue_X0MN(order: OrderDisc, M: int, N: int, data) -> FieldSymbol:
    """Residue field on X0(M,N) from per-prime downstairs data."""
    _check_divides(M, N)
    _check_distinct_primes(data)
    dK, f = order.delta_K, order.f
    if M == 1:
        if f == 1:
            return residue_X0N(order, data)
        return _combined_field(order, data, lifted=False)
    if f == 1:
        if M >= 3 or order.delta == -3:
            m = 1
            for d in data:
                m *= d.ell ** max(d.a_prime, d.descents)
            return K(m, dK)
        # M = 2, delta = -4
        d1 = next(d for d in data if d.ell == 2)
        if d1.a >= 2 and not d1.purely_descending:
            m = 1
            for d in data:
                m *= d.ell ** max(d.a_prime, d.descents)
            return K(m, dK)
        m = 2**d1.a
        for d in data:
            if d.ell != 2:
                m *= d.ell**d.descents
        base_K = any(d.contains_K for d in data if d.ell != 2)
        return K(m, dK) if base_K else Q(m, dK)
    return _combined_field(order, data, lifted=True)


def _combined_field(order: OrderDisc, data, lifted: bool) -> FieldSymbol:
    """Tensor-compiled field over Q(f) for conductors f > 1."""
    f, dK = order.f, order.delta_K
    fields = []
    for d in data:
        down = FieldSymbol(
            "K" if d.contains_K else "Q", d.ell**d.field_exp * f, dK
        )
        fields.append(lift_residue_prime_power(order, d, down) if lifted else down)
    m = f
    for fld in fields:
        m = lcm(m, fld.m)
    if any(fld.contains_K for fld in fields):
        return K(m, dK)
    return Q(m, dK)


def count_fiber_X0N(order: OrderDisc, data) -> tuple[int, FieldSymbol]:
    """Number of points of X0(N) above a combination of per-prime classes,
    together with their shared residue field."""
    s = sum(1 for d in data if d.contains_K)
    field = residue_X0MN(order, 1, _level_of(data), data)
    return (2 ** max(s - 1, 0), field)


def _level_of(data) -> int:
    n = 1
    for d in data:
        n *= d.ell**d.a
    return n


def count_fiber_X0MN(order: OrderDisc, M: int, N: int, data) -> int:
    """Number of points of X0(M,N) above a combination of downstairs
    classes (all sharing one residue field)."""
    _check_divides(M, N)
    s = sum(1 for d in data if d.contains_K)
    field_up = residue_X0MN(order, M, N, data)
    field_down = residue_X0MN(order, 1, N, data)
    if order.f == 1:
        w2 = unit_count(order.delta_K) // 2
        e_down = 1 if all(d.descents == 0 for d in data) else w2
        e_up = w2 if M >= 2 else e_down
    else:
        e_down = e_up = 1
    num = 2 ** max(s - 1, 0) * M * euler_phi(M) * e_down * field_degree(field_down)
    den = e_up * field_degree(field_up)
    if num % den != 0:
        raise ValidationError("non-integral point count: inconsistent data")
    return num // den


def _check_divides(M, N):
    if M < 1 or N < 1 or N % M != 0:
        raise ValidationError(f"need M | N, got M={M}, N={N}")


def fiber_X0MN(order: OrderDisc, M: int, N: int) -> FiberReport:
    """The full fiber of X0(M,N) -> X(1) over the CM point of ``order``."""
    _check_divides(M, N)
    if N == 1:
        cls = ClosedPointClass(Q(order.f, order.delta_K), 1, 1, 1, (0, 0, 0))
        return FiberReport(M, N, order, (cls,), 1)
    fac = factorize(N)
    primes = sorted(fac)
    per_prime = [path_classes(order, ell, fac[ell]) for ell in primes]
    merged: dict = {}
    single = len(primes) == 1
    for combo in product(*per_prime):
        mult = 1
        data = []
        for ell, cls in zip(primes, combo):
            mult *= cls.count
            data.append(_datum(order, ell, _ell_val(M, ell), fac[ell], cls))
        field = residue_X0MN(order, M, N, data)
        count = count_fiber_X0MN(order, M, N, data) * mult
        d = field_degree(field) // rcf_rel_degree(order.delta_K, order.f)
        if order.f == 1:
            horizontal = all(x.descents == 0 for x in data)
            e = 1 if (M == 1 and horizontal) else unit_count(order.delta_K) // 2
        else:
            e = 1
        tag = combo[0].bhd if single else None
        key = (field, d, e, tag)
        merged[key] = merged.get(key, 0) + count
    classes = tuple(
        sorted(
            (ClosedPointClass(f, d, e, c, tag) for (f, d, e, tag), c in merged.items()),
            key=_class_key,
        )
    )
    total = sum(c.e * c.d * c.count for c in classes)
    report = FiberReport(M, N, order, classes, total)
    if not report.psi_ok:
        raise AssertionError(
            f"fiber degree check failed for (delta={order.delta}, M={M}, N={N}): "
            f"{total} != {report.expected_total}"
        )
    return report


# -- primitive residue fields ------------------------------------------------


def enumerated_primitive_prime_power(order: OrderDisc, ell: int, a_prime: int, a: int):
    """Minimal residue fields of the X0(ell^a', ell^a) fiber obtained by
    lifting every downstairs class; the independent route against the
    published casework in :func:`primitive_prime_power`."""
    fields = []
    for cls in path_classes(order, ell, a):
        datum = _datum(order, ell, a_prime, a, cls)
        fields.append(lift_residue_prime_power(order, datum, cls.field))
    return minimal_fields(fields)


def primitive_prime_power(order: OrderDisc, ell: int, a_prime: int, a: int):
    """Primitive residue fields of CM points on X0(ell^a', ell^a)."""
    if not 0 <= a_prime <= a or ell**a < 2:
        raise ValidationError("need 0 <= a' <= a and ell^a >= 2")
    dK, f, delta = order.delta_K, order.f, order.delta
    L = order.ell_valuation(ell)
    if a_prime == 0:
        return _primitive_base(order, ell, a)
    if ell**a_prime >= 3:
        chiK = kronecker(dK, ell)
        if chiK == 1:
            return [K(ell**a_prime * f, dK)]
        if chiK == -1:
            return [K(ell ** max(a_prime, a - 2 * L) * f, dK)]
        return [K(ell ** max(a_prime, a - 2 * L - 1) * f, dK)]
    # ell^{a'} = 2
    if delta % 2 != 0:
        if a == 1:
            return [K(2 * f, dK)]
        if kronecker(delta, 2) == 1:
            return [K(2 * f, dK)]
        return [K(2**a * f, dK)]
    return _primitive_two_even(order, a)


def _primitive_base(order: OrderDisc, ell: int, a: int):
    dK, f, delta = order.delta_K, order.f, order.delta
    L = order.ell_valuation(ell)
    chi = kronecker(delta, ell)
    chiK = kronecker(dK, ell)
    if ell**a == 2:
        return [Q(f, dK)] if chi != -1 else [Q(2 * f, dK)]
    if L == 0:
        if chi == 1:
            return [Q(ell**a * f, dK), K(f, dK)]
        if chi == -1:
            return [Q(ell**a * f, dK)]
        return [Q(ell ** (a - 1) * f, dK)]
    if ell > 2:
        if chiK == 1:
            if a <= 2 * L:
                return [Q(f, dK)]
            return [Q(ell ** (a - 2 * L) * f, dK), K(f, dK)]
        if chiK == -1:
            if a <= 2 * L:
                return [Q(f, dK)]
            return [Q(ell ** (a - 2 * L) * f, dK)]
        if a <= 2 * L + 1:
            return [Q(f, dK)]
        return [Q(ell ** (a - 2 * L - 1) * f, dK)]
    # ell = 2, a >= 2, L >= 1
    if chiK == 1:
        if L == 1:
            return [Q(2**a * f, dK), K(f, dK)]
        if a <= 2 * L - 2:
            return [Q(f, dK)]
        return [Q(2 ** (a - 2 * L + 2) * f, dK), K(f, dK)]
    if chiK == -1:
        if L == 1:
            return [Q(2**a * f, dK), K(2 ** (a - 2) * f, dK)]
        if a <= 2 * L - 2:
            return [Q(f, dK)]
        return [Q(2 ** (a - 2 * L + 2) * f, dK), K(2 ** max(a - 2 * L, 0) * f, dK)]
    if _ord2(dK) == 2:
        if a <= 2 * L:
            return [Q(f, dK)]
        return [Q(2 ** (a - 2 * L) * f, dK), K(2 ** (a - 2 * L - 1) * f, dK)]
    if a <= 2 * L + 1:
        return [Q(f, dK)]
    return [Q(2 ** (a - 2 * L - 1) * f, dK)]


def _primitive_two_even(order: OrderDisc, a: int):
    """X0(2, 2^a) over an even discriminant."""
    dK, f = order.delta_K, order.f
    L = order.ell_valuation(2)
    if a == 1:
        return [Q(2 * f, dK)]
    chiK = kronecker(dK, 2)
    if L == 0:
        if _ord2(dK) == 2:
            return [Q(2**a * f, dK), K(2 ** (a - 1) * f, dK)]
        return [Q(2 ** (a - 1) * f, dK)]
    if chiK == 1:
        if L == 1:
            return [Q(2**a * f, dK), K(2 * f, dK)]
        if a <= 2 * L - 1:
            return [Q(2 * f, dK)]
        return [Q(2 ** (a - 2 * L + 2) * f, dK), K(2 * f, dK)]
    if chiK == -1:
        if L == 1 and a == 2:
            return [Q(4 * f, dK), K(2 * f, dK)]
        if L == 1:
            return [Q(2**a * f, dK), K(2 ** (a - 2) * f, dK)]
        if a <= 2 * L - 1:
            return [Q(2 * f, dK)]
        if a == 2 * L:
            return [Q(4 * f, dK), K(2 * f, dK)]
        return [Q(2 ** (a - 2 * L + 2) * f, dK), K(2 ** (a - 2 * L) * f, dK)]
    if _ord2(dK) == 2:
        if a <= 2 * L + 1:
            return [Q(2 * f, dK)]
        return [Q(2 ** (a - 2 * L) * f, dK), K(2 ** (a - 2 * L - 1) * f, dK)]
    if a <= 2 * L + 1:
        return [Q(2 * f, dK)]
    return [Q(2 ** (a - 2 * L - 1) * f, dK)]


def _ord2(n: int) -> int:
    return _ell_val(abs(n), 2)


def _split_deep_level(order: OrderDisc, ell: int, a: int) -> bool:
    """The one regime where the rational and ring-class primitive degrees
    stay incomparable: ell odd and split, below-surface start, path length
    beyond twice the starting depth."""
    L = order.ell_valuation(ell)
    return (
        ell > 2
        and L >= 1
        and kronecker(order.delta_K, ell) == 1
        and a > 2 * L
    )


def primitive_X0MN(order: OrderDisc, M: int, N: int):
    """Primitive residue fields and primitive degrees on X0(M,N)."""
    _check_divides(M, N)
    dK, f = order.delta_K, order.f
    if N == 1:
        fld = Q(f, dK)
        return ([fld], [field_degree(fld)])
    fac = factorize(N)
    primes = sorted(fac)
    locals_ = [
        primitive_prime_power(order, ell, _ell_val(M, ell), fac[ell]) for ell in primes
    ]
    rational_branch = M == 1 or (M == 2 and order.delta % 2 == 0)
    if rational_branch:
        B = C = 1
        s = 0
        all_split_deep = True
        for ell, fields in zip(primes, locals_):
            rational = [g for g in fields if not g.contains_K]
            others = [g for g in fields if g.contains_K]
            b = _ell_val(rational[0].m, ell) - order.ell_valuation(ell)
            c = _ell_val(others[0].m, ell) - order.ell_valuation(ell) if others else b
            B *= ell**b
            C *= ell**c
            if others:
                s += 1
                if not _split_deep_level(order, ell, fac[ell]):
                    all_split_deep = False
        qfield = Q(B * f, dK)
        if s == 0:
            return ([qfield], [field_degree(qfield)])
        kfield = K(C * f, dK)
        fields = [qfield, kfield]
        if all_split_deep:
            degrees = sorted({field_degree(qfield), field_degree(kfield)})
        else:
            degrees = [field_degree(kfield)]
        return (fields, degrees)
    C = 1
    for ell, fields in zip(primes, locals_):
        others = [g for g in fields if g.contains_K]
        pick = others[0] if others else fields[0]
        C *= ell ** (_ell_val(pick.m, ell) - order.ell_valuation(ell))
    kfield = K(C * f, dK)
    return ([kfield], [field_degree(kfield)])


# -- X1(M,N) transfer ---------------------------------------------------------


def elliptic_compatible(order: OrderDisc, M: int, N: int) -> bool:
    """Whether X0(M,N) has an elliptic CM point over this order: every prime
    must admit a completely horizontal path."""
    if order.f != 1 or M != 1:
        return False
    for ell, a in factorize(N).items():
        chi = kronecker(order.delta, ell)
        if chi == -1 or (chi == 0 and a >= 2):
            return False
    return True


def x1_fiber(order: OrderDisc, M: int, N: int, point_kind: str = "non-elliptic"):
    """(e, f, 1) for the unique point of X1(M,N) over a CM point of X0(M,N)."""
    _check_divides(M, N)
    if point_kind not in ("elliptic", "non-elliptic"):
        raise ValidationError(f"unknown point kind {point_kind!r}")
    if point_kind == "elliptic":
        if order.delta not in (-3, -4) or M != 1 or N < 4:
            raise ValidationError("elliptic points need delta in {-3,-4}, M=1, N>=4")
        if not elliptic_compatible(order, M, N):
            raise ValidationError(
                f"X0({N}) has no elliptic point over discriminant {order.delta}"
            )
        phi = euler_phi(N)
        if order.delta == -4:
            assert phi % 4 == 0
            return (2, phi // 4, 1)
        assert phi % 6 == 0
        return (3, phi // 6, 1)
    f_deg = euler_phi(N) // 2 if N >= 3 else 1
    return (1, f_deg, 1)


def moduli_bounds(delta_K: int, exponents: dict[int, int]):
    """Sandwich (Q(prod l^b), K(prod l^b)) for a field of moduli."""
    m = 1
    for ell, b in exponents.items():
        m *= ell**b
    return (Q(m, delta_K), K(m, delta_K))
