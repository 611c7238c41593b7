import pytest

from cmlocus.arith import OrderDisc, ValidationError, psi
from cmlocus.fields import K, Q, embeds, field_degree, is_isomorphic
from cmlocus.locus import (
    PrimeLocalDatum,
    count_fiber_X0MN,
    count_fiber_X0N,
    fiber_X0MN,
    lift_residue_prime_power,
    moduli_bounds,
    residue_X0MN,
    residue_X0N,
    x_nn_residue,
    _datum,
)
from cmlocus.tables import path_classes

O4 = OrderDisc.from_parts(-4, 1)
O3 = OrderDisc.from_parts(-3, 1)


def test_x_nn_residue():
    assert is_isomorphic(x_nn_residue(O4, 2), Q(1, -4))  # Q(P) = Q
    assert is_isomorphic(x_nn_residue(O3, 2), K(1, -3))  # Q(P) = K
    assert str(x_nn_residue(O4, 3)) == "K(3)"
    assert str(x_nn_residue(OrderDisc.from_parts(-3, 5), 2)) == "K(10)"  # odd
    assert str(x_nn_residue(OrderDisc.from_parts(-4, 3), 2)) == "Q(6)"  # even
    with pytest.raises(ValidationError):
        x_nn_residue(O4, 1)


def test_lift_examples():
    pd = PrimeLocalDatum(2, 1, 2, 2, False, False, True)
    assert str(lift_residue_prime_power(O4, pd, Q(4, -4))) == "Q(4)"
    hd = PrimeLocalDatum(2, 1, 2, 1, False, False, False, horizontal=1)
    assert str(lift_residue_prime_power(O4, hd, Q(2, -4))) == "K(2)"
    d3 = PrimeLocalDatum(3, 1, 2, 2, False, False, True)
    assert str(lift_residue_prime_power(O3, d3, Q(9, -3))) == "K(9)"


def test_residue_x0n_examples():
    assert str(residue_X0N(O4, [PrimeLocalDatum(2, 0, 2, 2, False, False, True)])) == "Q(4)"
    loop5 = PrimeLocalDatum(5, 0, 1, 0, True, True, False)
    assert str(residue_X0N(O4, [loop5])) == "K(1)"
    both = [
        PrimeLocalDatum(2, 0, 1, 1, False, False, True),
        PrimeLocalDatum(3, 0, 1, 1, False, False, True),
    ]
    field = residue_X0N(O3, both)
    assert str(field) == "Q(6)" and field_degree(field) == 3  # checked vs d(6)


def test_residue_x0mn_examples():
    pd = PrimeLocalDatum(2, 1, 3, 3, False, False, True)
    assert str(residue_X0MN(O4, 2, 8, [pd])) == "Q(8)"
    hd = PrimeLocalDatum(2, 1, 3, 2, False, False, False, horizontal=1)
    assert str(residue_X0MN(O4, 2, 8, [hd])) == "K(4)"
    d9 = PrimeLocalDatum(3, 1, 2, 2, False, False, True)
    assert str(residue_X0MN(O3, 3, 9, [d9])) == "K(9)"


def test_count_fiber_x0n():
    split = PrimeLocalDatum(5, 0, 1, 0, True, True, False)
    ram = PrimeLocalDatum(2, 0, 1, 1, False, False, True)
    split13 = PrimeLocalDatum(13, 0, 1, 0, True, True, False)
    assert count_fiber_X0N(O4, [ram])[0] == 1  # s = 0
    assert count_fiber_X0N(O4, [split, ram])[0] == 1  # s = 1
    assert count_fiber_X0N(O4, [split, split13])[0] == 2  # s = 2
    # s = 3 -> 4 points
    split17 = PrimeLocalDatum(17, 0, 1, 0, True, True, False)
    assert count_fiber_X0N(O4, [split, split13, split17])[0] == 4


def test_count_fiber_x0mn_examples():
    desc = PrimeLocalDatum(2, 1, 1, 1, False, False, True)
    assert count_fiber_X0MN(O4, 2, 2, [desc]) == 2
    # X(2) over J_-4 is three rational points, each ramified with e = 2
    loop = PrimeLocalDatum(2, 1, 1, 0, False, False, False, horizontal=1)
    assert count_fiber_X0MN(O4, 2, 2, [loop]) == 1
    pd8 = PrimeLocalDatum(2, 1, 3, 3, False, False, True)
    # full-fiber cross-check pins this at 2 (2*4*2 + 2*4*1 = 24 = psi(8)*2)
    assert count_fiber_X0MN(O4, 2, 8, [pd8]) == 2
    hd8 = PrimeLocalDatum(2, 1, 3, 2, False, False, False, horizontal=1)
    assert count_fiber_X0MN(O4, 2, 8, [hd8]) == 1


def test_fiber_x0mn_examples():
    r = fiber_X0MN(O4, 1, 2)
    assert [(str(c.field), c.d, c.e, c.count) for c in r.classes] == [
        ("Q(1)", 1, 1, 1),
        ("Q(2)", 1, 2, 1),
    ]
    r = fiber_X0MN(O3, 1, 3)
    assert [(str(c.field), c.d, c.e, c.count) for c in r.classes] == [
        ("Q(1)", 1, 1, 1),
        ("Q(3)", 1, 3, 1),
    ]
    r = fiber_X0MN(O4, 1, 10)
    assert r.check_total == psi(10) == 18 and r.psi_ok


def test_fiber_degenerate_level_one():
    r = fiber_X0MN(O4, 1, 1)
    assert len(r.classes) == 1 and r.classes[0].d == 1 and r.check_total == 1


def test_composite_totals_sweep():
    for dK in (-3, -4):
        for f in (1, 2, 3):
            order = OrderDisc.from_parts(dK, f)
            for N in range(1, 41):
                for M in range(1, N + 1):
                    if N % M:
                        continue
                    r = fiber_X0MN(order, M, N)
                    assert r.psi_ok
                    assert all(c.count > 0 for c in r.classes)


def test_moduli_bounds():
    lo, hi = moduli_bounds(-4, {2: 2, 5: 1})
    assert (str(lo), str(hi)) == ("Q(20)", "K(20)")
    lo, hi = moduli_bounds(-4, {5: 1})
    assert (str(lo), str(hi)) == ("Q(5)", "K(5)")


def test_fields_in_moduli_band():
    # every composite residue field sits between Q and K of the conductor
    # assembled from its prime-local lifts
    for order in (O4, O3, OrderDisc.from_parts(-4, 3)):
        for M, N in [(1, 12), (2, 20), (1, 45), (3, 45), (2, 2), (4, 8)]:
            if N % M:
                continue
            from cmlocus.arith import factorize

            fac = factorize(N)
            primes = sorted(fac)
            from itertools import product as iproduct

            per = [path_classes(order, ell, fac[ell]) for ell in primes]
            for combo in iproduct(*per):
                data = [
                    _datum(order, ell, _val(M, ell), fac[ell], cls)
                    for ell, cls in zip(primes, combo)
                ]
                field = residue_X0MN(order, M, N, data)
                exps = {}
                for d in data:
                    lifted = lift_residue_prime_power(
                        order,
                        d,
                        K(d.ell**d.field_exp * order.f, order.delta_K)
                        if d.contains_K
                        else Q(d.ell**d.field_exp * order.f, order.delta_K),
                    )
                    exps[d.ell] = _val(lifted.m, d.ell)
                lo, hi = moduli_bounds(order.delta_K, exps)
                if order.f == 1:
                    assert embeds(lo, field) and embeds(field, hi)


def _val(n, ell):
    v = 0
    while n and n % ell == 0:
        v += 1
        n //= ell
    return v


def test_data_validation():
    with pytest.raises(ValidationError):
        PrimeLocalDatum(5, 0, 1, 0, False, True, False)  # split edge without K
    with pytest.raises(ValidationError):
        PrimeLocalDatum(5, 2, 1, 0, False, False, False)  # a' > a
    with pytest.raises(ValidationError):
        residue_X0N(O4, [PrimeLocalDatum(5, 0, 1, 0, True, True, False)] * 2)
    with pytest.raises(ValidationError):
        fiber_X0MN(O4, 3, 4)
