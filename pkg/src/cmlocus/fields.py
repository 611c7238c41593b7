"""Symbolic algebra of ring class fields K(m) and rational ring class
fields Q(m) attached to a fixed fundamental discriminant.

Fields are labels, never embedded objects.  Degrees come from the relative
class number formula; the reduced-forms census in ``forms`` is kept as an
independent oracle for it.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, lcm

from .arith import ValidationError, factorize, is_fundamental, kronecker
from .forms import class_number

RATIONAL = "Q"
RING_CLASS = "K"

# discriminants of class number one lying over Q(i) and Q(sqrt(-3))
D_SET = (-3, -4, -12, -16, -27)


def unit_count(delta_K: int) -> int:
    """w_K = #Z_K^x."""
    if delta_K == -3:
        return 6
    if delta_K == -4:
        return 4
    return 2


def in_S(f: int, delta_K: int) -> bool:
    """True iff f^2 * delta_K lies in the class-number-one set D."""
    if delta_K not in (-3, -4):
        raise ValidationError("S is defined relative to delta_K in {-3, -4}")
    return f * f * delta_K in D_SET


@lru_cache(maxsize=None)
def rcf_rel_degree(delta_K: int, f: int) -> int:
    """d(f) = [K(f):K(1)] via the conductor formula."""
    if f <= 0:
        raise ValidationError(f"conductor must be positive, got {f}")
    if not is_fundamental(delta_K):
        raise ValidationError(f"{delta_K} is not fundamental")
    if f == 1:
        return 1
    num = 2 * f
    den = unit_count(delta_K)
    for ell in factorize(f):
        num = num // ell * (ell - kronecker(delta_K, ell))
    assert num % den == 0
    return num // den


@lru_cache(maxsize=None)
def canonical_conductor(delta_K: int, m: int) -> int:
    """Smallest divisor m0 | m with K(m0) = K(m) (equivalently equal degree).

    Subsumes the S-collapse: any conductor whose order has class number one
    canonicalizes to 1.
    """
    d = rcf_rel_degree(delta_K, m)
    best = m
    for p in factorize(m):
        m0 = m
        while m0 % p == 0 and rcf_rel_degree(delta_K, m0 // p) == d:
            m0 //= p
        if m0 < best:
            cand = canonical_conductor(delta_K, m0)
            if rcf_rel_degree(delta_K, cand) == d:
                best = min(best, cand)
    return best


@dataclass(frozen=True)
class FieldSymbol:
    """Q(m) or K(m) relative to a fixed fundamental discriminant."""

    base: str  # RATIONAL or RING_CLASS
    m: int
    delta_K: int

    def __post_init__(self):
        if self.base not in (RATIONAL, RING_CLASS):
            raise ValidationError(f"bad base {self.base!r}")
        if self.m <= 0:
            raise ValidationError(f"conductor must be positive, got {self.m}")
        if not is_fundamental(self.delta_K):
            raise ValidationError(f"{self.delta_K} is not fundamental")

    @property
    def contains_K(self) -> bool:
        return self.base == RING_CLASS

    @property
    def is_formally_real(self) -> bool:
        return self.base == RATIONAL

    def canonical_m(self) -> int:
        return canonical_conductor(self.delta_K, self.m)

    def __str__(self):
        return f"{self.base}({self.m})"


def Q(m: int, delta_K: int) -> FieldSymbol:
    return FieldSymbol(RATIONAL, m, delta_K)


def K(m: int, delta_K: int) -> FieldSymbol:
    return FieldSymbol(RING_CLASS, m, delta_K)


def field_degree(sym: FieldSymbol) -> int:
    """Absolute degree over Q: h(m^2 delta_K), doubled for K(m)."""
    h = rcf_rel_degree(sym.delta_K, sym.m) * _h_fundamental(sym.delta_K)
    return 2 * h if sym.contains_K else h


@lru_cache(maxsize=None)
def _h_fundamental(delta_K: int) -> int:
    if delta_K in (-3, -4):
        return 1
    return class_number(delta_K)


def is_isomorphic(a: FieldSymbol, b: FieldSymbol) -> bool:
    if a.delta_K != b.delta_K or a.base != b.base:
        return False
    return a.canonical_m() == b.canonical_m()


def embeds(a: FieldSymbol, b: FieldSymbol) -> bool:
    """Whether ``a`` embeds into ``b``: conductor divisibility after
    collapsing, with K(m) never landing in a formally real field."""
    if a.delta_K != b.delta_K:
        return False
    if a.contains_K and not b.contains_K:
        return False
    return b.canonical_m() % a.canonical_m() == 0


def minimal_fields(syms) -> list[FieldSymbol]:
    """Minimal elements under ``embeds``, deduplicated up to isomorphism."""
    uniq: list[FieldSymbol] = []
    for s in syms:
        if not any(is_isomorphic(s, t) for t in uniq):
            uniq.append(s)
    out = [
        s
        for s in uniq
        if not any(embeds(t, s) and not is_isomorphic(t, s) for t in uniq)
    ]
    return sorted(out, key=lambda s: (s.base, s.canonical_m()))


@dataclass(frozen=True)
class CompositumResult:
    """A compositum presented as a subfield of a ring-class closure.

    ``closure`` is the smallest ring-class-type field containing the
    compositum and ``index`` its index in that closure, so the compositum
    has degree field_degree(closure) / index.
    """

    closure: FieldSymbol
    index: int

    def degree(self) -> int:
        d = field_degree(self.closure)
        assert d % self.index == 0
        return d // self.index


def compose_rcf(factors) -> CompositumResult:
    """Compositum of ring class fields K(f_1) ... K(f_r).

    Conductors in S are absorbed; conductors linked by a common factor
    merge with no degree loss; what remains are pairwise coprime conductors
    outside S, each coprime junction costing a factor w_K/2.
    """
    factors = list(factors)
    if not factors:
        raise ValidationError("empty compositum")
    delta_K = factors[0].delta_K
    for s in factors:
        if s.delta_K != delta_K:
            raise ValidationError("mixed fundamental discriminants")
        if not s.contains_K:
            raise ValidationError("compose_rcf expects ring class fields")
    conductors = [s.m for s in factors]
    big = lcm(*conductors)
    live = [m for m in conductors if not in_S(m, delta_K)]
    # merge along shared factors: connected components of the gcd graph
    components: list[int] = []
    for m in live:
        joined = m
        rest = []
        for comp in components:
            if gcd(comp, joined) > 1:
                joined = lcm(comp, joined)
            else:
                rest.append(comp)
        components = rest + [joined]
    comp_degree = 1
    for comp in components:
        comp_degree *= rcf_rel_degree(delta_K, comp)
    total = rcf_rel_degree(delta_K, big)
    assert total % comp_degree == 0
    return CompositumResult(K(big, delta_K), total // comp_degree)


def tensor_rcf(f1: FieldSymbol, f2: FieldSymbol, base_m: int) -> list[CompositumResult]:
    """Decompose F1 (x)_{Q(base_m)} F2 into field factors.

    Returns one entry per factor; entries carry an index > 1 only in the
    coprime case where the factor is a proper subfield of its ring-class
    closure.
    """
    if f1.delta_K != f2.delta_K:
        raise ValidationError("mixed fundamental discriminants")
    delta_K = f1.delta_K
    if base_m != gcd(f1.m, f2.m):
        raise ValidationError("base conductor must be gcd of the factor conductors")
    w2 = unit_count(delta_K) // 2
    big = lcm(f1.m, f2.m)
    s = int(f1.contains_K) + int(f2.contains_K)
    if in_S(f1.m, delta_K) or in_S(f2.m, delta_K):
        keep, absorbed = (f1, f2) if in_S(f2.m, delta_K) else (f2, f1)
        if in_S(f1.m, delta_K) and in_S(f2.m, delta_K):
            keep = f2
        base = RING_CLASS if s >= 1 else RATIONAL
        factor = CompositumResult(FieldSymbol(base, keep.m, delta_K), 1)
        copies = 2 if s == 2 else 1
        return [factor] * copies
    if base_m > 1:
        base = RING_CLASS if s >= 1 else RATIONAL
        factor = CompositumResult(FieldSymbol(base, big, delta_K), 1)
        return [factor] * (2 if s == 2 else 1)
    # pairwise coprime conductors outside S: proper compositum factors
    base = RING_CLASS if s >= 1 else RATIONAL
    factor = CompositumResult(FieldSymbol(base, big, delta_K), w2)
    return [factor] * (2 ** max(s - 1, 0))
