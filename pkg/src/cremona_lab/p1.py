"""Rational self-maps of the projective line and towers of them.

Fibers are handled through their defining polynomials only: the fiber of
``phi`` over a finite value ``a`` is the zero set of ``num - a*den``, and it
consists of ``deg phi`` distinct finite points exactly when that polynomial
has full degree and is squarefree.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterator, Mapping, Sequence

from gmpy2 import mpq

from .algebra import MPoly, Q, RationalFunction, poly_gcd, squarefree_data

VAR = "z"
VARS = (VAR,)


class P1Error(ValueError):
    pass


class BudgetExhausted(P1Error):
    def __init__(self, message: str, obstructions: Mapping[int, list] | None = None):
        super().__init__(message)
        self.obstructions = dict(obstructions or {})


class P1Map:
    """``z -> num(z) / den(z)`` with coprime numerator and denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: MPoly | None = None):
        if num.vars != VARS:
            num = num.with_vars(VARS)
        if den is None:
            den = MPoly.const(1, VARS)
        elif den.vars != VARS:
            den = den.with_vars(VARS)
        r = RationalFunction(num, den)
        self.num = r.num
        self.den = r.den

    @classmethod
    def parse(cls, text: str) -> "P1Map":
        r = RationalFunction.parse(text, VARS)
        return cls(r.num, r.den)

    @classmethod
    def identity(cls) -> "P1Map":
        return cls(MPoly.var(VAR, VARS))

    def as_rational_function(self) -> RationalFunction:
        return RationalFunction(self.num, self.den, reduce=False)

    def __eq__(self, other) -> bool:
        return isinstance(other, P1Map) and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"P1Map({self})"

    def __str__(self) -> str:
        return str(self.as_rational_function())

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: Mapping) -> "P1Map":
        if not isinstance(data, Mapping) or set(data) != {"num", "den"}:
            raise P1Error("P1 map object must have exactly the keys 'num' and 'den'")
        num, den = MPoly.from_json(data["num"]), MPoly.from_json(data["den"])
        for p in (num, den):
            if len(p.vars) != 1:
                raise P1Error("P1 map polynomials are univariate")
        return cls(num, den.with_vars(num.vars) if den.vars != num.vars else den)


def degree(m: P1Map) -> int:
    return max(m.num.degree(VAR), m.den.degree(VAR))


def compose(outer: P1Map, inner: P1Map) -> P1Map:
    r = outer.as_rational_function().substitute([inner.as_rational_function()])
    return P1Map(r.num, r.den)


def fiber_polynomial(m: P1Map, a) -> MPoly:
    """Numerator of ``m - a``; its roots are the finite points over ``a``."""
    return m.num - m.den.scale(Q(a))


def is_unramified_over(m: P1Map, a) -> bool:
    n = fiber_polynomial(m, a)
    return n.degree(VAR) == degree(m) and squarefree_data(n, VAR)[1]


def rational_enumeration() -> Iterator[mpq]:
    """0, 1, -1, 2, -2, 1/2, -1/2, 3, -3, 3/2, -3/2, 1/3, -1/3, 2/3, -2/3, ..."""
    yield mpq(0)
    h = 1
    while True:
        pairs = [(p, q) for q in range(1, h + 1) for p in range(1, h + 1) if max(p, q) == h and gcd(p, q) == 1]
        for p, q in sorted(pairs, key=lambda pq: (pq[1], pq[0])):
            yield mpq(p, q)
            yield mpq(-p, q)
        h += 1


class P1Tower:
    """Maps ``pi_0, pi_1, ...`` with compositions ``phi_j = pi_0 o ... o pi_j``."""

    def __init__(self, maps: Sequence[P1Map]):
        self.maps: tuple[P1Map, ...] = tuple(maps)
        for i, m in enumerate(self.maps):
            if degree(m) < 2:
                raise P1Error(f"tower member {i} has degree {degree(m)} < 2")
        comps: list[P1Map] = []
        for m in self.maps:
            comps.append(m if not comps else compose(comps[-1], m))
        self.compositions: tuple[P1Map, ...] = tuple(comps)

    def __len__(self) -> int:
        return len(self.maps)

    def degrees(self) -> list[int]:
        return [degree(m) for m in self.maps]

    def m(self, j: int) -> int:
        out = 1
        for d in self.degrees()[: j + 1]:
            out *= d
        return out

    def to_json(self) -> list[dict]:
        return [m.to_json() for m in self.maps]

    @classmethod
    def from_json(cls, data) -> "P1Tower":
        if not isinstance(data, list):
            raise P1Error("a P1 tower is a list of maps")
        return cls([P1Map.from_json(m) for m in data])


def find_common_unramified_value(t: P1Tower, search_budget: int = 1000) -> mpq:
    """First value in the fixed enumeration of Q unramified for every composition."""
    if len(t) == 0:
        raise P1Error("empty tower")
    obstructions: dict[int, list[str]] = {j: [] for j in range(len(t))}
    for i, a in enumerate(rational_enumeration()):
        if i >= search_budget:
            raise BudgetExhausted(
                f"budget exhausted after {search_budget} candidates",
                {j: v for j, v in obstructions.items() if v},
            )
        bad = [j for j, phi in enumerate(t.compositions) if not is_unramified_over(phi, a)]
        if not bad:
            return a
        for j in bad:
            obstructions[j].append(str(a))
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class FiberReport:
    level: int
    a: mpq
    m: int
    fiber_poly: MPoly
    simple_zeroes: bool
    matches_eq_fact: bool

    @property
    def degree_ok(self) -> bool:
        return self.fiber_poly.degree(VAR) == self.m

    @property
    def passed(self) -> bool:
        return self.degree_ok and self.simple_zeroes and self.matches_eq_fact

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "a": str(self.a),
            "m": self.m,
            "fiber_poly": str(self.fiber_poly),
            "fiber_degree": self.fiber_poly.degree(VAR),
            "simple_zeroes": self.simple_zeroes,
            "matches_eq_fact": self.matches_eq_fact,
        }


def fiber_factorization_check(t: P1Tower, j: int, a) -> FiberReport:
    a = Q(a)
    phi = t.compositions[j]
    if not is_unramified_over(phi, a):
        raise P1Error(f"{a} is a ramification value of phi_{j} or lies under infinity")
    n = fiber_polynomial(phi, a)
    simple = squarefree_data(n, VAR)[1]
    coprime = poly_gcd(n, phi.den).is_constant()
    return FiberReport(j, a, t.m(j), n, simple, coprime)


@dataclass(frozen=True)
class PullbackDecomposition:
    zero_poly: MPoly
    Q: MPoly
    numerator_constant: bool

    def to_json(self) -> dict:
        return {"zero_poly": str(self.zero_poly), "Q": str(self.Q), "numerator_constant": self.numerator_constant}


def value_pullback_decomposition(R: P1Map, alpha) -> PullbackDecomposition:
    """Write ``R - alpha = N / Q`` with coprime ``N`` and ``Q``."""
    if degree(R) < 1:
        raise P1Error("constant map")
    n = fiber_polynomial(R, alpha)
    return PullbackDecomposition(n, R.den, n.is_constant())
