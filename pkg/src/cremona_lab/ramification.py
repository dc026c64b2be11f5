"""Jacobians, contraction tests and ramification indices of planar rational maps.

Maps are written in affine chart coordinates as pairs of reduced rational
functions.  The ramification index of ``phi`` along an irreducible curve
``D = V(delta)`` is ``1 + ord_D Jac(phi)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .algebra import MPoly, RationalFunction, divides, ord_divide, squarefree_data


class RamificationError(ValueError):
    pass


class ChartSwitchRequired(RamificationError):
    """The curve lies in the pole divisor of a component; use another chart."""


class ContractedCurve(RamificationError):
    pass


class DegenerateJacobian(RamificationError):
    pass


class ChainBroken(RamificationError):
    def __init__(self, level: int, message: str):
        super().__init__(f"level {level}: {message}")
        self.level = level


class AffineRatMap:
    """A rational map of the affine plane, ``(x, y) -> (f, g)``."""

    __slots__ = ("components",)

    def __init__(self, components: Sequence):
        if len(components) != 2:
            raise RamificationError("affine plane maps have two components")
        comps = []
        for c in components:
            if isinstance(c, MPoly):
                c = RationalFunction(c)
            comps.append(c)
        if comps[0].vars != comps[1].vars or len(comps[0].vars) != 2:
            raise RamificationError("components must share two variables")
        self.components: tuple[RationalFunction, RationalFunction] = tuple(comps)

    @classmethod
    def parse(cls, f: str, g: str, vars: Sequence[str] = ("x", "y")) -> "AffineRatMap":
        return cls([RationalFunction.parse(f, vars), RationalFunction.parse(g, vars)])

    @classmethod
    def identity(cls, vars: Sequence[str] = ("x", "y")) -> "AffineRatMap":
        return cls([RationalFunction.var(v, vars) for v in vars])

    @property
    def vars(self) -> tuple[str, ...]:
        return self.components[0].vars

    def __eq__(self, other) -> bool:
        return isinstance(other, AffineRatMap) and self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __repr__(self) -> str:
        return f"AffineRatMap({self.components[0]}, {self.components[1]})"

    def to_json(self) -> list[dict]:
        return [c.to_json() for c in self.components]

    @classmethod
    def from_json(cls, data) -> "AffineRatMap":
        if not isinstance(data, list) or len(data) != 2:
            raise RamificationError("affine map must be a list of two {num, den} objects")
        return cls([RationalFunction.from_json(c) for c in data])


def compose(outer: AffineRatMap, inner: AffineRatMap) -> AffineRatMap:
    """``outer o inner``; the result lives in the variables of ``inner``."""
    return AffineRatMap([c.substitute(list(inner.components)) for c in outer.components])


class CurveGerm:
    """The curve ``delta = 0``, irreducibility asserted by the caller."""

    __slots__ = ("delta",)

    def __init__(self, delta: MPoly, asserted_irreducible: bool = True):
        if not asserted_irreducible:
            raise RamificationError("germs must be asserted irreducible")
        if delta.is_constant():
            raise RamificationError("a curve equation cannot be constant")
        if len(delta.vars) != 2:
            raise RamificationError("curve equations live in two chart variables")
        if not _restricted_squarefree(delta):
            raise RamificationError(f"{delta} is not squarefree")
        self.delta = delta.primitive()

    @classmethod
    def parse(cls, text: str, vars: Sequence[str] = ("x", "y")) -> "CurveGerm":
        return cls(MPoly.parse(text, vars))

    def __repr__(self) -> str:
        return f"CurveGerm({self.delta})"

    def to_json(self) -> dict:
        out = self.delta.to_json()
        out["asserted_irreducible"] = True
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "CurveGerm":
        if not isinstance(data, Mapping) or data.get("asserted_irreducible") is not True:
            raise RamificationError("germ objects need \"asserted_irreducible\": true")
        poly = {k: v for k, v in data.items() if k != "asserted_irreducible"}
        return cls(MPoly.from_json(poly))


def _restricted_squarefree(delta: MPoly) -> bool:
    # a square factor survives restriction to every line, while a squarefree
    # delta stays squarefree on all but finitely many lines
    t = MPoly.var("t", ("t",))
    for a, b in ((3, 7), (-5, 2), (11, -4), (2, 13), (-7, -9)):
        r = delta.substitute([t + b, t * a - 2 * b], ("t",))
        if r.degree("t") == delta.total_degree() and squarefree_data(r, "t")[1]:
            return True
    return False


def _check_vars(phi: AffineRatMap, D: CurveGerm) -> None:
    if phi.vars != D.delta.vars:
        raise RamificationError(f"map variables {phi.vars} differ from curve variables {D.delta.vars}")


def jacobian_det(phi: AffineRatMap) -> RationalFunction:
    x, y = phi.vars
    f, g = phi.components
    return f.diff(x) * g.diff(y) - f.diff(y) * g.diff(x)


def _constant_along(u: RationalFunction, delta: MPoly) -> bool:
    x, y = delta.vars
    f, g = u.num, u.den
    wx = g * f.diff(x) - f * g.diff(x)
    wy = g * f.diff(y) - f * g.diff(y)
    return divides(delta, wx * delta.diff(y) - wy * delta.diff(x))


def _pole_check(phi: AffineRatMap, D: CurveGerm) -> None:
    for i, c in enumerate(phi.components):
        if not c.den.is_constant() and divides(D.delta, c.den):
            raise ChartSwitchRequired(f"curve {D.delta} lies in the pole divisor of component {i}")


def is_contracted(phi: AffineRatMap, D: CurveGerm) -> bool:
    """True iff both components are constant along D."""
    _check_vars(phi, D)
    _pole_check(phi, D)
    return all(_constant_along(c, D.delta) for c in phi.components)


def ram_index(phi: AffineRatMap, D: CurveGerm) -> int:
    if is_contracted(phi, D):
        raise ContractedCurve(f"{D.delta} is contracted to a point")
    jac = jacobian_det(phi)
    if jac.is_zero():
        raise DegenerateJacobian("Jacobian determinant vanishes identically")
    if not jac.den.is_constant() and ord_divide(jac.den, D.delta) > 0:
        raise ChartSwitchRequired(f"Jacobian has a pole along {D.delta}")
    return 1 + ord_divide(jac.num, D.delta)


def is_strongly_ramified(phi: AffineRatMap, D: CurveGerm) -> bool:
    return ram_index(phi, D) > 1


def image_in_curve(phi: AffineRatMap, D1: CurveGerm, D2: CurveGerm) -> bool:
    """True iff phi maps D1 into D2."""
    _check_vars(phi, D1)
    _pole_check(phi, D1)
    if is_contracted(phi, D1):
        raise ContractedCurve(f"{D1.delta} is contracted to a point")
    pulled = RationalFunction(D2.delta.with_vars(D2.delta.vars)).substitute(list(phi.components))
    return divides(D1.delta, pulled.num)


@dataclass(frozen=True)
class MultiplicativityReport:
    e_inner: int
    e_outer: int
    e_composite: int

    @property
    def equal(self) -> bool:
        return self.e_composite == self.e_inner * self.e_outer

    def to_json(self) -> dict:
        return {
            "e_inner": self.e_inner,
            "e_outer": self.e_outer,
            "e_composite": self.e_composite,
            "equal": self.equal,
        }


def check_multiplicativity(phi: AffineRatMap, psi: AffineRatMap, D1: CurveGerm, D2: CurveGerm) -> MultiplicativityReport:
    """Compare ``e(psi o phi, D1)`` with ``e(psi, D2) * e(phi, D1)``."""
    if not image_in_curve(phi, D1, D2):
        raise ChainBroken(0, "phi does not map D1 into D2")
    e_inner = ram_index(phi, D1)
    e_outer = ram_index(psi, D2)
    e_comp = ram_index(compose(psi, phi), D1)
    return MultiplicativityReport(e_inner, e_outer, e_comp)


@dataclass(frozen=True)
class LedgerReport:
    indices: tuple[int, ...]
    composite: int

    @property
    def product(self) -> int:
        out = 1
        for e in self.indices:
            out *= e
        return out

    @property
    def bound_holds(self) -> bool:
        return self.composite >= self.product

    @property
    def equal(self) -> bool:
        return self.composite == self.product

    def to_json(self) -> dict:
        return {
            "indices": list(self.indices),
            "product": self.product,
            "composite": self.composite,
            "bound_holds": self.bound_holds,
            "equal": self.equal,
        }


def tower_ledger(maps: Sequence[AffineRatMap], germs: Sequence[CurveGerm]) -> LedgerReport:
    """Per-level indices of a chain ``germs[0] -> germs[1] -> ...``.

    ``maps[j]`` sends ``germs[j]`` into ``germs[j + 1]``; ``maps[0]`` is applied
    first, so the composite is ``maps[-1] o ... o maps[0]``.
    """
    if not maps:
        raise RamificationError("empty chain")
    if len(germs) != len(maps) + 1:
        raise RamificationError("need one more germ than maps")
    indices = []
    for j, (phi, D) in enumerate(zip(maps, germs)):
        try:
            ok = image_in_curve(phi, D, germs[j + 1])
        except RamificationError as exc:
            raise ChainBroken(j, str(exc)) from exc
        if not ok:
            raise ChainBroken(j, f"map does not send {D.delta} into {germs[j + 1].delta}")
        indices.append(ram_index(phi, D))
    composite = maps[0]
    for phi in maps[1:]:
        composite = compose(phi, composite)
    return LedgerReport(tuple(indices), ram_index(composite, germs[0]))
