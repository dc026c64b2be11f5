"""Surfaces ``P(X, Y, Z) = 0`` monic in ``Z``, their discriminants and fibers.

The projection forgetting ``Z`` has ``d = deg_Z P`` distinct points over
every point off the discriminant curve and fewer over points on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from gmpy2 import mpq

from .algebra import MPoly, Q, discriminant, divides, rational_roots, squarefree_data, subresultant1
from .p1 import rational_enumeration

ROLE_KEYS = ("x", "y", "z")


class SurfaceError(ValueError):
    pass


class NotDiscriminantComponent(SurfaceError):
    pass


class SampleNotOnCurve(SurfaceError):
    pass


class HypersurfacePoly:
    """A polynomial monic in its ``z`` variable, of degree at least 2 there."""

    def __init__(self, poly: MPoly, roles: Mapping[str, str] | None = None):
        roles = dict(roles or {"x": "X", "y": "Y", "z": "Z"})
        if set(roles) != set(ROLE_KEYS):
            raise SurfaceError("roles must name exactly the keys x, y, z")
        names = tuple(roles[k] for k in ROLE_KEYS)
        if len(set(names)) != 3:
            raise SurfaceError("role variables must be distinct")
        if set(poly.vars) - set(names):
            raise SurfaceError(f"polynomial uses variables outside {names}")
        self.roles = roles
        self.vars = names
        self.poly = poly.with_vars(names)
        z = names[2]
        self.d = self.poly.degree(z)
        if self.d < 2:
            raise SurfaceError(f"degree in {z} must be at least 2")
        if self.poly.leading_coeff(z) != MPoly.const(1, names):
            raise SurfaceError(f"polynomial is not monic in {z}")

    @classmethod
    def parse(cls, text: str, roles: Mapping[str, str] | None = None) -> "HypersurfacePoly":
        roles = dict(roles or {"x": "X", "y": "Y", "z": "Z"})
        return cls(MPoly.parse(text, tuple(roles[k] for k in ROLE_KEYS)), roles)

    @property
    def base_vars(self) -> tuple[str, str]:
        return self.vars[:2]

    def fiber_polynomial(self, x0, y0) -> MPoly:
        x, y, z = self.vars
        return self.poly.specialize({x: Q(x0), y: Q(y0)}).with_vars((z,))

    def to_json(self) -> dict:
        return {"poly": self.poly.to_json(), "roles": dict(self.roles)}

    @classmethod
    def from_json(cls, data: Mapping) -> "HypersurfacePoly":
        if not isinstance(data, Mapping) or set(data) != {"poly", "roles"}:
            raise SurfaceError("surface object must have exactly the keys 'poly' and 'roles'")
        return cls(MPoly.from_json(data["poly"]), data["roles"])


@dataclass(frozen=True)
class DiscriminantLocus:
    disc: MPoly
    is_constant: bool

    @property
    def warning(self) -> str | None:
        if self.is_constant:
            return "constant discriminant: the polynomial cannot be irreducible"
        return None

    def to_json(self) -> dict:
        out = {"disc": str(self.disc), "is_constant": self.is_constant}
        if self.warning:
            out["warning"] = self.warning
        return out


def discriminant_locus(P: HypersurfacePoly) -> DiscriminantLocus:
    disc = discriminant(P.poly, P.vars[2]).with_vars(P.base_vars)
    return DiscriminantLocus(disc, disc.is_constant())


def fiber_cardinality(P: HypersurfacePoly, x0, y0) -> int:
    """Number of distinct points of the surface over ``(x0, y0)``."""
    part, _ = squarefree_data(P.fiber_polynomial(x0, y0), P.vars[2])
    return part.degree(P.vars[2])


def univariate_discriminant_at(P: HypersurfacePoly, x0, y0) -> mpq:
    """Discriminant of the specialised fiber polynomial (specialise first)."""
    return discriminant(P.fiber_polynomial(x0, y0), P.vars[2]).constant_value()


@dataclass(frozen=True)
class ComponentReport:
    delta: MPoly
    divides_disc: bool
    on_curve: list[tuple[tuple[mpq, mpq], int]]
    off_curve: list[tuple[tuple[mpq, mpq], int]]
    d: int
    double_root_pattern: bool

    @property
    def passed(self) -> bool:
        return (
            self.divides_disc
            and all(c < self.d for _, c in self.on_curve)
            and all(c == self.d for _, c in self.off_curve)
        )

    def to_json(self) -> dict:
        def pts(rows):
            return [{"point": [str(a), str(b)], "fiber": c} for (a, b), c in rows]

        return {
            "delta": str(self.delta),
            "divides_disc": self.divides_disc,
            "d": self.d,
            "on_curve": pts(self.on_curve),
            "off_curve": pts(self.off_curve),
            "pattern": "double root" if self.double_root_pattern else "higher multiplicity",
            "passed": self.passed,
        }


def _control_sample(disc: MPoly, x0: mpq, y0: mpq, budget: int = 200) -> tuple[mpq, mpq]:
    # nearest-ish point off the discriminant, moving along the diagonal and both axes
    for i, shift in enumerate(rational_enumeration()):
        if i >= budget:
            break
        if shift == 0:
            continue
        for pt in ((x0 + shift, y0 + shift), (x0 + shift, y0), (x0, y0 + shift)):
            if disc.evaluate(pt) != 0:
                return pt
    raise SurfaceError(f"no control sample off the discriminant near ({x0}, {y0})")


def ramification_over_component(
    P: HypersurfacePoly, delta: MPoly, samples: Sequence[tuple], controls: Sequence[tuple] | None = None
) -> ComponentReport:
    """Fiber-count evidence that the projection ramifies over ``delta = 0``."""
    delta = delta.with_vars(P.base_vars)
    loc = discriminant_locus(P)
    if not divides(delta, loc.disc):
        raise NotDiscriminantComponent(f"{delta} is not a discriminant component (disc = {loc.disc})")
    pts = [(Q(a), Q(b)) for a, b in samples]
    for p in pts:
        if delta.evaluate(p) != 0:
            raise SampleNotOnCurve(f"({p[0]}, {p[1]}) is not on {delta} = 0")
    if controls is None:
        ctrl = [_control_sample(loc.disc, *p) for p in pts]
    else:
        ctrl = [(Q(a), Q(b)) for a, b in controls]
        for p in ctrl:
            if loc.disc.evaluate(p) == 0:
                raise SurfaceError(f"control sample ({p[0]}, {p[1]}) lies on the discriminant")
    z = P.vars[2]
    psc = subresultant1(P.poly, P.poly.diff(z), z).with_vars(P.base_vars)
    return ComponentReport(
        delta,
        True,
        [(p, fiber_cardinality(P, *p)) for p in pts],
        [(p, fiber_cardinality(P, *p)) for p in ctrl],
        P.d,
        not divides(delta, psc),
    )


def find_points_on_curve(delta: MPoly, count: int, budget: int = 200) -> list[tuple[mpq, mpq]]:
    """Rational points of ``delta = 0`` found by fixing the first coordinate."""
    x, y = delta.vars
    swap = not delta.involves(y)
    a, b = (y, x) if swap else (x, y)
    found: list[tuple[mpq, mpq]] = []
    for i, v in enumerate(rational_enumeration()):
        if i >= budget:
            break
        spec = delta.specialize({a: v}).with_vars((b,))
        if spec.is_zero():
            continue
        for r in rational_roots(spec, b) if not spec.is_constant() else []:
            found.append((r, v) if swap else (v, r))
            if len(found) == count:
                return found
    raise SurfaceError(f"found only {len(found)} of {count} rational points on {delta} = 0 within budget")
