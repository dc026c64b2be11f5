"""Points, lines, linear automorphisms and rational self-maps of the projective plane."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from gmpy2 import mpq

from .algebra import (
    AlgebraError,
    MPoly,
    Q,
    exact_divide,
    ord_divide,
    poly_gcd,
    rational_roots,
    resultant,
)

PLANE_VARS = ("x0", "x1", "x2")


class DegenerateError(ValueError):
    """Collinear triples, singular matrices, maps that collapse to (0:0:0)."""


def _normalize_triple(values: Iterable) -> tuple[mpq, mpq, mpq]:
    vals = tuple(Q(v) for v in values)
    if len(vals) != 3:
        raise ValueError("projective coordinates need exactly three entries")
    for v in vals:
        if v:
            return tuple(x / v for x in vals)
    raise DegenerateError("(0:0:0) is not a projective point")


@dataclass(frozen=True)
class PPoint:
    coords: tuple[mpq, mpq, mpq]

    def __init__(self, *coords):
        if len(coords) == 1:
            coords = coords[0]
        object.__setattr__(self, "coords", _normalize_triple(coords))

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __str__(self) -> str:
        return "(" + ":".join(str(c) for c in self.coords) + ")"

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coords]

    @classmethod
    def from_json(cls, data) -> "PPoint":
        if not isinstance(data, list) or not all(isinstance(c, str) for c in data):
            raise ValueError("a point is a list of three 'p/q' strings")
        return cls(data)


@dataclass(frozen=True)
class PLine:
    """The line ``c0*x0 + c1*x1 + c2*x2 = 0``."""

    coeffs: tuple[mpq, mpq, mpq]

    def __init__(self, *coeffs):
        if len(coeffs) == 1:
            coeffs = coeffs[0]
        object.__setattr__(self, "coeffs", _normalize_triple(coeffs))

    @classmethod
    def through(cls, p: PPoint, q: PPoint) -> "PLine":
        if p == q:
            raise DegenerateError("a line needs two distinct points")
        return cls(cross(p.coords, q.coords))

    def contains(self, p: PPoint) -> bool:
        return sum(a * b for a, b in zip(self.coeffs, p.coords)) == 0

    def equation(self) -> MPoly:
        x = MPoly.gens(PLANE_VARS)
        return x[0] * self.coeffs[0] + x[1] * self.coeffs[1] + x[2] * self.coeffs[2]

    def basis(self) -> tuple[PPoint, PPoint]:
        """Two canonical distinct points spanning the line."""
        a = self.coeffs
        candidates = [(a[1], -a[0], 0), (a[2], 0, -a[0]), (0, a[2], -a[1])]
        pts = []
        for c in candidates:
            if any(c):
                p = PPoint(c)
                if p not in pts:
                    pts.append(p)
        return pts[0], pts[1]

    def __str__(self) -> str:
        return "[" + ":".join(str(c) for c in self.coeffs) + "]"

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data) -> "PLine":
        if not isinstance(data, list) or not all(isinstance(c, str) for c in data):
            raise ValueError("a line is a list of three 'p/q' strings")
        return cls(data)


def cross(u, v) -> tuple[mpq, mpq, mpq]:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def det3(m) -> mpq:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def collinear(a: PPoint, b: PPoint, c: PPoint) -> bool:
    return det3([a.coords, b.coords, c.coords]) == 0


@dataclass(frozen=True)
class LinAuto:
    """Invertible 3x3 matrix acting on column vectors of homogeneous coordinates."""

    matrix: tuple[tuple[mpq, mpq, mpq], ...]

    def __init__(self, matrix):
        m = tuple(tuple(Q(x) for x in row) for row in matrix)
        if len(m) != 3 or any(len(r) != 3 for r in m):
            raise ValueError("a linear automorphism is a 3x3 matrix")
        if det3(m) == 0:
            raise DegenerateError("singular matrix")
        object.__setattr__(self, "matrix", m)

    @property
    def det(self) -> mpq:
        return det3(self.matrix)

    def inverse(self) -> "LinAuto":
        m = self.matrix
        d = det3(m)
        cof = [[None] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(3):
                rows = [r for k, r in enumerate(m) if k != i]
                minor = [[x for k, x in enumerate(r) if k != j] for r in rows]
                cof[i][j] = (-1) ** (i + j) * (minor[0][0] * minor[1][1] - minor[0][1] * minor[1][0])
        # inverse = adjugate / det, adjugate = cofactor transposed
        return LinAuto([[cof[j][i] / d for j in range(3)] for i in range(3)])

    def apply(self, p: PPoint) -> PPoint:
        return PPoint(sum(a * x for a, x in zip(row, p.coords)) for row in self.matrix)

    def as_map(self) -> "PlaneRatMap":
        x = MPoly.gens(PLANE_VARS)
        comps = [x[0] * r[0] + x[1] * r[1] + x[2] * r[2] for r in self.matrix]
        return PlaneRatMap(comps)

    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self.matrix]


class Indeterminate:
    """Result of evaluating a rational map at one of its base points."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INDETERMINATE"


INDETERMINATE = Indeterminate()


class PlaneRatMap:
    """Rational self-map of P^2 given by three coprime forms of equal degree.

    Components are divided by their gcd and scaled so the leading coefficient
    (graded lex) of the first nonzero component is 1, so equal maps have equal
    components.
    """

    __slots__ = ("components",)

    def __init__(self, components: Sequence[MPoly]):
        comps = [c.with_vars(PLANE_VARS) if c.vars != PLANE_VARS else c for c in components]
        if len(comps) != 3:
            raise ValueError("a plane map has three components")
        if all(c.is_zero() for c in comps):
            raise DegenerateError("all components vanish identically")
        degs = {c.total_degree() for c in comps if not c.is_zero()}
        if len(degs) != 1 or not all(c.is_homogeneous() for c in comps):
            raise ValueError("components must be homogeneous of equal degree")
        g = MPoly.zero(PLANE_VARS)
        for c in comps:
            g = poly_gcd(g, c)
            if g.is_constant():
                break
        if not g.is_constant():
            comps = [exact_divide(c, g) for c in comps]
        if max(c.total_degree() for c in comps) < 1:
            raise DegenerateError("map is constant")
        lead = next(c for c in comps if not c.is_zero()).leading_term()[1]
        self.components = tuple(c.scale(1 / lead) for c in comps)

    @property
    def degree(self) -> int:
        return max(c.total_degree() for c in self.components)

    @classmethod
    def identity(cls) -> "PlaneRatMap":
        return cls(MPoly.gens(PLANE_VARS))

    def is_identity(self) -> bool:
        return self.components == MPoly.gens(PLANE_VARS)

    def __eq__(self, other) -> bool:
        return isinstance(other, PlaneRatMap) and self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __repr__(self) -> str:
        return "PlaneRatMap(" + " : ".join(str(c) for c in self.components) + ")"

    def to_json(self) -> dict:
        return {"degree": self.degree, "components": [c.to_json() for c in self.components]}

    @classmethod
    def from_json(cls, data) -> "PlaneRatMap":
        if not isinstance(data, dict) or set(data) - {"degree", "components"}:
            raise ValueError("plane map object needs 'components' and optional 'degree'")
        m = cls([MPoly.from_json(c) for c in data["components"]])
        if "degree" in data and data["degree"] != m.degree:
            raise ValueError(f"declared degree {data['degree']} but map has degree {m.degree}")
        return m


def std_quadratic() -> PlaneRatMap:
    x0, x1, x2 = MPoly.gens(PLANE_VARS)
    return PlaneRatMap([x1 * x2, x0 * x2, x0 * x1])


def evaluate(phi: PlaneRatMap, p: PPoint) -> PPoint | Indeterminate:
    vals = [c.evaluate(p.coords) for c in phi.components]
    if not any(vals):
        return INDETERMINATE
    return PPoint(vals)


def compose(outer: PlaneRatMap, inner: PlaneRatMap) -> PlaneRatMap:
    """``outer o inner``, with common factors removed."""
    comps = [c.substitute(list(inner.components), PLANE_VARS) for c in outer.components]
    if all(c.is_zero() for c in comps):
        raise DegenerateError("composite is identically (0:0:0)")
    return PlaneRatMap(comps)


def canonical_linauto(a: PPoint, b: PPoint, c: PPoint) -> LinAuto:
    """The matrix sending a, b, c to the coordinate points.

    It is the inverse of the matrix whose columns are the normalised
    coordinates of a, b and c.
    """
    cols = [a.coords, b.coords, c.coords]
    m = [[cols[j][i] for j in range(3)] for i in range(3)]
    if det3(m) == 0:
        raise DegenerateError(f"points {a}, {b}, {c} are collinear")
    return LinAuto(m).inverse()


def quadratic_transform(a: PPoint, b: PPoint, c: PPoint) -> PlaneRatMap:
    A = canonical_linauto(a, b, c)
    return compose(A.inverse().as_map(), compose(std_quadratic(), A.as_map()))


def linear_map(A: LinAuto) -> PlaneRatMap:
    return A.as_map()


# ---------------------------------------------------------------------------
# images of lines


@dataclass(frozen=True)
class PointImage:
    point: PPoint


@dataclass(frozen=True)
class CurveImage:
    equation: MPoly

    def degree(self) -> int:
        return self.equation.total_degree()


_PARAM_VARS = ("x0", "x1", "x2", "t")


def restrict_to_line(phi: PlaneRatMap, p: PPoint, q: PPoint) -> list[MPoly]:
    """Components of ``phi`` along ``t -> p + t*q`` as polynomials in ``t``.

    Common factors in ``t`` are removed; the result uses the variable tuple
    ``("t",)``.
    """
    t = MPoly.var("t", ("t",))
    line = [MPoly.const(p[i], ("t",)) + t * q[i] for i in range(3)]
    comps = [c.substitute(line, ("t",)) for c in phi.components]
    if all(c.is_zero() for c in comps):
        raise DegenerateError("map vanishes identically on the line")
    g = MPoly.zero(("t",))
    for c in comps:
        g = poly_gcd(g, c)
    if not g.is_constant():
        comps = [exact_divide(c, g) for c in comps]
    return comps


def image_of_line(phi: PlaneRatMap, L: PLine) -> PointImage | CurveImage:
    p, q = L.basis()
    comps = restrict_to_line(phi, p, q)
    # proportional components share their whole t-dependence, so after the gcd
    # is removed they are constants
    if all(c.is_constant() for c in comps):
        return PointImage(PPoint([c.constant_value() for c in comps]))
    lifted = [c.with_vars(_PARAM_VARS) for c in comps]
    x = MPoly.gens(_PARAM_VARS)[:3]
    pivot = next(i for i in range(3) if not comps[i].is_zero())
    j, k = [i for i in range(3) if i != pivot]
    g1 = x[pivot] * lifted[j] - x[j] * lifted[pivot]
    g2 = x[pivot] * lifted[k] - x[k] * lifted[pivot]
    if g1.degree("t") < 1 or g2.degree("t") < 1:
        # one coordinate ratio is constant, so the image is that line
        lin = g1 if g1.degree("t") < 1 else g2
        return CurveImage(lin.with_vars(PLANE_VARS).primitive())
    r = resultant(g1, g2, "t").with_vars(PLANE_VARS)
    if r.is_zero():
        raise AlgebraError("elimination resultant vanished identically")
    xp = MPoly.var(PLANE_VARS[pivot], PLANE_VARS)
    r = exact_divide(r, xp ** ord_divide(r, xp))
    eq = squarefree_form(r).primitive()
    check = eq.substitute(comps, ("t",))
    if not check.is_zero():
        raise AlgebraError("implicit equation does not vanish on the parametrisation")
    return CurveImage(eq)


def squarefree_form(f: MPoly) -> MPoly:
    """Squarefree part of a multivariate polynomial (product of distinct factors)."""
    g = f
    for v in f.vars:
        if f.involves(v):
            g = poly_gcd(g, f.diff(v))
    if g.is_constant():
        return f
    return exact_divide(f, g)


# ---------------------------------------------------------------------------
# base points


def base_points(phi: PlaneRatMap) -> list[PPoint]:
    """Rational points where all three components vanish (degree <= 3 only)."""
    if phi.degree > 3:
        raise ValueError("base points are only computed for maps of degree <= 3")
    found: list[PPoint] = []

    def add(pt):
        p = PPoint(pt)
        if p not in found and all(not c.evaluate(p.coords) for c in phi.components):
            found.append(p)

    # affine part x0 = 1
    aff_vars = ("x1", "x2")
    aff = [c.substitute([MPoly.const(1, aff_vars), *MPoly.gens(aff_vars)], aff_vars) for c in phi.components]
    aff = [a for a in aff if not a.is_zero()]
    for x1 in _candidate_values(aff, "x2", "x1"):
        fibre = [a.specialize({"x1": x1}) for a in aff]
        for x2 in _common_roots(fibre, "x2"):
            add((1, x1, x2))
    # line at infinity x0 = 0
    inf_vars = ("x2",)
    inf = [
        c.substitute([MPoly.zero(inf_vars), MPoly.const(1, inf_vars), MPoly.var("x2", inf_vars)], inf_vars)
        for c in phi.components
    ]
    for x2 in _common_roots(inf, "x2"):
        add((0, 1, x2))
    add((0, 0, 1))
    return sorted(found, key=lambda p: p.coords)


def _candidate_values(polys: list[MPoly], elim: str, keep: str) -> list[mpq]:
    """Rational values of ``keep`` over which the polynomials could share a root."""
    univ = MPoly.zero(polys[0].vars) if polys else None
    if not polys:
        raise DegenerateError("all components vanish on the affine chart")
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            f, g = polys[i], polys[j]
            if f.degree(elim) < 1 and g.degree(elim) < 1:
                r = poly_gcd(f, g)
            elif f.degree(elim) < 1:
                r = f
            elif g.degree(elim) < 1:
                r = g
            else:
                r = resultant(f, g, elim)
            if not r.is_zero():
                univ = poly_gcd(univ, r)
    if len(polys) == 1:
        univ = polys[0] if polys[0].degree(elim) < 1 else MPoly.zero(polys[0].vars)
    if univ.is_zero():
        raise AlgebraError("base locus is not finite")
    if univ.is_constant():
        return []
    uni = univ.with_vars((keep,))
    return rational_roots(uni, keep)


def _common_roots(polys: list[MPoly], var: str) -> list[mpq]:
    nonzero = [p for p in polys if not p.is_zero()]
    if not nonzero:
        raise AlgebraError("all components vanish along a coordinate line")
    g = MPoly.zero(nonzero[0].vars)
    for p in nonzero:
        g = poly_gcd(g, p)
    if g.is_constant():
        return []
    return rational_roots(g.with_vars((var,)), var)


def contracted_lines(phi: PlaneRatMap, pts: Sequence[PPoint]) -> list[tuple[PLine, PointImage | CurveImage]]:
    """Images of the lines through pairs of ``pts``."""
    out = []
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            L = PLine.through(pts[i], pts[j])
            out.append((L, image_of_line(phi, L)))
    return out
