"""Factor a blowup tower through quadratic transformations and verify the result.

Given centers ``p_0, ..., p_{n-1}`` (one plane point and points infinitely
near it) this builds triples ``(a_j, b_j, c_j)`` and quadratic transforms
``T_j`` so that ``chi = T_0 o ... o T_{n-1}`` sends a line onto every
exceptional curve ``E_{k+1}`` of the tower.

Curves of the source plane are pushed into the tower by lifting: a line is
thickened to an affine chart ``origin + t*direction + s*normal``, composed
with ``chi`` and carried through the inverse blowup relations chart by chart
as bivariate fractions, then restricted to ``s = 0``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import flint
from gmpy2 import mpq

from .algebra import MPoly, exact_divide, rational_roots, univariate_gcd
from .plane import (
    PLANE_VARS,
    CurveImage,
    PLine,
    PPoint,
    PlaneRatMap,
    collinear,
    compose,
    image_of_line,
    quadratic_transform,
)
from .tower import ChartPoint, Tower, canonical_point, curves_through, z_sets

SRC = ("s", "t")
T_VARS = ("t",)


class FactorizationError(RuntimeError):
    pass


class UnsupportedTower(ValueError):
    pass


class NotInChart(ArithmeticError):
    pass


class SamplingExhausted(FactorizationError):
    def __init__(self, message: str, violations: Mapping[str, int]):
        super().__init__(f"{message}; violated constraints: {dict(sorted(violations.items()))}")
        self.violations = dict(violations)


# ---------------------------------------------------------------------------
# lifting curves of the source plane into the tower


_E = (PPoint(1, 0, 0), PPoint(0, 1, 0), PPoint(0, 0, 1))


def _normal_to(p: PPoint, q: PPoint) -> PPoint:
    line = PLine.through(p, q)
    return next(e for e in _E if not line.contains(e))


class UniFrac:
    """Reduced ``num(t) / den(t)``."""

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: MPoly):
        if not num.is_zero():
            g = univariate_gcd(num, den, "t")
            if not g.is_constant():
                num, den = exact_divide(num, g), exact_divide(den, g)
        else:
            den = MPoly.const(1, T_VARS)
        self.num, self.den = num, den

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def degree(self) -> int:
        return max(self.num.degree("t"), self.den.degree("t"))

    def at_zero(self) -> mpq | None:
        """Value at t = 0, or None for a pole."""
        d = self.den.evaluate([0])
        return self.num.evaluate([0]) / d if d else None

    def __str__(self) -> str:
        return f"({self.num})/({self.den})"


_SRC_CTX = flint.fmpq_mpoly_ctx.get(SRC, "deglex")
_PLANE_CTX = flint.fmpq_mpoly_ctx.get(PLANE_VARS, "deglex")


def _fq(c) -> "flint.fmpq":
    c = mpq(c)
    return flint.fmpq(int(c.numerator), int(c.denominator))


def _flint_poly(p: MPoly, ctx) -> "flint.fmpq_mpoly":
    return ctx.from_dict({e: _fq(c) for e, c in p.terms.items()})


class _Frac:
    """Reduced fraction of FLINT polynomials in ``(s, t)``."""

    __slots__ = ("num", "den")

    def __init__(self, num, den, reduce: bool = True):
        if num.is_zero():
            den = _SRC_CTX.constant(1)
        elif reduce:
            g = num.gcd(den)
            if not g.is_constant():
                num, den = num / g, den / g
        self.num, self.den = num, den

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def minus(self, c: mpq) -> "_Frac":
        # gcd(num - c*den, den) = gcd(num, den) = 1
        return _Frac(self.num - self.den * _fq(c), self.den, reduce=False)

    def over(self, other: "_Frac") -> "_Frac":
        g1 = self.num.gcd(other.num)
        g2 = self.den.gcd(other.den)
        return _Frac((self.num / g1) * (other.den / g2), (self.den / g2) * (other.num / g1), reduce=False)

    def value(self, s, t) -> mpq | None:
        d = self.den(_fq(s), _fq(t))
        if d == 0:
            return None
        v = self.num(_fq(s), _fq(t)) / d
        return mpq(int(v.p), int(v.q))

    def partial(self, var: str, s, t) -> mpq:
        n, d = self.num, self.den
        pt = (_fq(s), _fq(t))
        v = (n.derivative(var)(*pt) * d(*pt) - n(*pt) * d.derivative(var)(*pt)) / d(*pt) ** 2
        return mpq(int(v.p), int(v.q))


def _to_t_poly(p) -> MPoly:
    return MPoly._raw(T_VARS, {(int(e[1]),): mpq(int(c.p), int(c.q)) for e, c in p.to_dict().items()})


def _restrict(r: _Frac) -> UniFrac | None:
    den = r.den.subs({"s": 0})
    if den.is_zero():
        return None
    return UniFrac(_to_t_poly(r.num.subs({"s": 0})), _to_t_poly(den))


class Lift:
    """``chi`` on the chart ``origin + t*direction + s*normal``, lifted into tower charts."""

    def __init__(self, tower: Tower, chi: PlaneRatMap, origin: PPoint, direction: PPoint, normal: PPoint | None = None):
        if normal is None:
            normal = _normal_to(origin, direction)
        self.tower = tower
        self.frame = (origin, direction, normal)
        s, t = _SRC_CTX.gens()
        coords = [_fq(origin[i]) + t * _fq(direction[i]) + s * _fq(normal[i]) for i in range(3)]
        self._comps = [_flint_poly(c, _PLANE_CTX).compose(*coords, ctx=_SRC_CTX) for c in chi.components]
        self._cache: dict[str, tuple[_Frac, _Frac] | None] = {}

    def fractions(self, chart_id: str) -> tuple[_Frac, _Frac]:
        if chart_id not in self._cache:
            self._cache[chart_id] = self._compute(chart_id)
        out = self._cache[chart_id]
        if out is None:
            raise NotInChart(chart_id)
        return out

    def _compute(self, chart_id: str):
        chart = self.tower.chart(chart_id)
        if chart.parent is None:
            m, a, b = self.tower.base_index
            if self._comps[m].is_zero():
                return None
            return _Frac(self._comps[a], self._comps[m]), _Frac(self._comps[b], self._comps[m])
        try:
            X, Y = self.fractions(chart.parent)
        except NotInChart:
            return None
        cx, cy = chart.center
        dx, dy = X.minus(cx), Y.minus(cy)
        if chart.kind == "A":
            return (dx, dy.over(dx)) if not dx.is_zero() else None
        return (dx.over(dy), dy) if not dy.is_zero() else None

    def restricted(self, chart_id: str) -> tuple[UniFrac, UniFrac] | None:
        """The lifted line in the chart, or None if it runs off the chart."""
        try:
            X, Y = self.fractions(chart_id)
        except NotInChart:
            return None
        u, v = _restrict(X), _restrict(Y)
        if u is None or v is None:
            return None
        return u, v

    def point_at_origin(self, chart_ids: Sequence[str]) -> ChartPoint | None:
        """Canonical image of ``origin`` along the line, in the first chart containing it."""
        for cid in chart_ids:
            r = self.restricted(cid)
            if r is None:
                continue
            vals = (r[0].at_zero(), r[1].at_zero())
            if None not in vals:
                return canonical_point(self.tower, ChartPoint(cid, vals))
        return None

    def regular_denominators(self, chart_id: str) -> MPoly | None:
        """Product of the coordinate denominators restricted to the line."""
        try:
            X, Y = self.fractions(chart_id)
        except NotInChart:
            return None
        d = (X.den * Y.den).subs({"s": 0})
        return None if d.is_zero() else _to_t_poly(d)

    def is_local_iso_at_origin(self, chart_id: str) -> bool:
        """Regular with invertible Jacobian at ``origin`` (s = t = 0)."""
        try:
            X, Y = self.fractions(chart_id)
        except NotInChart:
            return False
        if X.value(0, 0) is None or Y.value(0, 0) is None:
            return False
        jac = X.partial("s", 0, 0) * Y.partial("t", 0, 0) - X.partial("t", 0, 0) * Y.partial("s", 0, 0)
        return jac != 0


def direction_charts(level: int) -> list[str]:
    return [f"L{level}A", f"L{level}B"]


def direction_point(tower: Tower, chi: PlaneRatMap, a: PPoint, other: PPoint, level: int) -> ChartPoint | None:
    """Point of ``E_level`` hit by the lift of the line ``a other`` at ``a``."""
    return Lift(tower, chi, a, other).point_at_origin(direction_charts(level))


def maps_onto_exceptional(tower: Tower, chi: PlaneRatMap, line: PLine, level: int) -> tuple[bool, bool, str]:
    """(in exceptional locus, non-constant, detail) for the lift of ``line`` into chart ``L<level>A``."""
    p, q = line.basis()
    r = Lift(tower, chi, p, q).restricted(f"L{level}A")
    if r is None:
        return False, False, f"line {line} leaves chart L{level}A"
    u, v = r
    return u.is_zero(), not v.is_constant(), f"u = {u}, v = {v}"


# ---------------------------------------------------------------------------
# the line bc under T_abc, lifted to the blowup at a


@dataclass
class LineImageReport:
    domain_ok: bool
    iso_ok: bool
    b_image: ChartPoint | None
    c_image: ChartPoint | None
    dir_ab: ChartPoint | None
    dir_ac: ChartPoint | None
    details: dict = field(default_factory=dict)

    @property
    def tangent_ok(self) -> bool:
        return self.b_image is not None and self.b_image == self.dir_ac and self.c_image == self.dir_ab

    @property
    def swapped_assignment_fails(self) -> bool:
        """The reading ``b -> direction of ab`` must be rejected."""
        return not (self.b_image == self.dir_ab and self.c_image == self.dir_ac)

    @property
    def passed(self) -> bool:
        return self.domain_ok and self.iso_ok and self.tangent_ok and self.swapped_assignment_fails

    def to_json(self) -> dict:
        return {
            "domain_ok": self.domain_ok,
            "iso_ok": self.iso_ok,
            "tangent_ok": self.tangent_ok,
            "swapped_assignment_fails": self.swapped_assignment_fails,
            "b_image": _cp_json(self.b_image),
            "c_image": _cp_json(self.c_image),
            "direction_ab": _cp_json(self.dir_ab),
            "direction_ac": _cp_json(self.dir_ac),
            **self.details,
        }


def _cp_json(p: ChartPoint | None):
    if p is None:
        return None
    return {"chart": p.chart, "coords": [str(c) for c in p.coords]}


def _only_root_zero(poly: MPoly) -> bool:
    return len(poly.terms) == 1


def check_transform_on_line(a: PPoint, b: PPoint, c: PPoint) -> LineImageReport:
    """Lift ``T_abc`` on the line ``bc`` to the blowup at ``a`` and check where it lands, by chart computation."""
    from .tower import Center

    if collinear(a, b, c):
        raise ValueError("the triple is collinear")
    tower = Tower.from_centers([Center(0, a)])
    T = quadratic_transform(a, b, c)
    lift = Lift(tower, T, b, c, a)  # t = 0 is b, t = oo is c
    # (1) points of bc other than b, c where neither chart is regular
    bad = None
    for cid in ("L1A", "L1B"):
        den = lift.regular_denominators(cid)
        if den is None:
            continue
        bad = den if bad is None else univariate_gcd(bad, den, "t")
    domain_ok = bad is not None and (bad.is_constant() or _only_root_zero(bad))
    # (2) the restriction lands in E and is a degree-one map onto it
    r = lift.restricted("L1A")
    iso_ok = r is not None and r[0].is_zero() and r[1].degree() == 1
    identity = PlaneRatMap.identity()
    b_img = lift.point_at_origin(["L1A", "L1B"])
    c_img = Lift(tower, T, c, b, a).point_at_origin(["L1A", "L1B"])
    return LineImageReport(
        domain_ok,
        iso_ok,
        b_img,
        c_img,
        direction_point(tower, identity, a, b, 1),
        direction_point(tower, identity, a, c, 1),
        {"restriction": None if r is None else [str(r[0]), str(r[1])]},
    )


# ---------------------------------------------------------------------------
# the factorization


@dataclass
class FactorizationResult:
    triples: list[tuple[PPoint, PPoint, PPoint]]
    transforms: list[PlaneRatMap]
    chi: PlaneRatMap
    line_assignment: dict[int, PLine]
    # points of E_{j+1} that b_j and c_j are sent to
    tangent_images: list[tuple[ChartPoint, ChartPoint]]
    seed: int = 0

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "triples": [[p.to_json() for p in t] for t in self.triples],
            "transforms": [T.to_json() for T in self.transforms],
            "chi": self.chi.to_json(),
            "line_assignment": {str(k): L.to_json() for k, L in sorted(self.line_assignment.items())},
            "tangent_images": [{"b": _cp_json(b), "c": _cp_json(c)} for b, c in self.tangent_images],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "FactorizationResult":
        def cp(d):
            return ChartPoint(d["chart"], d["coords"])

        return cls(
            [tuple(PPoint.from_json(p) for p in t) for t in data["triples"]],
            [PlaneRatMap.from_json(T) for T in data["transforms"]],
            PlaneRatMap.from_json(data["chi"]),
            {int(k): PLine.from_json(v) for k, v in data["line_assignment"].items()},
            [(cp(d["b"]), cp(d["c"])) for d in data["tangent_images"]],
            int(data.get("seed", 0)),
        )


def _center_points(tower: Tower) -> list[ChartPoint]:
    return [canonical_point(tower, tower.center_point(j)) for j in range(tower.n)]


def carrier_index(tower: Tower, p: ChartPoint) -> list[int]:
    """Exceptional curves through a center, as carrier indices ``k`` (curve ``E_{k+1}``)."""
    return [k - 1 for k in curves_through(tower, p)]


def locate_on_carrier(tower: Tower, chi: PlaneRatMap, carrier: PLine, target: ChartPoint) -> PPoint:
    """The unique point of ``carrier`` that ``chi`` (lifted) sends to ``target``."""
    p0, p1 = carrier.basis()
    lift = Lift(tower, chi, p0, p1)
    r = lift.restricted(target.chart)
    if r is None:
        raise FactorizationError(f"carrier {carrier} does not meet chart {target.chart}")
    eqs = [f.num - f.den.scale(val) for f, val in zip(r, target.coords)]
    eqs = [e for e in eqs if not e.is_zero()]
    if not eqs:
        raise FactorizationError(f"carrier {carrier} is contracted onto {target}")
    g = eqs[0]
    for e in eqs[1:]:
        g = univariate_gcd(g, e, "t")
    if g.degree("t") > 1:
        raise FactorizationError(f"restriction to carrier {carrier} is not of degree one (gcd {g})")
    sols = []
    if g.degree("t") == 1:
        (root,) = rational_roots(g, "t")
        sols.append(PPoint([p0[i] + root * p1[i] for i in range(3)]))
    if Lift(tower, chi, p1, p0).point_at_origin([target.chart]) == target:
        sols.append(p1)
    if len(sols) != 1:
        raise FactorizationError(f"expected one preimage of {target} on {carrier}, found {len(sols)}")
    return sols[0]


class _Sampler:
    def __init__(self, rng: random.Random):
        self.rng = rng
        self.draws = 0

    def scalar(self) -> mpq:
        h = 2 + self.draws // 40
        return mpq(self.rng.randint(-h, h), self.rng.randint(1, 1 + h // 2))

    def free_point(self) -> PPoint:
        while True:
            v = [self.scalar() for _ in range(3)]
            if any(v):
                return PPoint(v)

    def point_on(self, line: PLine) -> PPoint:
        p0, p1 = line.basis()
        r = self.scalar()
        return PPoint([p0[i] + r * p1[i] for i in range(3)])


def _common_point(lines: Sequence[PLine]) -> PPoint | None:
    from .plane import cross

    pt = PPoint(cross(lines[0].coeffs, lines[1].coeffs))
    return pt if all(L.contains(pt) for L in lines) else None


@dataclass
class _State:
    chi: PlaneRatMap
    carriers: dict[int, PLine]
    triples: list
    transforms: list
    tangent: list
    used_lines: list


def factor_tower(tower: Tower, seed: int = 0, budget: int = 4000, tries_per_level: int = 12) -> FactorizationResult:
    """Build quadratic transforms whose composite maps a line onto each exceptional curve."""
    n = tower.n
    if n == 0:
        return FactorizationResult([], [], PlaneRatMap.identity(), {}, [], seed)
    centers = _center_points(tower)
    for j in range(1, n):
        if not curves_through(tower, centers[j]):
            raise UnsupportedTower(f"center p_{j} is not infinitely near p_0; split the tower first")
    zs = z_sets(tower)
    sampler = _Sampler(random.Random(seed))
    violations: dict[str, int] = {}

    def note(reason: str) -> None:
        violations[reason] = violations.get(reason, 0) + 1

    def step(j: int, st: _State) -> _State | None:
        if j == n:
            return st
        if j == 0:
            a = tower.base_to_plane(centers[0].coords)
        else:
            ks = carrier_index(tower, centers[j])
            a = locate_on_carrier(tower, st.chi, st.carriers[max(ks)], centers[j])
            if any(not st.carriers[k].contains(a) for k in ks):
                note("carriers disagree at a_j")
                return None
            other = st.carriers[max(ks)].basis()
            other = other[1] if other[0] == a else other[0]
            if not Lift(tower, st.chi, a, other).is_local_iso_at_origin(centers[j].chart):
                note("phi_j not a local isomorphism at a_j")
                return None
        accepted = 0
        while accepted < tries_per_level:
            if sampler.draws >= budget:
                raise SamplingExhausted(f"budget of {budget} draws exhausted at level {j}", violations)
            sampler.draws += 1
            cand = _draw_pair(sampler, a, st.carriers)
            if cand is None:
                note("no admissible incidence pattern")
                continue
            b, c = cand
            reason = _reject_reason(tower, st, zs, j, a, b, c)
            if reason:
                note(reason)
                continue
            accepted += 1
            nxt = _advance(tower, st, j, a, b, c)
            if isinstance(nxt, str):
                note(nxt)
                continue
            done = step(j + 1, nxt)
            if done is not None:
                return done
        return None

    init = _State(PlaneRatMap.identity(), {}, [], [], [], [])
    final = step(0, init)
    if final is None:
        raise SamplingExhausted("search exhausted without a valid factorization", violations)
    return FactorizationResult(
        final.triples,
        final.transforms,
        final.chi,
        {k + 1: L for k, L in sorted(final.carriers.items())},
        final.tangent,
        seed,
    )


def _draw_pair(sampler: _Sampler, a: PPoint, carriers: Mapping[int, PLine]) -> tuple[PPoint, PPoint] | None:
    """Random (b, c) putting exactly one of b, c on every carrier that misses a."""
    rest = [L for _, L in sorted(carriers.items()) if not L.contains(a)]
    patterns = []
    for mask in range(1 << len(rest)):
        groups = ([L for i, L in enumerate(rest) if mask >> i & 1], [L for i, L in enumerate(rest) if not mask >> i & 1])
        if all(len(g) < 2 or _common_point(g) is not None for g in groups):
            patterns.append(groups)
    if not patterns:
        return None
    groups = sampler.rng.choice(patterns)
    pts = []
    for g in groups:
        if not g:
            pts.append(sampler.free_point())
        elif len(g) == 1:
            pts.append(sampler.point_on(g[0]))
        else:
            pts.append(_common_point(g))
    return pts[0], pts[1]


def _reject_reason(tower: Tower, st: _State, zs, j: int, a: PPoint, b: PPoint, c: PPoint) -> str | None:
    if collinear(a, b, c):
        return "collinear triple"
    ab, ac = PLine.through(a, b), PLine.through(a, c)
    previous = st.used_lines + list(st.carriers.values())
    if ab in previous or ac in previous:
        return "line a_j b_j or a_j c_j already used"
    for L in st.carriers.values():
        if sum(L.contains(p) for p in (a, b, c)) != 1:
            return "carrier would stop being a line"
    forbidden = zs.get(j + 1, [])
    for other in (b, c):
        d = direction_point(tower, st.chi, a, other, j + 1)
        if d is None:
            return "direction not computable"
        if d in forbidden:
            return "direction in Z-set"
    return None


def _advance(tower: Tower, st: _State, j: int, a: PPoint, b: PPoint, c: PPoint) -> _State | str:
    T = quadratic_transform(a, b, c)
    chi = compose(st.chi, T)
    carriers = {}
    for k, L in st.carriers.items():
        img = image_of_line(T, L)
        if not isinstance(img, CurveImage) or img.degree() != 1:
            return "carrier image is not a line"
        carriers[k] = PLine(*[img.equation.terms.get(e, mpq(0)) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))])
    bc = PLine.through(b, c)
    carriers[j] = bc
    in_e, moving, _ = maps_onto_exceptional(tower, chi, bc, j + 1)
    if not (in_e and moving):
        return "line b_j c_j does not map onto E_{j+1}"
    b_img = Lift(tower, chi, b, c).point_at_origin(direction_charts(j + 1))
    c_img = Lift(tower, chi, c, b).point_at_origin(direction_charts(j + 1))
    return _State(
        chi,
        carriers,
        st.triples + [(a, b, c)],
        st.transforms + [T],
        st.tangent + [(b_img, c_img)],
        st.used_lines + [bc],
    )


# ---------------------------------------------------------------------------
# verification


@dataclass
class Clause:
    level: int
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        out = {"level": self.level, "clause": self.name, "passed": self.passed}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class VerificationReport:
    clauses: list[Clause]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses)

    def failures(self) -> list[Clause]:
        return [c for c in self.clauses if not c.passed]

    def to_json(self) -> dict:
        return {"passed": self.passed, "clauses": [c.to_json() for c in self.clauses]}


def _line_from_equation(eq: MPoly) -> PLine:
    return PLine(*[eq.terms.get(e, mpq(0)) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))])


def verify_factorization(tower: Tower, result: FactorizationResult) -> VerificationReport:
    n = tower.n
    out: list[Clause] = []

    def add(level, name, ok, detail=""):
        out.append(Clause(level, name, bool(ok), detail))

    if n == 0:
        add(0, "identity", result.chi.is_identity() and not result.triples)
        return VerificationReport(out)
    add(0, "triple count", len(result.triples) == n == len(result.transforms) == len(result.tangent_images))
    if out[-1].passed is False:
        return VerificationReport(out)
    centers = _center_points(tower)
    zs = z_sets(tower)
    chi = PlaneRatMap.identity()
    carriers: dict[int, PLine] = {}
    used: list[PLine] = []
    for j, ((a, b, c), T) in enumerate(zip(result.triples, result.transforms)):
        add(j, "non-collinear", not collinear(a, b, c))
        if collinear(a, b, c):
            continue
        add(j, "transform matches triple", T == quadratic_transform(a, b, c))
        add(j, "involution", compose(T, T).is_identity())
        ab, ac = PLine.through(a, b), PLine.through(a, c)
        prev = used + list(carriers.values())
        add(j, "lines differ from earlier lines", ab not in prev and ac not in prev)
        if j == 0:
            add(j, "a maps to center", a == tower.base_to_plane(centers[0].coords))
        else:
            img = Lift(tower, chi, a, b).point_at_origin([centers[j].chart])
            add(j, "a maps to center", img == centers[j], f"image {img}, center {centers[j]}")
        forbidden = zs.get(j + 1, [])
        dab = direction_point(tower, chi, a, b, j + 1)
        dac = direction_point(tower, chi, a, c, j + 1)
        add(j, "directions avoid Z-set", dab is not None and dac is not None and dab not in forbidden and dac not in forbidden)
        nxt = compose(chi, T)
        b_img = Lift(tower, nxt, b, c).point_at_origin(direction_charts(j + 1))
        c_img = Lift(tower, nxt, c, b).point_at_origin(direction_charts(j + 1))
        rb, rc = result.tangent_images[j]
        add(
            j,
            "tangent directions",
            b_img == rb == dac and c_img == rc == dab,
            f"b -> {b_img} (recorded {rb}, direction of ac {dac}); c -> {c_img} (recorded {rc}, direction of ab {dab})",
        )
        for k, L in list(carriers.items()):
            img = image_of_line(T, L)
            if isinstance(img, CurveImage) and img.degree() == 1:
                carriers[k] = _line_from_equation(img.equation)
            else:
                add(j, "carrier stays a line", False, f"carrier of E_{k + 1}")
                carriers.pop(k)
        carriers[j] = PLine.through(b, c)
        used.append(carriers[j])
        chi = nxt
    add(n, "chi is the composite", chi == result.chi)
    add(n, "degree bound", result.chi.degree <= 2**n, f"degree {result.chi.degree}")
    lines = list(result.line_assignment.values())
    add(n, "assignment injective", len(set(lines)) == len(lines) and set(result.line_assignment) == set(range(1, n + 1)))
    for i in range(1, n + 1):
        L = result.line_assignment.get(i)
        if L is None:
            add(i, "line assigned", False)
            continue
        in_e, moving, detail = maps_onto_exceptional(tower, result.chi, L, i)
        add(i, "lies in exceptional curve", in_e, detail)
        add(i, "not contracted", moving, detail)
    return VerificationReport(out)
