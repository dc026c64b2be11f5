"""Chart-level model of a sequence of point blowups over the projective plane.

The base chart is the affine chart of P^2 containing the first center,
with coordinates ``(x, y)``.  Blowing up a point ``(cx, cy)`` of a chart
adds two charts with coordinates ``(u<j>, v<j>)``::

    A:  (u, v) -> (cx + u,     cy + u*v)     exceptional curve u = 0
    B:  (u, v) -> (cx + u*v,   cy + v)       exceptional curve v = 0

Chart ids are ``"L0"`` for the base chart and ``"L<j>A"`` / ``"L<j>B"``
for the charts created by the ``j``-th blowup.  Every chart stores the
equations of the strict transforms of all exceptional curves that meet it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

from .algebra import MPoly, Q, exact_divide, ord_divide, rational_roots, squarefree_data
from .plane import PLANE_VARS, PPoint

BASE = "L0"
BASE_VARS = ("x", "y")


class TowerError(ValueError):
    pass


class UnsupportedField(TowerError):
    """An intersection point is not defined over the rationals."""


@dataclass(frozen=True)
class ChartPoint:
    chart: str
    coords: tuple[mpq, mpq]

    def __init__(self, chart: str, coords: Sequence):
        object.__setattr__(self, "chart", chart)
        c = tuple(Q(x) for x in coords)
        if len(c) != 2:
            raise TowerError("chart points have two affine coordinates")
        object.__setattr__(self, "coords", c)

    def __str__(self) -> str:
        return f"{self.chart}({self.coords[0]}, {self.coords[1]})"


@dataclass(frozen=True)
class Center:
    """The point ``p_level`` of ``X_level`` that is blown up next."""

    level: int
    location: PPoint | ChartPoint
    infinitely_near: bool = True

    def to_json(self) -> dict:
        if isinstance(self.location, PPoint):
            return {"level": self.level, "point": self.location.to_json()}
        out = {
            "level": self.level,
            "chart": self.location.chart,
            "coords": [str(c) for c in self.location.coords],
        }
        if not self.infinitely_near:
            out["infinitely_near"] = False
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "Center":
        if not isinstance(data, Mapping):
            raise TowerError("center must be an object")
        keys = set(data)
        if "point" in data:
            if keys != {"level", "point"}:
                raise TowerError(f"unexpected keys in plane center: {sorted(keys)}")
            return cls(int(data["level"]), PPoint.from_json(data["point"]))
        if not keys <= {"level", "chart", "coords", "infinitely_near"} or not {"level", "chart", "coords"} <= keys:
            raise TowerError(f"bad keys in chart center: {sorted(keys)}")
        coords = data["coords"]
        if not isinstance(coords, list) or not all(isinstance(c, str) for c in coords):
            raise TowerError("chart coordinates are 'p/q' strings")
        return cls(
            int(data["level"]),
            ChartPoint(str(data["chart"]), coords),
            bool(data.get("infinitely_near", True)),
        )


@dataclass(frozen=True)
class Chart:
    id: str
    level: int
    vars: tuple[str, str]
    parent: str | None = None
    kind: str | None = None
    center: tuple[mpq, mpq] | None = None
    # k -> equation of the strict transform of E_k in this chart (only curves meeting it)
    exceptional: Mapping[int, MPoly] = field(default_factory=dict)

    def exceptional_index(self) -> int:
        """Position (0 or 1) of the coordinate cutting out this chart's own exceptional curve."""
        if self.kind is None:
            raise TowerError("the base chart has no exceptional curve")
        return 0 if self.kind == "A" else 1

    def transition(self) -> tuple[MPoly, MPoly]:
        """Parent coordinates as polynomials in this chart's coordinates."""
        u, v = MPoly.gens(self.vars)
        cx, cy = self.center
        if self.kind == "A":
            return u + cx, u * v + cy
        return u * v + cx, v + cy

    def to_parent(self, coords: Sequence[mpq]) -> tuple[mpq, mpq]:
        u, v = coords
        cx, cy = self.center
        if self.kind == "A":
            return cx + u, cy + u * v
        return cx + u * v, cy + v


def _strict_step(eq: MPoly, chart: Chart) -> tuple[MPoly, int]:
    """Pull ``eq`` (parent coordinates) back into ``chart`` and strip the exceptional factor."""
    pulled = eq.substitute(list(chart.transition()), chart.vars)
    if pulled.is_zero():
        return pulled, -1
    e = MPoly.gens(chart.vars)[chart.exceptional_index()]
    k = ord_divide(pulled, e)
    return exact_divide(pulled, e**k), k


class Tower:
    """An immutable tower ``X_n -> ... -> X_0 = P^2`` of point blowups."""

    def __init__(self, centers: Sequence[Center] = (), charts: Mapping[str, Chart] | None = None, base_index=None):
        self.centers: tuple[Center, ...] = tuple(centers)
        self.charts: dict[str, Chart] = dict(charts or {})
        # (m, a, b): base chart is x_m = 1 with (x, y) = (x_a, x_b)
        self.base_index: tuple[int, int, int] | None = base_index

    @property
    def n(self) -> int:
        return len(self.centers)

    def chart(self, chart_id: str) -> Chart:
        try:
            return self.charts[chart_id]
        except KeyError:
            raise TowerError(f"unknown chart {chart_id!r}") from None

    def charts_at_level(self, level: int) -> list[Chart]:
        return [c for c in self.charts.values() if c.level == level]

    def atlas(self, level: int) -> list[Chart]:
        """Charts usable on ``X_level``: every chart created up to that level."""
        return [c for c in self.charts.values() if c.level <= level]

    def path(self, chart_id: str) -> list[Chart]:
        """Charts from the base chart down to ``chart_id`` (inclusive)."""
        out = []
        c = self.chart(chart_id)
        while True:
            out.append(c)
            if c.parent is None:
                break
            c = self.chart(c.parent)
        return out[::-1]

    def base_point(self) -> PPoint:
        if not self.centers:
            raise TowerError("empty tower has no base point")
        return self.centers[0].location

    def plane_to_base(self) -> tuple[MPoly, MPoly, MPoly]:
        """Homogeneous forms ``(den, num_x, num_y)`` with base coordinates ``x = num_x/den``."""
        m, a, b = self.base_index
        g = MPoly.gens(PLANE_VARS)
        return g[m], g[a], g[b]

    def base_to_plane(self, coords: Sequence[mpq]) -> PPoint:
        m, a, b = self.base_index
        out = [mpq(0)] * 3
        out[m] = mpq(1)
        out[a], out[b] = coords
        return PPoint(out)

    def center_point(self, j: int) -> ChartPoint:
        """The j-th center as a chart point (the base point in chart L0 for j = 0)."""
        loc = self.centers[j].location
        if isinstance(loc, PPoint):
            m, a, b = self.base_index
            return ChartPoint(BASE, (loc[a], loc[b]))
        return loc

    def __eq__(self, other) -> bool:
        return isinstance(other, Tower) and self.centers == other.centers

    def __hash__(self) -> int:
        return hash(self.centers)

    def __repr__(self) -> str:
        return f"Tower(n={self.n}, centers={[str(c.location) for c in self.centers]})"

    # -- construction -------------------------------------------------------

    @classmethod
    def from_centers(cls, centers: Iterable[Center]) -> "Tower":
        t = cls()
        for c in centers:
            t = blow_up(t, c)
        return t

    def to_json(self) -> dict:
        return {"centers": [c.to_json() for c in self.centers]}

    @classmethod
    def from_json(cls, data: Mapping) -> "Tower":
        if not isinstance(data, Mapping) or set(data) != {"centers"}:
            raise TowerError("tower object must have exactly the key 'centers'")
        return cls.from_centers(Center.from_json(c) for c in data["centers"])


def blow_up(tower: Tower, center: Center) -> Tower:
    """Return the tower with ``center`` blown up on top of ``tower``."""
    j = tower.n
    if center.level != j:
        raise TowerError(f"center has level {center.level}, tower expects level {j}")
    charts = dict(tower.charts)
    base_index = tower.base_index
    if j == 0:
        if not isinstance(center.location, PPoint):
            raise TowerError("the level-0 center must be a point of the plane")
        p = center.location
        m = next(i for i in range(3) if p[i])
        a, b = [i for i in range(3) if i != m]
        base_index = (m, a, b)
        charts[BASE] = Chart(BASE, 0, BASE_VARS)
        parent = charts[BASE]
        coords = (p[a], p[b])
        stored = center
    else:
        if isinstance(center.location, PPoint):
            raise TowerError("centers above level 0 are chart points")
        loc = center.location
        chart = tower.chart(loc.chart)
        if chart.level > j:
            raise TowerError(f"chart {loc.chart} is not part of the level-{j} atlas")
        if center.infinitely_near and not any(
            eq.evaluate(loc.coords) == 0 for eq in chart.exceptional.values()
        ):
            raise TowerError(f"{loc} is flagged infinitely near but lies on no exceptional curve")
        canon = canonical_point(tower, loc)
        for i in range(j):
            if canonical_point(tower, tower.center_point(i)) == canon:
                raise TowerError(f"{loc} was already blown up at level {i}")
        parent = tower.chart(canon.chart)
        coords = canon.coords
        stored = Center(j, canon, center.infinitely_near)
    level = j + 1
    vars = (f"u{level}", f"v{level}")
    for kind in "AB":
        cid = f"L{level}{kind}"
        new = Chart(cid, level, vars, parent.id, kind, tuple(coords))
        exc: dict[int, MPoly] = {}
        for k, eq in parent.exceptional.items():
            st, _ = _strict_step(eq, new)
            if not st.is_constant():
                exc[k] = st
        u, v = MPoly.gens(vars)
        exc[level] = u if kind == "A" else v
        charts[cid] = Chart(cid, level, vars, parent.id, kind, tuple(coords), exc)
    return Tower(tower.centers + (stored,), charts, base_index)


# ---------------------------------------------------------------------------
# points of the tower


def _exc_coordinate(chart: Chart, coords) -> mpq:
    return coords[chart.exceptional_index()]


def canonical_point(tower: Tower, point: ChartPoint) -> ChartPoint:
    """Normal form of a point: lowest chart in which it lies on that chart's exceptional curve.

    Points off every exceptional curve are pushed to the base chart; on an
    exceptional curve the ``A`` chart is preferred when it contains the point.
    """
    chart = tower.chart(point.chart)
    coords = point.coords
    while chart.parent is not None and _exc_coordinate(chart, coords) != 0:
        coords = chart.to_parent(coords)
        chart = tower.chart(chart.parent)
    if chart.kind == "B" and coords[0] != 0:
        u, v = coords
        sibling = tower.chart(f"L{chart.level}A")
        return ChartPoint(sibling.id, (u * v, 1 / u))
    return ChartPoint(chart.id, coords)


def push_down(tower: Tower, point: ChartPoint, level: int) -> ChartPoint:
    """Image of a point under the blowdowns to ``X_level`` (canonical form)."""
    chart = tower.chart(point.chart)
    coords = point.coords
    while chart.level > level:
        coords = chart.to_parent(coords)
        chart = tower.chart(chart.parent)
    return canonical_point(tower, ChartPoint(chart.id, coords))


def curves_through(tower: Tower, point: ChartPoint) -> list[int]:
    """Indices k with the point on the strict transform of E_k (in the point's chart)."""
    chart = tower.chart(point.chart)
    return sorted(k for k, eq in chart.exceptional.items() if eq.evaluate(point.coords) == 0)


# ---------------------------------------------------------------------------
# maps and transforms


def pushforward_map(tower: Tower, chart_id: str) -> tuple[MPoly, MPoly]:
    """Base-chart coordinates as polynomials in the coordinates of ``chart_id``."""
    path = tower.path(chart_id)
    target = path[-1].vars
    x, y = MPoly.gens(target)
    images = (x, y)
    for chart in reversed(path[1:]):
        px, py = chart.transition()
        images = tuple(p.substitute(list(images), target) for p in (px, py))
    return images


@dataclass
class StrictTransform:
    equations: dict[str, MPoly]
    multiplicities: list[int]
    removed: dict[str, int]
    exceptional_component: bool = False


def _to_base(tower: Tower, curve: MPoly) -> MPoly:
    if curve.vars == BASE_VARS:
        return curve
    if curve.vars == PLANE_VARS:
        if not curve.is_homogeneous():
            raise TowerError("plane curves must be homogeneous")
        images = [None, None, None]
        m, a, b = tower.base_index
        images[m] = MPoly.const(1, BASE_VARS)
        images[a] = MPoly.var("x", BASE_VARS)
        images[b] = MPoly.var("y", BASE_VARS)
        return curve.substitute(images, BASE_VARS)
    raise TowerError(f"curve must be in base coordinates {BASE_VARS} or plane coordinates {PLANE_VARS}")


def strict_transform(tower: Tower, level: int, curve: MPoly) -> StrictTransform:
    """Strict transform of a plane curve in every chart up to ``level``.

    ``multiplicities[i]`` is the multiplicity of the (strict transform of the)
    curve at the center ``p_i``; ``removed[chart]`` is the exceptional order
    divided out when entering that chart.
    """
    if level > tower.n:
        raise TowerError(f"tower has only {tower.n} levels")
    curve = _to_base(tower, curve)
    if curve.is_zero():
        raise TowerError("the zero polynomial is not a curve")
    eqs = {BASE: curve}
    removed = {BASE: 0}
    mults = [0] * level
    flagged = False
    for chart in tower.charts.values():
        if chart.parent is None or chart.level > level:
            continue
        st, k = _strict_step(eqs[chart.parent], chart)
        if k < 0:
            flagged = True
            k = 0
        eqs[chart.id] = st
        removed[chart.id] = k
        mults[chart.level - 1] = k
    return StrictTransform(eqs, mults, removed, flagged)


# ---------------------------------------------------------------------------
# Z-sets


def exceptional_intersections(tower: Tower) -> list[tuple[int, int, ChartPoint]]:
    """Points where two exceptional strict transforms meet on the top surface ``X_n``."""
    n = tower.n
    found: list[tuple[int, int, ChartPoint]] = []
    for k in range(1, n + 1):
        for chart in tower.charts_at_level(k):
            e_idx = chart.exceptional_index()
            for i, eq in sorted(chart.exceptional.items()):
                if i >= k:
                    continue
                # restrict to E_k: the exceptional coordinate is 0
                other = 1 - e_idx
                zero = [MPoly.zero(("w",)), MPoly.zero(("w",))]
                zero[other] = MPoly.var("w", ("w",))
                restricted = eq.substitute(zero, ("w",))
                if restricted.is_zero():
                    raise TowerError(f"E_{i} contains E_{k} in chart {chart.id}")
                if restricted.is_constant():
                    continue
                roots = rational_roots(restricted, "w")
                part, _ = squarefree_data(restricted, "w")
                if part.degree("w") != len(roots):
                    raise UnsupportedField(
                        f"E_{i} meets E_{k} in chart {chart.id} at non-rational points ({restricted})"
                    )
                for r in roots:
                    coords = [mpq(0), mpq(0)]
                    coords[other] = r
                    pt = canonical_point(tower, ChartPoint(chart.id, coords))
                    if any(canonical_point(tower, tower.center_point(m)) == pt for m in range(k, n)):
                        continue  # separated by a later blowup
                    key = (i, k, pt)
                    if key not in found:
                        found.append(key)
    return found


def z_sets(tower: Tower) -> dict[int, list[ChartPoint]]:
    """For each i in 1..n, the points of E_i that are images of intersections with other curves."""
    out: dict[int, list[ChartPoint]] = {i: [] for i in range(1, tower.n + 1)}
    for i, k, pt in exceptional_intersections(tower):
        for idx in (i, k):
            img = push_down(tower, pt, idx)
            if img not in out[idx]:
                out[idx].append(img)
    for idx in out:
        out[idx].sort(key=lambda p: (p.chart, p.coords))
    return out
