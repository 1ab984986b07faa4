"""Origin-symmetric planar convex bodies.

Every body is described by a list of symmetric slabs ``|<x, e(alpha)>| <= d``
plus an optional disk, so its radial function is

    rho(t) = min(R, min_i d_i / |cos(t - alpha_i)|).

Polygons are the intersection of the slabs spanned by opposite edge pairs,
strips are a single slab, and intersections simply pool the constraints of
their operands (lazy, never materialised).  Because ``rho`` has period pi,
the directions in ``[0, pi)`` are split once into cells on which a single
constraint is active; quadrature over any angular interval then works on
smooth pieces only.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import yaml

from ._kernels import KIND_DISK, KIND_FREE, KIND_SLAB
from .errors import BodyFileError, DomainError, OriginNotInterior, Unbounded

__all__ = [
    "ConvexBody2D", "Polygon", "Disk", "Strip", "Intersection", "WholePlane",
    "Cone2D", "radial_function", "support_function", "polar_dual", "intersect",
    "ball_sandwich_check", "reference_volume_product", "vertex_hausdorff",
    "square", "regular_polygon", "body_from_dict", "load_body", "loads_body",
]

TWO_PI = 2.0 * math.pi
VERTEX_TOL = 1e-12
SYMMETRY_TOL = 1e-9


def _unit(t):
    t = np.asarray(t, dtype=float)
    return np.cos(t), np.sin(t)


class ConvexBody2D:
    """Base class; subclasses fill in ``slabs`` and ``disk_radius``."""

    #: (k, 2) array of (normal angle, half width)
    slabs: np.ndarray
    #: radius of the bounding disk constraint, ``inf`` when there is none
    disk_radius: float = math.inf

    # -- queries -------------------------------------------------------
    def radial_function(self, t):
        """Largest ``r`` with ``r*(cos t, sin t)`` in the body (may be ``inf``)."""
        t = np.asarray(t, dtype=float)
        out = np.full(t.shape, self.disk_radius, dtype=float)
        if len(self.slabs):
            alpha = self.slabs[:, 0].reshape((-1,) + (1,) * t.ndim)
            d = self.slabs[:, 1].reshape((-1,) + (1,) * t.ndim)
            with np.errstate(divide="ignore"):
                r = d / np.abs(np.cos(t[None] - alpha))
            out = np.minimum(out, r.min(axis=0))
        return float(out) if out.ndim == 0 else out

    def support_function(self, t):
        """``max <x, (cos t, sin t)>`` over the body."""
        if not self.is_bounded:
            raise Unbounded(f"{type(self).__name__} is unbounded")
        t = np.asarray(t, dtype=float)
        c, s = _unit(t)
        pts = self.boundary_vertices
        out = (pts[:, 0].reshape((-1,) + (1,) * t.ndim) * c[None]
               + pts[:, 1].reshape((-1,) + (1,) * t.ndim) * s[None]).max(axis=0)
        for lo, hi, radius in self._arcs:
            # arc [lo, hi] and its antipode; t inside either attains the radius
            inside = (np.mod(t - lo, math.pi) <= hi - lo)
            out = np.where(inside, np.maximum(out, radius), out)
        return float(out) if out.ndim == 0 else out

    # -- structure -----------------------------------------------------
    @cached_property
    def cells(self) -> np.ndarray:
        """Rows ``(lo, hi, kind, alpha, d)`` partitioning ``[0, pi]``."""
        return _compute_cells(self.slabs, self.disk_radius)

    def pieces(self, lo: float, hi: float) -> np.ndarray:
        """Smooth pieces of the radial function covering ``[lo, hi]``."""
        cells = self.cells
        if hi <= lo:
            return np.empty((0, 5))
        k0 = math.floor(lo / math.pi)
        k1 = math.floor(hi / math.pi)
        shifts = np.arange(k0, k1 + 1) * math.pi
        rows = np.repeat(cells[None], shifts.size, axis=0).copy()
        rows[:, :, 0] += shifts[:, None]
        rows[:, :, 1] += shifts[:, None]
        rows = rows.reshape(-1, 5)
        rows[:, 0] = np.maximum(rows[:, 0], lo)
        rows[:, 1] = np.minimum(rows[:, 1], hi)
        return rows[rows[:, 1] > rows[:, 0]]

    @cached_property
    def is_bounded(self) -> bool:
        return bool(np.isfinite(_radial_extrema(self.cells)[1]))

    @cached_property
    def radial_extrema(self):
        """Exact ``(min, max)`` of the radial function over all directions."""
        return _radial_extrema(self.cells)

    @cached_property
    def boundary_vertices(self) -> np.ndarray:
        """Boundary points at every cell break, both antipodal copies."""
        if not self.is_bounded:
            raise Unbounded(f"{type(self).__name__} is unbounded")
        br = np.unique(self.cells[:, 0])
        r = np.asarray(self.radial_function(br))
        pts = np.c_[r * np.cos(br), r * np.sin(br)]
        return np.r_[pts, -pts]

    @cached_property
    def _arcs(self):
        return [(row[0], row[1], row[4]) for row in self.cells
                if row[2] == KIND_DISK]

    def unbounded_on(self, lo: float, hi: float) -> bool:
        """True if the radial function is infinite somewhere on ``[lo, hi]``."""
        for a, b, kind, alpha, _ in self.pieces(lo, hi):
            if kind == KIND_FREE:
                return True
            if kind == KIND_SLAB and _free_direction_in(a, b, alpha):
                return True
        return False

    # -- transforms ----------------------------------------------------
    def rotated(self, beta: float) -> "ConvexBody2D":
        raise NotImplementedError

    def scaled(self, lam: float) -> "ConvexBody2D":
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


def _compute_cells(slabs: np.ndarray, disk_radius: float) -> np.ndarray:
    pi = math.pi
    k = len(slabs)
    has_disk = math.isfinite(disk_radius)
    if k == 0:
        kind = KIND_DISK if has_disk else KIND_FREE
        d = disk_radius if has_disk else math.inf
        return np.array([[0.0, pi, kind, 0.0, d]])
    if k == 1 and not has_disk:
        return np.array([[0.0, pi, KIND_SLAB, slabs[0, 0], slabs[0, 1]]])
    alpha = slabs[:, 0]
    d = slabs[:, 1]
    cands = [np.array([0.0, pi]), np.mod(alpha + 0.5 * pi, pi)]
    if k > 1:
        i, j = np.triu_indices(k, 1)
        for sgn in (1.0, -1.0):
            a_ = d[i] * np.cos(alpha[j]) - sgn * d[j] * np.cos(alpha[i])
            b_ = d[i] * np.sin(alpha[j]) - sgn * d[j] * np.sin(alpha[i])
            keep = np.hypot(a_, b_) > 1e-15
            cands.append(np.mod(np.arctan2(a_[keep], -b_[keep]), pi))
    if has_disk:
        close = d < disk_radius
        if close.any():
            off = np.arccos(d[close] / disk_radius)
            cands.append(np.mod(alpha[close] + off, pi))
            cands.append(np.mod(alpha[close] - off, pi))
    br = np.unique(np.concatenate(cands))
    br = br[(br >= 0.0) & (br <= pi)]
    # drop near-duplicates (keeps the first of each cluster)
    keep = np.r_[True, np.diff(br) > 1e-14]
    br = br[keep]
    if br[-1] < pi:
        br = np.r_[br, pi]
    else:
        br[-1] = pi
    lo, hi = br[:-1], br[1:]
    mid = 0.5 * (lo + hi)
    with np.errstate(divide="ignore"):
        vals = d[:, None] / np.abs(np.cos(mid[None, :] - alpha[:, None]))
    if has_disk:
        vals = np.vstack([vals, np.full((1, mid.size), disk_radius)])
    active = np.argmin(vals, axis=0)
    # merge runs with the same active constraint
    starts = np.r_[0, np.nonzero(np.diff(active))[0] + 1]
    ends = np.r_[starts[1:], active.size]
    rows = []
    for s, e in zip(starts, ends):
        a = active[s]
        if a < k:
            rows.append([lo[s], hi[e - 1], KIND_SLAB, alpha[a], d[a]])
        else:
            rows.append([lo[s], hi[e - 1], KIND_DISK, 0.0, disk_radius])
    return np.array(rows, dtype=float)


def _free_direction_in(a, b, alpha, tol=1e-14):
    """Whether a direction parallel to the slab (``alpha + pi/2 + k pi``) lies in ``[a, b]``."""
    t = alpha + 0.5 * math.pi
    k = math.ceil((a - tol - t) / math.pi)
    return t + k * math.pi <= b + tol


def _radial_extrema(cells):
    rmin = math.inf
    rmax = 0.0
    for a, b, kind, alpha, d in cells:
        if kind == KIND_FREE:
            return float(rmin), math.inf
        if kind == KIND_DISK:
            rmin = min(rmin, d)
            rmax = max(rmax, d)
            continue
        ca, cb = abs(math.cos(a - alpha)), abs(math.cos(b - alpha))
        if _free_direction_in(a, b, alpha):
            rmax = math.inf
        else:
            rmax = max(rmax, d / ca, d / cb)
        # the foot of the perpendicular is inside the cell when the normal is
        foot = math.fmod(alpha - a, math.pi)
        if foot < 0:
            foot += math.pi
        if foot <= b - a:
            rmin = min(rmin, d)
        else:
            rmin = min(rmin, d / max(ca, cb))
    return float(rmin), float(rmax)


# ---------------------------------------------------------------------------
# concrete bodies
# ---------------------------------------------------------------------------

class Polygon(ConvexBody2D):
    """Origin-symmetric strictly convex polygon, vertices counterclockwise."""

    def __init__(self, vertices):
        v = np.array(vertices, dtype=float)
        problem = polygon_defect(v)
        if problem is not None:
            raise DomainError(problem[1])
        self.vertices = v
        self.vertices.setflags(write=False)
        half = v.shape[0] // 2
        e = np.roll(v, -1, axis=0)[:half] - v[:half]
        normal = np.c_[e[:, 1], -e[:, 0]] / np.hypot(e[:, 0], e[:, 1])[:, None]
        dist = np.einsum("ij,ij->i", v[:half], normal)
        self.slabs = np.c_[np.arctan2(normal[:, 1], normal[:, 0]), dist]

    @classmethod
    def from_half(cls, half_vertices):
        """Complete a half vertex list with the antipodal partners."""
        h = np.array(half_vertices, dtype=float).reshape(-1, 2)
        full = np.r_[h, -h]
        order = np.argsort(np.arctan2(full[:, 1], full[:, 0]), kind="stable")
        return cls(full[order])

    @property
    def half_vertices(self):
        return self.vertices[: self.vertices.shape[0] // 2]

    def rotated(self, beta):
        c, s = math.cos(beta), math.sin(beta)
        return Polygon(self.vertices @ np.array([[c, s], [-s, c]]))

    def scaled(self, lam):
        return Polygon(self.vertices * lam)

    def to_dict(self):
        return {"type": "polygon", "vertices": self.half_vertices.tolist()}

    def __repr__(self):
        return f"Polygon({self.vertices.shape[0]} vertices)"


def polygon_defect(v: np.ndarray):
    """Return ``(vertex_index, message)`` for the first violated polygon
    invariant, or ``None`` if ``v`` is a valid symmetric polygon."""
    if v.ndim != 2 or v.shape[1] != 2:
        return None, "vertices must be a list of [x, y] pairs"
    n = v.shape[0]
    if n < 4 or n % 2:
        return None, f"a symmetric polygon needs an even number >= 4 of vertices, got {n}"
    if not np.all(np.isfinite(v)):
        return int(np.argwhere(~np.isfinite(v))[0, 0]), "vertex coordinates must be finite"
    scale = max(float(np.abs(v).max()), 1e-300)
    nxt = np.roll(v, -1, axis=0)
    edge = nxt - v
    lens = np.hypot(edge[:, 0], edge[:, 1])
    bad = np.nonzero(lens <= VERTEX_TOL * scale)[0]
    if bad.size:
        return int(bad[0]), f"duplicate vertex at index {int(bad[0])}"
    prev = np.roll(edge, 1, axis=0)
    cross = prev[:, 0] * edge[:, 1] - prev[:, 1] * edge[:, 0]
    bad = np.nonzero(cross <= VERTEX_TOL * scale * scale)[0]
    if bad.size:
        i = int(bad[0])
        return i, (f"vertex {i} is not in strictly convex counterclockwise "
                   f"position (turn {cross[i]:.3g})")
    turning = np.arctan2(cross, np.einsum("ij,ij->i", prev, edge)).sum()
    if abs(turning - TWO_PI) > 1e-6:
        return None, "vertices wind more than once around the origin"
    half = n // 2
    asym = np.hypot(*(v[:half] + v[half:]).T)
    bad = np.nonzero(asym > SYMMETRY_TOL * scale)[0]
    if bad.size:
        i = int(bad[0])
        return i, f"vertex {i} has no antipodal partner (polygon not origin-symmetric)"
    dist = (v[:, 0] * edge[:, 1] - v[:, 1] * edge[:, 0]) / lens
    if np.any(dist <= VERTEX_TOL * scale):
        return int(np.argmin(dist)), "origin is not strictly inside the polygon"
    return None


class Disk(ConvexBody2D):
    """Centered disk; ``radius == 0`` is the degenerate one-point body."""

    def __init__(self, radius: float):
        radius = float(radius)
        if not radius >= 0 or not math.isfinite(radius):
            raise DomainError(f"disk radius must be finite and nonnegative, got {radius}")
        self.radius = radius
        self.slabs = np.empty((0, 2))
        self.disk_radius = radius

    def rotated(self, beta):
        return self

    def scaled(self, lam):
        return Disk(self.radius * lam)

    def to_dict(self):
        return {"type": "disk", "radius": self.radius}

    def __repr__(self):
        return f"Disk({self.radius!r})"


class Strip(ConvexBody2D):
    """``{x : |<x, (cos a, sin a)>| <= half_width}``."""

    def __init__(self, normal_angle: float, half_width: float):
        half_width = float(half_width)
        if not half_width > 0 or not math.isfinite(half_width):
            raise DomainError(f"strip half width must be positive, got {half_width}")
        self.normal_angle = float(normal_angle)
        self.half_width = half_width
        self.slabs = np.array([[self.normal_angle, half_width]])

    def support_function(self, t):
        t = np.asarray(t, dtype=float)
        off = np.abs(np.sin(t - self.normal_angle))
        if np.any(off > 1e-15):
            raise Unbounded("strip support is infinite off its normal direction")
        out = self.half_width * np.abs(np.cos(t - self.normal_angle))
        return float(out) if out.ndim == 0 else out

    def rotated(self, beta):
        return Strip(self.normal_angle + beta, self.half_width)

    def scaled(self, lam):
        return Strip(self.normal_angle, self.half_width * lam)

    def to_dict(self):
        return {"type": "strip", "normal_angle": self.normal_angle,
                "half_width": self.half_width}

    def __repr__(self):
        return f"Strip({self.normal_angle!r}, {self.half_width!r})"


class WholePlane(ConvexBody2D):
    def __init__(self):
        self.slabs = np.empty((0, 2))

    def rotated(self, beta):
        return self

    def scaled(self, lam):
        return self

    def to_dict(self):
        return {"type": "whole_plane"}

    def __repr__(self):
        return "WholePlane()"


class Intersection(ConvexBody2D):
    def __init__(self, bodies):
        bodies = list(bodies)
        if not bodies:
            raise DomainError("an intersection needs at least one body")
        self.bodies = tuple(bodies)
        slabs = [b.slabs for b in bodies if len(b.slabs)]
        self.slabs = np.vstack(slabs) if slabs else np.empty((0, 2))
        self.disk_radius = min(b.disk_radius for b in bodies)

    def rotated(self, beta):
        return Intersection([b.rotated(beta) for b in self.bodies])

    def scaled(self, lam):
        return Intersection([b.scaled(lam) for b in self.bodies])

    def to_dict(self):
        return {"type": "intersection", "bodies": [b.to_dict() for b in self.bodies]}

    def __repr__(self):
        return f"Intersection({list(self.bodies)!r})"


@dataclass(frozen=True)
class Cone2D:
    """Planar cone over the angular interval ``[t_lo, t_hi]``.

    Zero-length cones are allowed (they carry zero measure); lengths above pi
    describe non-convex sectors and are rejected wherever a nonnegative
    angular density is required.
    """

    t_lo: float
    t_hi: float

    def __post_init__(self):
        length = self.t_hi - self.t_lo
        if not (0.0 <= length <= TWO_PI):
            raise DomainError(f"cone interval [{self.t_lo}, {self.t_hi}] must have "
                              "length in [0, 2*pi]")

    @property
    def length(self):
        return self.t_hi - self.t_lo

    @property
    def is_convex(self):
        return self.length <= math.pi

    def rotated(self, beta):
        return Cone2D(self.t_lo + beta, self.t_hi + beta)


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------

def radial_function(K: ConvexBody2D, t):
    return K.radial_function(t)


def support_function(K: ConvexBody2D, t):
    return K.support_function(t)


def polar_dual(K: ConvexBody2D) -> ConvexBody2D:
    """Polar body ``{y : <x, y> <= 1 for all x in K}``.

    Each polygon edge between consecutive vertices ``v_i, v_(i+1)`` becomes
    the dual vertex solving ``<w, v_i> = <w, v_(i+1)> = 1``.
    """
    if isinstance(K, Disk):
        if K.radius == 0:
            raise OriginNotInterior("the degenerate disk has empty interior")
        return Disk(1.0 / K.radius)
    if isinstance(K, Polygon):
        v = K.vertices
        w = np.roll(v, -1, axis=0)
        det = v[:, 0] * w[:, 1] - v[:, 1] * w[:, 0]
        if np.any(det <= 0):
            raise OriginNotInterior("origin is not interior to the polygon")
        dual = np.c_[(w[:, 1] - v[:, 1]) / det, (v[:, 0] - w[:, 0]) / det]
        return Polygon(dual)
    raise DomainError(f"polar dual is implemented for polygons and disks, not {K!r}")


def intersect(A: ConvexBody2D, B: ConvexBody2D) -> ConvexBody2D:
    if isinstance(B, WholePlane):
        return A
    if isinstance(A, WholePlane):
        return B
    return Intersection([A, B])


def ball_sandwich_check(S: ConvexBody2D, inner_r: float, outer_R: float) -> bool:
    """``inner_r < min rho_S`` (strict interior) and ``max rho_S <= outer_R``."""
    if not S.is_bounded:
        raise Unbounded(f"{S!r} is unbounded")
    rmin, rmax = S.radial_extrema
    return bool(inner_r < rmin and rmax <= outer_R)


def reference_volume_product(preset: str, n: int) -> float:
    """Closed-form ``vol(K) vol(K polar)`` in dimension ``n``."""
    if n < 1:
        raise DomainError("dimension must be positive")
    if preset in ("cube", "cross-polytope", "cross_polytope"):
        return 4.0 ** n / math.factorial(n)
    if preset == "ball":
        return math.pi ** n / math.gamma(0.5 * n + 1.0) ** 2
    raise DomainError(f"unknown preset {preset!r}")


def vertex_hausdorff(a, b) -> float:
    """Hausdorff distance between two finite point sets in the plane."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    dist = np.hypot(*(a[:, None, :] - b[None, :, :]).transpose(2, 0, 1))
    return float(max(dist.min(axis=1).max(), dist.min(axis=0).max()))


def square(a: float = 1.0) -> Polygon:
    """The square ``[-a, a]^2``."""
    return Polygon([[a, -a], [a, a], [-a, a], [-a, -a]])


def regular_polygon(n_vertices: int, circumradius: float = 1.0, phase: float = 0.0) -> Polygon:
    if n_vertices < 4 or n_vertices % 2:
        raise DomainError("a symmetric regular polygon needs an even vertex count >= 4")
    t = phase + TWO_PI * np.arange(n_vertices) / n_vertices
    return Polygon(circumradius * np.c_[np.cos(t), np.sin(t)])


# ---------------------------------------------------------------------------
# body-definition documents
# ---------------------------------------------------------------------------

def _path_str(path):
    out = "$"
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def _line_index(text):
    """Map JSON paths to 1-based source lines (JSON parsed as YAML flow)."""
    try:
        root = yaml.compose(text)
    except yaml.YAMLError:
        return {}
    index = {}

    def walk(node, path):
        index[path] = node.start_mark.line + 1
        if isinstance(node, yaml.MappingNode):
            for key, value in node.value:
                walk(value, path + (key.value,))
        elif isinstance(node, yaml.SequenceNode):
            for i, value in enumerate(node.value):
                walk(value, path + (i,))

    if root is not None:
        walk(root, ())
    return index


def _fail(message, path, lines):
    line = None
    for k in range(len(path), -1, -1):
        if path[:k] in lines:
            line = lines[path[:k]]
            break
    raise BodyFileError(message, line=line, path=_path_str(path))


def _number(data, key, path, lines):
    if key not in data:
        _fail(f"missing field {key!r}", path, lines)
    val = data[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        _fail(f"field {key!r} must be a number", path + (key,), lines)
    return float(val)


def body_from_dict(data, path=(), lines=None) -> ConvexBody2D:
    """Build a body from a parsed body-definition document.

    Polygons list one half of their vertices; the antipodal partners are
    added here before the polygon invariants are checked.
    """
    lines = lines or {}
    if not isinstance(data, dict):
        _fail("a body must be a JSON object", path, lines)
    kind = data.get("type")
    try:
        if kind == "polygon":
            verts = data.get("vertices")
            vpath = path + ("vertices",)
            if not isinstance(verts, list) or len(verts) < 2:
                _fail("polygon needs a 'vertices' list with at least two points", vpath, lines)
            for i, p in enumerate(verts):
                if (not isinstance(p, list) or len(p) != 2
                        or not all(isinstance(c, (int, float)) and not isinstance(c, bool)
                                   and math.isfinite(c) for c in p)):
                    _fail(f"vertex {i} must be a pair of finite numbers", vpath + (i,), lines)
            half = np.array(verts, dtype=float)
            full = np.r_[half, -half]
            order = np.argsort(np.arctan2(full[:, 1], full[:, 0]), kind="stable")
            problem = polygon_defect(full[order])
            if problem is not None:
                idx, msg = problem
                if idx is not None:
                    src = int(order[idx]) % len(verts)
                    _fail(f"{msg} (input vertex {src})", vpath + (src,), lines)
                _fail(msg, vpath, lines)
            return Polygon(full[order])
        if kind == "disk":
            return Disk(_number(data, "radius", path, lines))
        if kind == "strip":
            return Strip(_number(data, "normal_angle", path, lines),
                         _number(data, "half_width", path, lines))
        if kind == "intersection":
            bodies = data.get("bodies")
            if not isinstance(bodies, list) or not bodies:
                _fail("intersection needs a nonempty 'bodies' list", path + ("bodies",), lines)
            return Intersection([body_from_dict(b, path + ("bodies", i), lines)
                                 for i, b in enumerate(bodies)])
        if kind in ("whole_plane", "wholeplane"):
            return WholePlane()
    except BodyFileError:
        raise
    except DomainError as exc:
        _fail(str(exc), path, lines)
    _fail(f"unknown body type {kind!r}", path + ("type",) if "type" in data else path, lines)


def loads_body(text: str) -> ConvexBody2D:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BodyFileError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
    return body_from_dict(data, (), _line_index(text))


def load_body(path) -> ConvexBody2D:
    with open(path, encoding="utf-8") as fh:
        return loads_body(fh.read())
