"""Integration contours: unions of positively oriented circles."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import InputError, NoValidContour
from .expr import HoloFunction

MIN_NODES = 16
DEFAULT_NODES = 256
SING_MARGIN = 1.1  # singularities must sit at distance >= 1.1 r from the centre
SPEC_SING_GAP = 1e-6


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float
    nodes: int = DEFAULT_NODES
    orientation: int = 1

    def __post_init__(self):
        if not self.radius > 0:
            raise InputError("circle radius must be positive")
        if self.nodes < MIN_NODES:
            raise InputError(f"a circle needs at least {MIN_NODES} nodes")
        if self.orientation != 1:
            raise InputError("only positively oriented circles are supported")

    def points(self) -> np.ndarray:
        k = np.arange(self.nodes)
        return self.center + self.radius * np.exp(2j * np.pi * k / self.nodes)

    def winding_numbers(self, zs) -> np.ndarray:
        """Winding numbers of the node polygon about each point of ``zs``."""
        zs = np.asarray(zs, dtype=np.complex128).ravel()
        v = self.points()[None, :] - zs[:, None]
        if np.any(v == 0):
            raise NoValidContour("a point lies on a contour node")
        turns = np.angle(np.roll(v, -1, axis=1) / v)
        return np.rint(turns.sum(axis=1) / (2 * np.pi)).astype(int)

    def winding_number(self, z: complex) -> int:
        return int(self.winding_numbers([z])[0])


@dataclass(frozen=True)
class Contour:
    circles: tuple[Circle, ...]

    def winding_numbers(self, zs) -> np.ndarray:
        return sum(c.winding_numbers(zs) for c in self.circles)

    def winding_number(self, z: complex) -> int:
        return int(self.winding_numbers([z])[0])

    def validate(self, points: Sequence[complex], h: HoloFunction | None = None) -> None:
        """Check winding 1 about every point and 0 about every singularity of ``h``.

        Raises:
            NoValidContour: naming the first violation.
        """
        points = np.asarray(points, dtype=np.complex128).ravel()
        if points.size:
            for z, w in zip(points, self.winding_numbers(points)):
                if w != 1:
                    raise NoValidContour(f"winding number about spectral point {z} is {w}, not 1")
        if h is None:
            return
        if h.poles:
            for p, w in zip(h.poles, self.winding_numbers(h.poles)):
                if w != 0:
                    raise NoValidContour(f"contour winds {w} times about the pole {p}")
        for cut in h.cuts:
            for c in self.circles:
                if cut.distance(c.center) <= c.radius:
                    raise NoValidContour(
                        f"circle at {c.center} meets the branch cut from {cut.point}"
                    )

    def to_json(self) -> dict:
        return {
            "circles": [
                {"center": [c.center.real, c.center.imag], "radius": c.radius, "nodes": c.nodes}
                for c in self.circles
            ]
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Contour":
        try:
            circles = tuple(
                Circle(complex(*c["center"]), float(c["radius"]), int(c["nodes"]))
                for c in doc["circles"]
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed contour document: {exc}") from exc
        if not circles:
            raise InputError("contour has no circles")
        return cls(circles)


def _dedupe(points: np.ndarray, tol: float) -> np.ndarray:
    out: list[complex] = []
    for p in points:
        if all(abs(p - q) > tol for q in out):
            out.append(complex(p))
    return np.array(out, dtype=np.complex128)


def _single_radius(m: float, extent: float, floor: float, upper: float) -> float | None:
    """Radius for one circle enclosing points within ``m`` of its centre, or None."""
    preferred = max(1.25 * max(m, extent), m + floor)
    if preferred <= upper:
        return preferred
    lower = max(1.05 * m, m + 1e-3 * floor)
    if upper <= lower:
        return None
    # balance inner (m / r) and outer (r / upper) convergence ratios
    return min(upper, max(np.sqrt(m * upper), lower)) if m > 0 else min(upper, floor)


def auto_contour(
    spec_points: Sequence[complex],
    h: HoloFunction,
    nodes: int = DEFAULT_NODES,
    extent: float = 0.0,
) -> Contour:
    """Build a contour winding once about ``spec_points`` and never about ``h``'s singularities.

    A single circle about the centroid is tried first, with radius
    ``1.25 * max(spread, extent)``. ``extent`` lets callers ask the circle to
    clear more than the points themselves, e.g. ``||T - cI||`` for a
    non-normal ``T`` whose resolvent is large near its spectrum. If a
    singularity is in the way the circle shrinks, and failing that the points
    are clustered greedily into separate circles.

    Raises:
        NoValidContour: if a singularity cannot be separated from the points.
    """
    pts = np.asarray(spec_points, dtype=np.complex128).ravel()
    if pts.size == 0:
        raise InputError("auto_contour needs at least one spectral point")
    for z in pts:
        if h.singularity_distance(z) < SPEC_SING_GAP:
            raise NoValidContour(
                f"singularity of {h.source!r} within {SPEC_SING_GAP} of spectral point {z}; "
                "supply a contour by hand"
            )
    scale = max(1.0, float(np.max(np.abs(pts))))
    floor = 0.05 * scale
    uniq = _dedupe(pts, 1e-12 * scale)

    center = complex(np.mean(uniq))
    m = float(np.max(np.abs(uniq - center)))
    r = _single_radius(m, extent, floor, h.singularity_distance(center) / SING_MARGIN)
    if r is not None:
        contour = Contour((Circle(center, r, nodes),))
        try:
            contour.validate(uniq, h)
            return contour
        except NoValidContour:
            pass

    contour = _clustered(uniq, h, nodes, floor)
    contour.validate(uniq, h)
    return contour


def _clustered(pts: np.ndarray, h: HoloFunction, nodes: int, floor: float) -> Contour:
    clusters = [[i] for i in range(pts.size)]

    def geometry(members: list[int]) -> tuple[complex, float, float]:
        c = complex(np.mean(pts[members]))
        m = float(np.max(np.abs(pts[members] - c)))
        others = [abs(pts[j] - c) for j in range(pts.size) if j not in members]
        upper = min([h.singularity_distance(c) / SING_MARGIN] + [d / SING_MARGIN for d in others])
        return c, m, upper

    def feasible(members: list[int], rest: list[list[int]] = ()) -> bool:
        c, m, upper = geometry(members)
        if upper <= max(1.05 * m, m + 1e-3 * floor):
            return False
        # hulls of distinct clusters must stay apart so that circles can be disjoint
        for other in rest:
            c2, m2, _ = geometry(other)
            if abs(c - c2) <= 1.05 * (m + m2):
                return False
        return True

    for members in clusters:
        if not feasible(members):
            raise NoValidContour(
                f"cannot isolate spectral point {pts[members[0]]} from the singularities "
                f"of {h.source!r}; supply a contour by hand"
            )

    merged = True
    while merged and len(clusters) > 1:
        merged = False
        pairs = []
        for a in range(len(clusters)):
            for b in range(a + 1, len(clusters)):
                d = min(abs(pts[i] - pts[j]) for i in clusters[a] for j in clusters[b])
                pairs.append((d, a, b))
        for _, a, b in sorted(pairs):
            cand = clusters[a] + clusters[b]
            rest = [c for k, c in enumerate(clusters) if k not in (a, b)]
            if feasible(cand, rest):
                clusters = rest + [cand]
                merged = True
                break

    geo = [geometry(c) for c in clusters]
    circles = []
    for a, (c, m, upper) in enumerate(geo):
        r = min(max(1.25 * m, m + floor), upper)
        for b, (c2, m2, _) in enumerate(geo):
            if a != b:
                r = min(r, m + 0.45 * (abs(c - c2) - m - m2))
        if r <= m:
            raise NoValidContour("clusters of the spectrum are too close to separate")
        circles.append(Circle(c, r, nodes))
    return Contour(tuple(circles))
