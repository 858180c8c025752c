"""Minimal standalone SVG figures of complex-plane sets and Nyquist curves."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np
import shapely
from shapely.geometry import LineString, box

from .region import Region, _polygons

SIZE = 600
PALETTE = ["#9ecae1", "#fdae6b", "#a1d99b", "#bcbddc"]


class Canvas:
    """Square drawing area showing ``[-extent, extent]²`` with y pointing up."""

    def __init__(self, extent, size=SIZE):
        self.extent = float(extent)
        self.size = size
        self.items = []
        self.view = box(-self.extent, -self.extent, self.extent, self.extent)

    def _xy(self, x, y):
        s = self.size / (2 * self.extent)
        return (x + self.extent) * s, (self.extent - y) * s

    def _coords(self, xy):
        return " ".join(f"{a:.3f},{b:.3f}" for a, b in (self._xy(x, y) for x, y in xy))

    def region(self, reg: Region, color, label=None):
        geom = reg.geom
        if reg.contains_infinity:
            # everything outside the window belongs to the set as well
            big = box(-4 * self.extent, -4 * self.extent, 4 * self.extent, 4 * self.extent)
            geom = shapely.union(geom, big.difference(reg.window_box))
        geom = geom.intersection(self.view)
        for poly in _polygons(geom):
            poly = shapely.geometry.polygon.orient(poly, 1.0)
            self._loop(np.asarray(poly.exterior.coords), color, label)
            for ring in poly.interiors:
                self._loop(np.asarray(ring.coords), "#ffffff", None)

    def _loop(self, xy, fill, label):
        pts = [self._xy(x, y) for x, y in xy]
        d = "M " + " L ".join(f"{a:.3f} {b:.3f}" for a, b in pts) + " Z"
        title = f"<title>{escape(label)}</title>" if label else ""
        self.items.append(f'<path d="{d}" fill="{fill}" fill-opacity="0.8" stroke="#555555" '
                          f'stroke-width="0.5">{title}</path>')

    def curve(self, z, color="#000000", width=2.0):
        z = np.asarray(z, dtype=complex)
        z = z[np.isfinite(z)]
        if len(z) < 2:
            return
        line = LineString(np.column_stack((z.real, z.imag))).intersection(self.view)
        for part in getattr(line, "geoms", [line]):
            if isinstance(part, LineString) and not part.is_empty:
                self.items.append(f'<polyline points="{self._coords(part.coords)}" fill="none" '
                                  f'stroke="{color}" stroke-width="{width}"/>')

    def marker(self, z, label, color="#d62728"):
        x, y = self._xy(z.real, z.imag)
        self.items.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="4" fill="{color}"/>')
        self.items.append(f'<text x="{x + 6:.3f}" y="{y - 6:.3f}" font-size="14" '
                          f'font-family="sans-serif">{escape(label)}</text>')

    def text(self, s, x=10, y=24):
        self.items.append(f'<text x="{x}" y="{y}" font-size="16" font-family="sans-serif">'
                          f'{escape(s)}</text>')

    def axes(self):
        e = self.extent
        for a, b in (((-e, 0), (e, 0)), ((0, -e), (0, e))):
            (x1, y1), (x2, y2) = self._xy(*a), self._xy(*b)
            self.items.append(f'<line x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" y2="{y2:.3f}" '
                              f'stroke="#888888" stroke-width="1"/>')

    def render(self):
        head = (f'<?xml version="1.0" encoding="UTF-8"?>\n'
                f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.size}" height="{self.size}" '
                f'viewBox="0 0 {self.size} {self.size}">\n'
                f'<rect width="{self.size}" height="{self.size}" fill="#ffffff"/>\n')
        return head + "\n".join(self.items) + "\n</svg>\n"


def extent_for(*things, minimum=1.0):
    """1.2 times the largest coordinate of the finite data."""
    m = minimum
    for th in things:
        if isinstance(th, Region):
            geom = th.geom
            if th.contains_infinity:
                geom = th.window_box.difference(geom)
            if not geom.is_empty:
                m = max(m, max(abs(v) for v in geom.bounds))
        elif th is not None:
            z = np.asarray(th, dtype=complex)
            z = z[np.isfinite(z)]
            if len(z):
                # ignore the far-out images of contour indentations
                m = max(m, float(np.quantile(np.abs(z), 0.98)))
    return 1.2 * m
