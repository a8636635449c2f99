"""Minimal SVG output: CDF overlays and step paths."""
from __future__ import annotations

import numpy as np

W, H, PAD = 480, 320, 40


def _frame(body: list[str], title: str) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
            f'viewBox="0 0 {W} {H}">\n'
            f'<rect width="{W}" height="{H}" fill="white"/>\n'
            f'<text x="{PAD}" y="20" font-size="13" font-family="sans-serif">{title}</text>\n'
            f'<rect x="{PAD}" y="{PAD}" width="{W - 2 * PAD}" height="{H - 2 * PAD}" '
            f'fill="none" stroke="#888"/>\n')
    return head + "\n".join(body) + "\n</svg>\n"


def _polyline(xs, ys, x_range, y_range, color, width=1.5) -> str:
    x0, x1 = x_range
    y0, y1 = y_range
    sx = PAD + (np.asarray(xs) - x0) / max(x1 - x0, 1e-300) * (W - 2 * PAD)
    sy = H - PAD - (np.asarray(ys) - y0) / max(y1 - y0, 1e-300) * (H - 2 * PAD)
    pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(sx, sy))
    return f'<polyline fill="none" stroke="{color}" stroke-width="{width}" points="{pts}"/>'


def cdf_overlay(samples, cdf, title="empirical vs theoretical CDF") -> str:
    x = np.sort(np.asarray(samples, float))
    if x.size == 0:
        return _frame([], title)
    hi = float(np.quantile(x, 0.95)) if x[-1] > 0 else 1.0
    hi = hi if hi > 0 else 1.0
    grid = np.linspace(0.0, hi, 200)
    emp = np.searchsorted(x, grid, side="right") / x.size
    theo = np.asarray(cdf(grid), float)
    body = [_polyline(grid, emp, (0, hi), (0, 1), "#1f77b4"),
            _polyline(grid, theo, (0, hi), (0, 1), "#d62728", 1.0)]
    return _frame(body, title)


def step_paths(times, paths, title="f(X(t)) per path") -> str:
    times = np.asarray(times, float)
    paths = [np.asarray(p, float) for p in paths]
    top = max((float(p.max()) for p in paths if p.size), default=1.0) or 1.0
    t_hi = float(times[-1]) if times.size else 1.0
    body = []
    colors = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd"]
    for i, p in enumerate(paths):
        xs = np.concatenate([[0.0], np.repeat(times, 2)])
        ys = np.concatenate([[0.0, 0.0], np.repeat(p, 2)[:-1]])
        body.append(_polyline(xs, ys, (0, t_hi), (0, top), colors[i % len(colors)]))
    return _frame(body, title)
