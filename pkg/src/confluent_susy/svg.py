"""Bare-bones SVG line charts (no plotting dependency)."""
import numpy as np

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def line_chart(x, series, width=640, height=400, margin=40, title=""):
    """Return SVG text plotting each ``series`` (name -> y array) against x."""
    x = np.asarray(x, dtype=float)
    ys = [np.asarray(v, dtype=float) for v in series.values()]
    ymin = min(float(np.min(y)) for y in ys)
    ymax = max(float(np.max(y)) for y in ys)
    if ymax == ymin:
        ymax = ymin + 1.0
    pad = 0.05 * (ymax - ymin)
    ymin, ymax = ymin - pad, ymax + pad
    x0, x1 = float(x[0]), float(x[-1])

    def px(v):
        return margin + (v - x0) / (x1 - x0) * (width - 2 * margin)

    def py(v):
        return height - margin - (v - ymin) / (ymax - ymin) * (height - 2 * margin)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="{margin}" y="{margin}" width="{width - 2 * margin}" '
        f'height="{height - 2 * margin}" fill="none" stroke="black"/>',
    ]
    if title:
        parts.append(f'<text x="{width / 2:.1f}" y="{margin / 2:.1f}" text-anchor="middle" '
                     f'font-size="14">{title}</text>')
    for k, (name, y) in enumerate(zip(series, ys)):
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y))
        color = _COLORS[k % len(_COLORS)]
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        parts.append(f'<text x="{width - margin - 4}" y="{margin + 16 * (k + 1)}" '
                     f'text-anchor="end" fill="{color}" font-size="12">{name}</text>')
    parts.append(f'<text x="{margin}" y="{height - margin / 3:.1f}" font-size="11">{x0:g}</text>')
    parts.append(f'<text x="{width - margin}" y="{height - margin / 3:.1f}" text-anchor="end" '
                 f'font-size="11">{x1:g}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
