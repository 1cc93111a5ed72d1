"""Independent closed-form oracles used by the sensor and geometry tests.

These deliberately use different formulations than the library (np.roots,
np.linalg.solve, rectangles as four explicit segments) so a shared bug
cannot cancel out.
"""
import numpy as np


def oracle_ray_circle(origin, angle, center, radius):
    """Smallest positive t with |origin + t*d - center| = radius, else inf."""
    d = np.array([np.cos(angle), np.sin(angle)])
    oc = np.asarray(origin, dtype=float) - np.asarray(center, dtype=float)
    # |oc + t d|^2 = r^2  ->  t^2 + 2 t oc.d + |oc|^2 - r^2 = 0
    coeffs = [1.0, 2.0 * oc @ d, oc @ oc - radius * radius]
    roots = np.roots(coeffs)
    real = roots[np.abs(roots.imag) < 1e-12].real
    hits = real[real > 1e-12]
    return float(hits.min()) if hits.size else np.inf


def oracle_ray_segment(origin, angle, a, b):
    """Ray-segment intersection distance via a 2x2 linear solve, else inf."""
    d = np.array([np.cos(angle), np.sin(angle)])
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    seg = b - a
    mat = np.array([[d[0], -seg[0]], [d[1], -seg[1]]])
    if abs(np.linalg.det(mat)) < 1e-12:
        return np.inf
    t, u = np.linalg.solve(mat, a - np.asarray(origin, dtype=float))
    if t > 1e-12 and -1e-12 <= u <= 1 + 1e-12:
        return float(t)
    return np.inf


def rect_corners(center, rot, length, width):
    hx, hy = length / 2.0, width / 2.0
    local = np.array([[hx, hy], [-hx, hy], [-hx, -hy], [hx, -hy]])
    ca, sa = np.cos(rot), np.sin(rot)
    R = np.array([[ca, -sa], [sa, ca]])
    return local @ R.T + np.asarray(center, dtype=float)


def oracle_ray_rect(origin, angle, center, rot, length, width):
    """Rectangle boundary as four segments; min of the segment distances."""
    c = rect_corners(center, rot, length, width)
    dists = [
        oracle_ray_segment(origin, angle, c[i], c[(i + 1) % 4]) for i in range(4)
    ]
    return min(dists)


def oracle_point_rect(p, center, rot, length, width):
    """Closest point on a rectangle's boundary to p (interior maps to a wall)."""
    p = np.asarray(p, dtype=float)
    c = rect_corners(center, rot, length, width)
    best, best_d = None, np.inf
    for i in range(4):
        a, b = c[i], c[(i + 1) % 4]
        seg = b - a
        t = np.clip((p - a) @ seg / (seg @ seg), 0.0, 1.0)
        q = a + t * seg
        d = np.linalg.norm(p - q)
        if d < best_d:
            best, best_d = q, d
    return best


def oracle_segment_segment(a1, b1, a2, b2, samples=2001):
    """Brute-force min distance between two segments by dense sampling."""
    t = np.linspace(0.0, 1.0, samples)
    p1 = np.asarray(a1, dtype=float)[None, :] + t[:, None] * (
        np.asarray(b1, dtype=float) - np.asarray(a1, dtype=float)
    )[None, :]
    p2 = np.asarray(a2, dtype=float)[None, :] + t[:, None] * (
        np.asarray(b2, dtype=float) - np.asarray(a2, dtype=float)
    )[None, :]
    d = np.linalg.norm(p1[:, None, :] - p2[None, :, :], axis=2)
    return float(d.min())
