"""Independent brute-force oracles used to check the library implementations.

Nothing here shares code with the package: the hull oracle is a plain O(n*k)
gift-wrapping march, membership is even-odd ray casting, and both work from
first principles on raw coordinate lists.
"""

import numpy as np


def gift_wrap(points):
    """Convex hull by gift wrapping (Jarvis march); CCW vertex array.

    Starts from the lexicographically smallest point and repeatedly wraps to
    the most counterclockwise remaining point, breaking exact ties by taking
    the farther point so collinear interior points never become vertices.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    pts = np.unique(pts, axis=0)
    n = len(pts)
    start = 0  # np.unique sorts lexicographically
    hull = [start]
    cur = start
    while True:
        nxt = (cur + 1) % n
        for cand in range(n):
            if cand == cur:
                continue
            cross = (pts[nxt, 0] - pts[cur, 0]) * (pts[cand, 1] - pts[cur, 1]) - (
                pts[nxt, 1] - pts[cur, 1]
            ) * (pts[cand, 0] - pts[cur, 0])
            if cross < 0.0:
                nxt = cand
            elif cross == 0.0:
                d_nxt = np.sum((pts[nxt] - pts[cur]) ** 2)
                d_cand = np.sum((pts[cand] - pts[cur]) ** 2)
                if d_cand > d_nxt:
                    nxt = cand
        if nxt == start:
            break
        hull.append(nxt)
        cur = nxt
    return pts[hull]


def in_polygon_raycast(vertices, p, edge_tol=1e-12):
    """Even-odd ray casting membership test for a simple polygon.

    A point within ``edge_tol`` (perpendicular meters) of some edge counts as
    inside, so boundary points do not flip with float noise.
    """
    v = np.asarray(vertices, dtype=float)
    x, y = float(p[0]), float(p[1])
    n = len(v)
    for i in range(n):
        ax, ay = v[i]
        bx, by = v[(i + 1) % n]
        # On-segment check against edge_tol.
        ex, ey = bx - ax, by - ay
        ln = np.hypot(ex, ey)
        if ln > 0.0:
            t = ((x - ax) * ex + (y - ay) * ey) / (ln * ln)
            t = min(1.0, max(0.0, t))
            if np.hypot(x - (ax + t * ex), y - (ay + t * ey)) <= edge_tol:
                return True
    inside = False
    for i in range(n):
        ax, ay = v[i]
        bx, by = v[(i + 1) % n]
        if (ay > y) != (by > y):
            x_cross = ax + (y - ay) * (bx - ax) / (by - ay)
            if x_cross > x:
                inside = not inside
    return inside
