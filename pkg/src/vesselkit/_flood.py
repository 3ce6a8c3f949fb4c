"""Compiled flood-fill kernels behind the connectivity filters.

Both kernels work on flattened row-major rasters and use explicit stacks, so
the traversal depth is bounded by the pixel count rather than the Python
recursion limit.
"""
import numpy as np
from numba import njit


@njit(cache=True)
def component_sizes(mask, dx, dy):
    """Size of the connected component of every white pixel (0 on background)."""
    h, w = mask.shape
    n = h * w
    flat = mask.ravel()
    seen = np.zeros(n, dtype=np.uint8)
    scores = np.zeros(n, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    members = np.empty(n, dtype=np.int64)
    for seed in range(n):
        if flat[seed] == 0 or seen[seed]:
            continue
        seen[seed] = 1
        stack[0] = seed
        sp = 1
        count = 0
        while sp > 0:
            sp -= 1
            p = stack[sp]
            members[count] = p
            count += 1
            py = p // w
            px = p - py * w
            for k in range(dx.shape[0]):
                nx = px + dx[k]
                ny = py + dy[k]
                if nx < 0 or ny < 0 or nx >= w or ny >= h:
                    continue
                q = ny * w + nx
                if flat[q] and not seen[q]:
                    seen[q] = 1
                    stack[sp] = q
                    sp += 1
        for i in range(count):
            scores[members[i]] = count
    return scores.reshape(h, w)


@njit(cache=True)
def _segment(x0, y0, x1, y1, out_x, out_y):
    """Bresenham rasterization from (x0, y0) to (x1, y1); returns the point count."""
    ax = abs(x1 - x0)
    ay = -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = ax + ay
    x = x0
    y = y0
    m = 0
    while True:
        out_x[m] = x
        out_y[m] = y
        m += 1
        if x == x1 and y == y1:
            break
        e2 = 2 * err
        if e2 >= ay:
            err += ay
            x += sx
        if e2 <= ax:
            err += ax
            y += sy
    return m


@njit(cache=True)
def local_sensitive(mask, max_score, max_dist, flood_dx, flood_dy, flood_order,
                    cand_dx, cand_dy, cand_ring, ring_order, radius):
    """Flood fill with tolerance-driven gap bridging.

    ``flood_order[dir]`` and ``ring_order[dir]`` hold neighbor / ring-candidate
    indices sorted for the incoming travel direction ``dir``; direction
    ``(vx, vy)`` is stored at ``(vy + radius) * (2 * radius + 1) + vx + radius``.
    Candidates are sorted by ring first, so the ring loop can stop early.

    Returns ``(repaired, scores)``.
    """
    h, w = mask.shape
    n = h * w
    side = 2 * radius + 1
    still = radius * side + radius
    nf = flood_dx.shape[0]
    nc = cand_dx.shape[0]
    search_enabled = max_score > 0 and max_dist > 1

    repaired = mask.copy().ravel()
    visited = np.zeros(n, dtype=np.uint8)
    scores = np.zeros(n, dtype=np.int64)
    members = np.empty(n, dtype=np.int64)

    # one frame per pixel whose neighborhood is being expanded
    f_pix = np.empty(n, dtype=np.int64)
    f_dir = np.empty(n, dtype=np.int64)
    f_k = np.empty(n, dtype=np.int64)
    f_q = np.empty(n, dtype=np.int64)  # gap pixel being searched from, -1 if none
    f_qdir = np.empty(n, dtype=np.int64)
    f_j = np.empty(n, dtype=np.int64)
    f_tol = np.empty(n, dtype=np.int64)
    f_found = np.empty(n, dtype=np.int64)

    seg_x = np.empty(2 * side + 2, dtype=np.int64)
    seg_y = np.empty(2 * side + 2, dtype=np.int64)

    total = 0
    for seed in range(n):
        if repaired[seed] == 0 or visited[seed]:
            continue
        start = total
        visited[seed] = 1
        members[total] = seed
        total += 1
        f_pix[0] = seed
        f_dir[0] = still
        f_k[0] = 0
        f_q[0] = -1
        sp = 1
        while sp > 0:
            t = sp - 1
            p = f_pix[t]
            py = p // w
            px = p - py * w

            if f_q[t] >= 0:
                j = f_j[t]
                if j >= nc:
                    f_q[t] = -1
                    continue
                c = ring_order[f_qdir[t], j]
                ring = cand_ring[c]
                if ring >= max_dist or (f_found[t] >= 0 and ring > f_found[t]) or f_tol[t] >= max_score:
                    f_q[t] = -1
                    continue
                f_j[t] = j + 1
                q = f_q[t]
                qy = q // w
                qx = q - qy * w
                rx = qx + cand_dx[c]
                ry = qy + cand_dy[c]
                if rx < 0 or ry < 0 or rx >= w or ry >= h:
                    continue
                r = ry * w + rx
                if repaired[r] == 0:
                    f_tol[t] += 1
                    continue
                if visited[r]:
                    continue
                # bridge from the boundary pixel to the found pixel
                vdir = (ry - py + radius) * side + (rx - px + radius)
                m = _segment(px, py, rx, ry, seg_x, seg_y)
                for i in range(1, m - 1):
                    b = seg_y[i] * w + seg_x[i]
                    if visited[b]:
                        continue
                    was_white = repaired[b]
                    repaired[b] = 1
                    visited[b] = 1
                    members[total] = b
                    total += 1
                    if was_white:
                        f_pix[sp] = b
                        f_dir[sp] = vdir
                        f_k[sp] = 0
                        f_q[sp] = -1
                        sp += 1
                visited[r] = 1
                members[total] = r
                total += 1
                f_pix[sp] = r
                f_dir[sp] = vdir
                f_k[sp] = 0
                f_q[sp] = -1
                sp += 1
                f_found[t] = ring
                f_tol[t] = 0
                continue

            k = f_k[t]
            if k >= nf:
                sp -= 1
                continue
            f_k[t] = k + 1
            o = flood_order[f_dir[t], k]
            nx = px + flood_dx[o]
            ny = py + flood_dy[o]
            if nx < 0 or ny < 0 or nx >= w or ny >= h:
                continue
            q = ny * w + nx
            if repaired[q]:
                if not visited[q]:
                    visited[q] = 1
                    members[total] = q
                    total += 1
                    f_pix[sp] = q
                    f_dir[sp] = (flood_dy[o] + radius) * side + flood_dx[o] + radius
                    f_k[sp] = 0
                    f_q[sp] = -1
                    sp += 1
            elif search_enabled:
                # gap entry costs one unit of tolerance
                f_q[t] = q
                f_qdir[t] = (flood_dy[o] + radius) * side + flood_dx[o] + radius
                f_j[t] = 0
                f_tol[t] = 1
                f_found[t] = -1
        size = total - start
        for i in range(start, total):
            scores[members[i]] = size
    return repaired.reshape(h, w), scores.reshape(h, w)
