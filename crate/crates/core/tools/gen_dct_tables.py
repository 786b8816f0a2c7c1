#!/usr/bin/env python3
"""Generate the DCT-IV Givens/lifting tables in src/transform/tables.rs.

Each orthonormal DCT-IV matrix is factored by Givens QR into a diagonal sign
vector followed by plane rotations. Each rotation is later realized with three
integer lifting steps using tan(phi/2) and sin(phi) in Q14.
"""
import math
import sys

import numpy as np

SHIFT = 14


def dct4(m):
    a = np.zeros((m, m))
    for k in range(m):
        for n in range(m):
            a[k, n] = math.sqrt(2.0 / m) * math.cos(math.pi * (2 * n + 1) * (2 * k + 1) / (4 * m))
    return a


def factor(m):
    r = dct4(m)
    gens = []
    for c in range(m):
        for row in range(m - 1, c, -1):
            a, b = r[c, c], r[row, c]
            if abs(b) < 1e-15:
                r[row, c] = 0.0
                continue
            phi = math.atan2(b, a)
            co, si = math.cos(phi), math.sin(phi)
            rc, rr = r[c].copy(), r[row].copy()
            r[c] = co * rc + si * rr
            r[row] = -si * rc + co * rr
            r[row, c] = 0.0
            gens.append((c, row, phi))
    signs = [1 if r[i, i] > 0 else -1 for i in range(m)]
    assert np.allclose(np.abs(np.diag(r)), 1.0)
    ops = []
    for (i, j, phi) in reversed(gens):
        neg = False
        if phi > math.pi / 2:
            neg, phi = True, phi - math.pi
        elif phi < -math.pi / 2:
            neg, phi = True, phi + math.pi
        t = round(math.tan(phi / 2) * (1 << SHIFT))
        s = round(math.sin(phi) * (1 << SHIFT))
        ops.append((i, j, neg, t, s, phi))
    # float check of the factorization
    x = np.random.default_rng(1).standard_normal(m)
    y = x * np.array(signs)
    for (i, j, neg, _t, _s, phi) in ops:
        if neg:
            y[i], y[j] = -y[i], -y[j]
        a, b = y[i], y[j]
        y[i] = math.cos(phi) * a - math.sin(phi) * b
        y[j] = math.sin(phi) * a + math.cos(phi) * b
    assert np.allclose(y, dct4(m) @ x), m
    return signs, ops


def main():
    out = ["// Generated by tools/gen_dct_tables.py. Do not edit.", "",
           "use super::dct::Rotation;", ""]
    for m in (2, 4, 8, 16):
        signs, ops = factor(m)
        out.append(f"pub(crate) const DCT4_{m}_SIGNS: [i8; {m}] = {signs};".replace("[1", "[1").replace("'", ""))
        out.append(f"pub(crate) const DCT4_{m}_ROTATIONS: [Rotation; {len(ops)}] = [")
        for (i, j, neg, t, s, _phi) in ops:
            out.append(f"    Rotation::new({i}, {j}, {str(neg).lower()}, {t}, {s}),")
        out.append("];")
        out.append("")
    sys.stdout.write("\n".join(out))


if __name__ == "__main__":
    main()
