#!/usr/bin/env python3
"""Generates the bundled 8x8 marker library (data/markers_8x8.artpl).

Greedy seeded search: every payload must stay at least MIN_DIST cells away
from every other accepted payload under all four rotations, and from its
own rotations.
"""
import random
import sys

GRID = 8
COUNT = 16
MIN_DIST = 8
SEED = 20110302


def rotate(g):
    n = len(g)
    return [[g[c][n - 1 - r] for c in range(n)] for r in range(n)]


def dist(a, b):
    return sum(x != y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def rotations(g):
    out = [g]
    for _ in range(3):
        out.append(rotate(out[-1]))
    return out


def main():
    rng = random.Random(SEED)
    accepted = []
    while len(accepted) < COUNT:
        g = [[0] * GRID for _ in range(GRID)]
        for r in range(1, GRID - 1):
            for c in range(1, GRID - 1):
                g[r][c] = rng.randint(0, 1)
        rots = rotations(g)
        if any(dist(rots[k], g) < MIN_DIST for k in (1, 2, 3)):
            continue
        if any(dist(rg, a) < MIN_DIST for a in accepted for rg in rots):
            continue
        accepted.append(g)

    out = ["ARTPL 1"]
    for i, g in enumerate(accepted):
        out.append(f"marker {i} {GRID}")
        out.extend("".join(str(v) for v in row) for row in g)
    sys.stdout.write("\n".join(out) + "\n")


if __name__ == "__main__":
    main()
