#!/usr/bin/env python3
"""Writes the JSON fixtures in data/.

Surfaces are built level by level: every level is a union of closed curves (cycles of
vertex names, where a figure-eight is a single closed walk through its wedge vertex twice),
and consecutive levels are joined by annuli between walks of equal length. Graph vertices
sit on even levels and graph edges on odd levels:

  fiber(vertex at level 2t) = closed region between levels 2t-1 and 2t+1 (that component)
  fiber(edge at level 2t+1) = the level curve itself

so two vertex fibers meet exactly in the fiber of the edge joining them.

    python3 tools/make_fixtures.py [outdir]
"""

import json
import os
import sys


class Simplicial:
    def __init__(self):
        self.order = {}
        self.simplices = set()

    def vertex(self, name):
        if name not in self.order:
            self.order[name] = len(self.order)
        return name

    def add(self, *verts):
        for v in verts:
            self.vertex(v)
        if len(set(verts)) != len(verts):
            raise ValueError(f"degenerate simplex {verts}")
        key = tuple(sorted(verts, key=self.order.__getitem__))
        for size in range(1, len(key) + 1):
            self._faces(key, size)

    def _faces(self, key, size):
        from itertools import combinations

        for face in combinations(key, size):
            self.simplices.add(face)

    def name(self, simplex):
        return ",".join(simplex)

    def to_json(self):
        cells = sorted(self.simplices, key=lambda s: (len(s), [self.order[v] for v in s]))
        out_cells = [{"id": self.name(s), "dim": len(s) - 1} for s in cells]
        covers = []
        for s in cells:
            if len(s) < 2:
                continue
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                covers.append({"from": self.name(face), "to": self.name(s), "incidence": 1 if i % 2 == 0 else -1})
        return {"cells": out_cells, "covers": covers}

    def closure_ids(self, simplices):
        """Ids of the given simplices together with all their faces."""
        from itertools import combinations

        out = set()
        for s in simplices:
            key = tuple(sorted(s, key=self.order.__getitem__))
            for size in range(1, len(key) + 1):
                for face in combinations(key, size):
                    out.add(face)
        cells = sorted(out, key=lambda s: (len(s), [self.order[v] for v in s]))
        return [self.name(c) for c in cells]


def annulus(cx, lower, upper):
    """Triangulated band between two closed walks of equal length; returns its triangles."""
    if len(lower) != len(upper):
        raise ValueError("annulus sides differ in length")
    n = len(lower)
    tris = []
    for i in range(n):
        j = (i + 1) % n
        tris.append((lower[i], lower[j], upper[i]))
        tris.append((lower[j], upper[i], upper[j]))
    for t in tris:
        cx.add(*t)
    return tris


def cone(cx, apex, walk):
    n = len(walk)
    tris = [(apex, walk[i], walk[(i + 1) % n]) for i in range(n)]
    for t in tris:
        cx.add(*t)
    return tris


def walk_edges(walk):
    n = len(walk)
    return [(walk[i], walk[(i + 1) % n]) for i in range(n)]


def circle_walk(prefix, n):
    return [f"{prefix}{i}" for i in range(n)]


def figure_eight(prefix, half):
    """Closed walk of length 2*half through the wedge vertex twice, and its two loops."""
    wedge = f"{prefix}w"
    left = [wedge] + [f"{prefix}l{i}" for i in range(1, half)]
    right = [wedge] + [f"{prefix}r{i}" for i in range(1, half)]
    return left + right, left, right


def graph_json(vertices, edges):
    """Graph as a CW complex: edges (name, lower, upper) with [lower:e] = -1, [upper:e] = +1."""
    cells = [{"id": v, "dim": 0} for v in vertices] + [{"id": e, "dim": 1} for e, _, _ in edges]
    covers = []
    for e, a, b in edges:
        covers.append({"from": a, "to": e, "incidence": -1})
        covers.append({"from": b, "to": e, "incidence": 1})
    return {"cells": cells, "covers": covers}


def layered_surface(levels, bands, bottom=None, top=None):
    """levels: list (by height) of lists of (component name, walk). bands: for consecutive
    levels, list of (lower component, lower walk, upper component, upper walk) annuli.
    bottom / top: (apex, component name) cones. Returns complex, graph, fibers."""
    cx = Simplicial()
    region = {}  # (level, component) -> triangles in the closed region around an even level
    tris_between = {}
    for h, pieces in bands.items():
        for lo_name, lo_walk, hi_name, hi_walk in pieces:
            tris = annulus(cx, lo_walk, hi_walk)
            tris_between.setdefault(h, []).append((lo_name, hi_name, tris))
    cones = []
    if bottom:
        apex, comp = bottom
        walk = dict(levels[1])[comp]
        cones.append((0, apex, cone(cx, apex, walk)))
    if top:
        apex, comp = top
        walk = dict(levels[-2])[comp]
        cones.append((len(levels) - 1, apex, cone(cx, apex, walk)))

    vertices, edges, fibers = [], [], {}
    for h, pieces in enumerate(levels):
        for comp, walk in pieces:
            if h % 2 == 0:
                vertices.append(comp)
                region[comp] = []
    for h, apex, tris in cones:
        region[levels[h][0][0]].extend(tris)
    for h, pieces in tris_between.items():
        for lo, hi, tris in pieces:
            # band between h and h+1 belongs to whichever end is an even level
            owner = lo if h % 2 == 0 else hi
            region[owner].extend(tris)
    for h, pieces in enumerate(levels):
        if h % 2 == 0:
            continue
        for comp, walk in pieces:
            below = [lo for lo, hi, _ in tris_between.get(h - 1, []) if hi == comp]
            above = [hi for lo, hi, _ in tris_between.get(h, []) if lo == comp]
            if h == 1 and bottom:
                below = [levels[0][0][0]]
            if h == len(levels) - 2 and top:
                above = [levels[-1][0][0]]
            assert len(set(below)) == 1 and len(set(above)) == 1, (comp, below, above)
            edges.append((comp, below[0], above[0]))
            fibers[comp] = cx.closure_ids([e for e in walk_edges(walk)])
    for v in vertices:
        fibers[v] = cx.closure_ids(region[v])
    return cx, graph_json(vertices, edges), fibers


def genus_two(m=3):
    """Genus-2 surface with height levels 0..18: minimum, split saddle, merge saddle, split
    saddle, merge saddle, maximum; regular levels in between."""
    L = 2 * m
    levels, bands = [], {}

    def circle(name, n):
        return (name, circle_walk(name + "_", n))

    levels.append([("bot", None)])                      # 0
    A1, A2, A3 = circle("A1", L), circle("A2", L), circle("A3", L)
    levels.append([A1])                                 # 1
    levels.append([A2])                                 # 2
    levels.append([A3])                                 # 3
    s1_walk, s1_left, s1_right = figure_eight("S1_", m)
    levels.append([("S1", s1_walk)])                    # 4
    P5, Q5 = circle("P5", m), circle("Q5", m)
    P6, Q6 = circle("P6", m), circle("Q6", m)
    P7, Q7 = circle("P7", m), circle("Q7", m)
    levels.append([P5, Q5])                             # 5
    levels.append([P6, Q6])                             # 6
    levels.append([P7, Q7])                             # 7
    s2_walk, s2_left, s2_right = figure_eight("S2_", m)
    levels.append([("S2", s2_walk)])                    # 8
    B9, B10, B11 = circle("B9", L), circle("B10", L), circle("B11", L)
    levels.append([B9])                                 # 9
    levels.append([B10])                                # 10
    levels.append([B11])                                # 11
    s3_walk, s3_left, s3_right = figure_eight("S3_", m)
    levels.append([("S3", s3_walk)])                    # 12
    P13, Q13 = circle("P13", m), circle("Q13", m)
    P14, Q14 = circle("P14", m), circle("Q14", m)
    P15, Q15 = circle("P15", m), circle("Q15", m)
    levels.append([P13, Q13])                           # 13
    levels.append([P14, Q14])                           # 14
    levels.append([P15, Q15])                           # 15
    s4_walk, s4_left, s4_right = figure_eight("S4_", m)
    levels.append([("S4", s4_walk)])                    # 16
    D17 = circle("D17", L)
    levels.append([D17])                                # 17
    levels.append([("top", None)])                      # 18

    def band(h, lo, hi):
        bands.setdefault(h, []).append((lo[0], lo[1], hi[0], hi[1]))

    band(1, A1, A2)
    band(2, A2, A3)
    band(3, A3, ("S1", s1_walk))
    band(4, ("S1", s1_left), P5)
    band(4, ("S1", s1_right), Q5)
    band(5, P5, P6)
    band(5, Q5, Q6)
    band(6, P6, P7)
    band(6, Q6, Q7)
    band(7, P7, ("S2", s2_left))
    band(7, Q7, ("S2", s2_right))
    band(8, ("S2", s2_walk), B9)
    band(9, B9, B10)
    band(10, B10, B11)
    band(11, B11, ("S3", s3_walk))
    band(12, ("S3", s3_left), P13)
    band(12, ("S3", s3_right), Q13)
    band(13, P13, P14)
    band(13, Q13, Q14)
    band(14, P14, P15)
    band(14, Q14, Q15)
    band(15, P15, ("S4", s4_left))
    band(15, Q15, ("S4", s4_right))
    band(16, ("S4", s4_walk), D17)
    levels_named = [[(name, walk) for name, walk in lv] for lv in levels]
    return layered_surface(levels_named, bands, bottom=("bot", "A1"), top=("top", "D17"))


def torus(rings=8, ring_len=3):
    """Torus as a cycle of rings; even rings are graph vertices, odd rings graph edges."""
    cx = Simplicial()
    walks = [[f"T{i}_{j}" for j in range(ring_len)] for i in range(rings)]
    tris = {}
    for i in range(rings):
        tris[i] = annulus(cx, walks[i], walks[(i + 1) % rings])
    vertices = [f"T{i}" for i in range(0, rings, 2)]
    edges, fibers = [], {}
    for i in range(1, rings, 2):
        lo, hi = f"T{i - 1}", f"T{(i + 1) % rings}"
        edges.append((f"T{i}", lo, hi))
        fibers[f"T{i}"] = cx.closure_ids(walk_edges(walks[i]))
    for i in range(0, rings, 2):
        fibers[f"T{i}"] = cx.closure_ids(tris[(i - 1) % rings] + tris[i])
    return cx, graph_json(vertices, edges), fibers


def hexagon():
    cx = Simplicial()
    for i in range(6):
        cx.add(str(i), str((i + 1) % 6))
    return cx


def arc(cx, verts):
    return cx.closure_ids([(verts[i], verts[i + 1]) for i in range(len(verts) - 1)])


def write(outdir, name, doc):
    path = os.path.join(outdir, name)
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def main():
    outdir = sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "..", "data")
    os.makedirs(outdir, exist_ok=True)

    write(outdir, "point.json", {"cells": [{"id": "p", "dim": 0}], "covers": []})
    write(outdir, "interval.json", {
        "cells": [{"id": "u", "dim": 0}, {"id": "v", "dim": 0}, {"id": "e", "dim": 1}],
        "covers": [{"from": "u", "to": "e", "incidence": 1}, {"from": "v", "to": "e", "incidence": -1}],
    })
    circle = {
        "cells": [{"id": "a", "dim": 0}, {"id": "b", "dim": 0}, {"id": "e", "dim": 1}, {"id": "f", "dim": 1}],
        "covers": [
            {"from": "a", "to": "e", "incidence": 1},
            {"from": "b", "to": "e", "incidence": -1},
            {"from": "a", "to": "f", "incidence": -1},
            {"from": "b", "to": "f", "incidence": 1},
        ],
    }
    write(outdir, "circle.json", circle)
    sheaf = {"field": {"kind": "rational"}, "cells": [dict(c, rank=1) for c in circle["cells"]],
             "covers": [dict(c, map=[["1"]]) for c in circle["covers"]]}
    write(outdir, "circle_sheaf.json", sheaf)

    tri = Simplicial()
    tri.add("a", "b", "c")
    write(outdir, "triangle.json", tri.to_json())
    broken = tri.to_json()
    for c in broken["covers"]:
        if c["from"] == "a,b" and c["to"] == "a,b,c":
            c["incidence"] = -c["incidence"]
    write(outdir, "triangle_corrupt.json", broken)
    write(outdir, "bad_field.json", {"field": {"kind": "fp", "p": 4}, "cells": [{"id": "p", "dim": 0}], "covers": []})

    hexa = hexagon()
    write(outdir, "hexagon.json", hexa.to_json())
    write(outdir, "hexagon_cover2.json", {"pieces": [
        {"name": "A", "cells": arc(hexa, ["0", "1", "2", "3"])},
        {"name": "B", "cells": arc(hexa, ["3", "4", "5", "0"])},
    ]})
    write(outdir, "hexagon_cover3.json", {"pieces": [
        {"name": "A", "cells": arc(hexa, ["0", "1", "2"])},
        {"name": "B", "cells": arc(hexa, ["2", "3", "4"])},
        {"name": "C", "cells": arc(hexa, ["4", "5", "0"])},
    ]})
    write(outdir, "hexagon_cover_triple.json", {"pieces": [
        {"name": "A", "cells": arc(hexa, ["0", "1", "2", "3"])},
        {"name": "B", "cells": arc(hexa, ["3", "4", "5", "0"])},
        {"name": "C", "cells": arc(hexa, ["2", "3", "4"])},
    ]})

    tcx, tgraph, tfibers = torus()
    write(outdir, "torus.json", tcx.to_json())
    write(outdir, "torus_fibers.json", {"graph": tgraph, "fibers": tfibers})

    gcx, ggraph, gfibers = genus_two()
    write(outdir, "genus2.json", gcx.to_json())
    write(outdir, "genus2_fibers.json", {"graph": ggraph, "fibers": gfibers})


if __name__ == "__main__":
    main()
