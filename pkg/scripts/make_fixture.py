"""Regenerate the synthetic fixture road map shipped in src/lastmile/data.

A 1:25-scale town: a 5 x 4 block grid with rounded outer corners, a one-way
outer ring, a curved street through the middle and a depot on a short spur.
Segment endpoints carry sub-millimetre jitter, mimicking rounding in survey
data, and are merged with a lane-width tolerance.
"""
import json
import math
from pathlib import Path

import numpy as np

from lastmile.network import RawSegment, build_network
from lastmile.scenario import dumps, network_to_dict

V_STRAIGHT, V_ARC = 0.5, 0.25
LANE = 0.1
R = 0.4  # corner radius
XS = [0.0, 1.2, 2.4, 3.6, 4.8]
YS = [0.0, 1.0, 2.0, 3.0]
DATA = Path(__file__).resolve().parents[1] / "src" / "lastmile" / "data"


def main():
    rng = np.random.default_rng(7)
    segs = []

    def jit(p):
        return tuple(float(round(c + rng.uniform(-0.004, 0.004), 4)) for c in p)

    def road(a, b, geometry="straight", length=None, two_way=True, depot=None):
        if length is None:
            length = math.dist(a, b)
        v = V_ARC if geometry == "arc" else V_STRAIGHT
        segs.append(dict(start=jit(a), end=jit(b), length=round(length, 4), v=v, g=geometry, depot=depot))
        if two_way:
            segs.append(dict(start=jit(b), end=jit(a), length=round(length, 4), v=v, g=geometry, depot=None))

    x0, x1, y0, y1 = XS[0], XS[-1], YS[0], YS[-1]
    arc = math.pi / 2 * R
    # one-way counter-clockwise outer ring with rounded corners
    bottom = [(x0 + R, y0)] + [(x, y0) for x in XS[1:-1]] + [(x1 - R, y0)]
    right = [(x1, y0 + R)] + [(x1, y) for y in YS[1:-1]] + [(x1, y1 - R)]
    top = [(x1 - R, y1)] + [(x, y1) for x in reversed(XS[1:-1])] + [(x0 + R, y1)]
    left = [(x0, y1 - R)] + [(x0, y) for y in reversed(YS[1:-1])] + [(x0, y0 + R)]
    for side in (bottom, right, top, left):
        for a, b in zip(side[:-1], side[1:]):
            road(a, b, two_way=False)
    road(bottom[-1], right[0], "arc", arc, two_way=False)
    road(right[-1], top[0], "arc", arc, two_way=False)
    road(top[-1], left[0], "arc", arc, two_way=False)
    road(left[-1], bottom[0], "arc", arc, two_way=False)

    # interior rows: two-way, with mid-block nodes
    for y in YS[1:-1]:
        for xa, xb in zip(XS[:-1], XS[1:]):
            mid = ((xa + xb) / 2, y)
            road((xa, y), mid)
            road(mid, (xb, y))
    # interior columns: x = 1.2 and 3.6 two-way with mid-block nodes
    for x in (XS[1], XS[3]):
        for ya, yb in zip(YS[:-1], YS[1:]):
            mid = (x, (ya + yb) / 2)
            road((x, ya), mid)
            road(mid, (x, yb))
    # centre column x = 2.4: straight at the ends, a curved one-way pair in the middle
    road((XS[2], YS[0]), (XS[2], YS[1]))
    road((XS[2], YS[2]), (XS[2], YS[3]))
    bulge = 1.25 * (YS[2] - YS[1])
    road((XS[2], YS[1]), (XS[2], YS[2]), "arc", bulge, two_way=False)
    road((XS[2], YS[2]), (XS[2] + 0.3, 1.5), "arc", bulge / 2, two_way=False)
    road((XS[2] + 0.3, 1.5), (XS[2], YS[1]), "arc", bulge / 2, two_way=False)
    # depot spur below the bottom street
    road((XS[2], -0.5), (XS[2], YS[0]), depot="start")

    raw = [RawSegment(s["start"], s["end"], s["length"], s["v"], s["g"], s["depot"]) for s in segs]
    net = build_network(raw, LANE)
    DATA.mkdir(parents=True, exist_ok=True)
    seg_doc = {
        "merge_tolerance_m": LANE,
        "segments": [
            {"start": list(s["start"]), "end": list(s["end"]), "length_m": s["length"],
             "speed_limit_mps": s["v"], "geometry": s["g"], **({"depot": s["depot"]} if s["depot"] else {})}
            for s in segs
        ],
    }
    (DATA / "fixture_segments.json").write_text(dumps(seg_doc))
    (DATA / "fixture_network.json").write_text(dumps(network_to_dict(net)))
    print(net)


if __name__ == "__main__":
    main()
