#!/usr/bin/env python3
"""Writes the synthetic AIS/chart fixtures under fixtures/.

Vessels are laid out in a local (north, east) frame in meters and converted
to lat/lon with the same equirectangular projection the library uses, so a
config that pins ingest.origin reproduces the local coordinates.
"""

import json
import math
import pathlib

R = 6371000.0
ORIGIN = (55.70, 12.60)
KNOT = 1852.0 / 3600.0
EPOCH = "01/06/2021"  # DMA exports write day-first dates

ROOT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

HEADER = [
    "# Timestamp", "Type of mobile", "MMSI", "Latitude", "Longitude", "Navigational status",
    "ROT", "SOG", "COG", "Heading", "IMO", "Callsign", "Name", "Ship type", "Width", "Length",
]


def to_geo(north, east):
    lat0, lon0 = ORIGIN
    lat = lat0 + math.degrees(north / R)
    lon = lon0 + math.degrees(east / (R * math.cos(math.radians(lat0))))
    return lat, lon


def stamp(seconds):
    h, rem = divmod(int(seconds), 3600)
    m, s = divmod(rem, 60)
    return f"{EPOCH} {12 + h:02d}:{m:02d}:{s:02d}"


def straight(mmsi, name, ship_type, length, start, heading_deg, knots, t0, t1, step=10):
    """Constant-velocity track: rows every `step` seconds over [t0, t1]."""
    rows = []
    v = knots * KNOT
    h = math.radians(heading_deg)
    t = t0
    while t <= t1 + 1e-9:
        n = start[0] + v * (t - t0) * math.cos(h)
        e = start[1] + v * (t - t0) * math.sin(h)
        lat, lon = to_geo(n, e)
        rows.append([stamp(t), "Class A", mmsi, f"{lat:.8f}", f"{lon:.8f}", "Under way using engine",
                     "0.0", f"{knots:.1f}", f"{heading_deg % 360:.1f}", f"{round(heading_deg) % 360}",
                     "", "", name, ship_type, "", "" if length is None else str(length)])
        t += step
    return rows


def waypoints(mmsi, name, ship_type, length, points, step=10):
    """Piecewise-linear track through (t, north, east) waypoints; COG and
    SOG follow the active leg."""
    rows = []
    for i in range(len(points) - 1):
        t0, n0, e0 = points[i]
        t1, n1, e1 = points[i + 1]
        dn, de = (n1 - n0) / (t1 - t0), (e1 - e0) / (t1 - t0)
        knots = math.hypot(dn, de) / KNOT
        heading = math.degrees(math.atan2(de, dn)) % 360
        t = t0
        last = i == len(points) - 2
        while t < t1 - 1e-9 or (last and t <= t1 + 1e-9):
            n, e = n0 + dn * (t - t0), e0 + de * (t - t0)
            lat, lon = to_geo(n, e)
            rows.append([stamp(t), "Class A", mmsi, f"{lat:.8f}", f"{lon:.8f}", "Under way using engine",
                         "0.0", f"{knots:.2f}", f"{heading:.2f}", f"{round(heading) % 360}",
                         "", "", name, ship_type, "", str(length)])
            t += step
    return rows


def write_csv(path, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = sorted(rows, key=lambda r: (r[0], r[2]))
    with open(path, "w") as f:
        f.write(",".join(HEADER) + "\n")
        for r in rows:
            f.write(",".join(r) + "\n")


def rect(n0, n1, e0, e1):
    corners = [(n0, e0), (n0, e1), (n1, e1), (n1, e0), (n0, e0)]
    return [[round(to_geo(n, e)[1], 8), round(to_geo(n, e)[0], 8)] for n, e in corners]


def write_json(path, doc):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")


def config(ownship, window, chart):
    paths = {"ais": "ais.csv", "output_dir": "run"}
    if chart:
        paths["chart"] = "chart.geojson"
    return {
        "paths": paths,
        "ingest": {"origin": {"lat": ORIGIN[0], "lon": ORIGIN[1]}},
        "ownship": ownship,
        "window": window,
    }


def open_water():
    # Head-on pass at 50 m lateral offset with the sea room to avoid it.
    d = ROOT / "open_water"
    rows = straight("219000001", "NORTHBOUND", "Other", 50, (-1500.0, 25.0), 0.0, 10.0, 0, 600)
    rows += straight("219000002", "SOUTHBOUND", "Other", 50, (1500.0, -25.0), 180.0, 10.0, 0, 600)
    write_csv(d / "ais.csv", rows)
    write_json(d / "config.json", config("219000001", [0, 600], chart=False))


def channel(half_width=120.0, offset=25.0):
    # Narrow fairway between two land strips; two small vessels meet head-on
    # inside it at close quarters.
    d = ROOT / "channel"
    rows = straight("219000011", "FAIRWAY NORTH", "Other", 50, (-1500.0, offset), 0.0, 10.0, 0, 600)
    rows += straight("219000012", "FAIRWAY SOUTH", "Other", 50, (1500.0, -offset), 180.0, 10.0, 0, 600)
    write_csv(d / "ais.csv", rows)
    w = half_width
    chart = {
        "type": "FeatureCollection",
        "features": [
            {"type": "Feature", "properties": {"name": "west bank"},
             "geometry": {"type": "Polygon", "coordinates": [rect(-4000, 4000, -w - 400, -w)]}},
            {"type": "Feature", "properties": {"name": "east bank"},
             "geometry": {"type": "Polygon", "coordinates": [rect(-4000, 4000, w, w + 400)]}},
            {"type": "Feature", "properties": {"name": "deep basin", "depth": 25.0},
             "geometry": {"type": "Polygon", "coordinates": [rect(5000, 6000, -500, 500)]}},
        ],
    }
    write_json(d / "chart.geojson", chart)
    write_json(d / "config.json", config("219000011", [0, 600], chart=True))


if __name__ == "__main__":
    open_water()
    channel()
