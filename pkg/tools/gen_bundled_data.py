"""Regenerate the model files and traces shipped under evimon/data/.

Run from the repository root:  python tools/gen_bundled_data.py
"""

import json
import pathlib
import sys

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from evimon.belief import Frame
from evimon.generate import generate_trace, manifest_lines
from evimon.iohmm import EvIohmm
from evimon.modelfile import write_model
from evimon.possibility import (
    Constraint,
    ConstraintVector,
    constant,
    crisp_above,
    crisp_below,
    crisp_interval,
    ramp_down,
    ramp_up,
    trapezoid,
)
from evimon.trace import TraceRecord, write_trace

DATA = pathlib.Path(__file__).resolve().parents[1] / "src" / "evimon" / "data"


def cv(*entries):
    return ConstraintVector(tuple(Constraint(*e) for e in entries))


def luminosity_model(crisp=False):
    frame = Frame(["x1", "x2"])
    if crisp:
        to_x1 = cv(("pres", crisp_below(3.0)))
        to_x2 = cv(("pres", crisp_above(20.0)))
        emissions = (
            cv(("lum", crisp_below(5.0))),
            cv(("lum", crisp_above(25.0))),
        )
    else:
        to_x1 = cv(("pres", ramp_down(3.0, 5.0)))
        to_x2 = cv(("pres", ramp_up(15.0, 20.0)))
        emissions = (
            cv(("lum", ramp_down(5.0, 10.0))),
            cv(("lum", ramp_up(23.0, 25.0))),
        )
    return EvIohmm(
        frame,
        ((to_x1, to_x2), (to_x1, to_x2)),
        emissions,
        rule="dempster",
        input_variables=("pres",),
        output_variables=("lum",),
        name="luminosity_crisp" if crisp else "luminosity",
    )


# French speed-limit contexts: outside urban areas the in-force limit
# drops under rain (90->80, 110->100, 130->110) and to 50 under very low
# visibility; urban limits (30/50/70, plus the 90 km/h urban motorway)
# only react to visibility.  One state per context, 11 in all.  Speed
# tolerances allow the usual 5% radar margin above each limit.
SPEED_STATES = [
    # name,                base ms,  weather, limit
    ("ZONE_30", 30.0, "ignore", 30.0),
    ("URBAN_50", 50.0, "ignore", 50.0),
    ("SECTION_70", 70.0, "ignore", 70.0),
    ("ROAD_90_DRY", 90.0, "dry", 90.0),
    ("ROAD_90_RAIN", 90.0, "rain", 80.0),
    ("TRUNK_110_DRY", 110.0, "dry", 110.0),
    ("TRUNK_110_RAIN", 110.0, "rain", 100.0),
    ("MOTORWAY_130_DRY", 130.0, "dry", 130.0),
    ("MOTORWAY_130_RAIN", 130.0, "rain", 110.0),
    ("URBAN_MOTORWAY_90", 90.0, "ignore", 90.0),
    ("LOW_VISIBILITY_50", None, "ignore", 50.0),
]

DRY = ramp_down(0.1, 0.5)
RAIN = ramp_up(0.1, 0.5)
VIS_OK = ramp_up(0.05, 0.2)
VIS_LOW = ramp_down(0.05, 0.2)


def speed_limits_model():
    frame = Frame([name for name, *_ in SPEED_STATES])
    gates = []
    for name, ms, weather, _limit in SPEED_STATES:
        entries = []
        if ms is None:
            # reached on visibility alone; other inputs deliberately ignored
            entries.append(("max_speed", constant(1.0), True))
            entries.append(("precipitation", constant(1.0), True))
            entries.append(("visibility", VIS_LOW))
        else:
            entries.append(("max_speed", crisp_interval(ms - 5.0, ms + 5.0)))
            if weather == "dry":
                entries.append(("precipitation", DRY))
            elif weather == "rain":
                entries.append(("precipitation", RAIN))
            else:
                entries.append(("precipitation", constant(1.0), True))
            entries.append(("visibility", VIS_OK))
        gates.append(cv(*entries))
    transitions = tuple(tuple(gates) for _ in SPEED_STATES)
    emissions = tuple(
        cv(("speed", ramp_down(limit, 1.05 * limit)))
        for _name, _ms, _w, limit in SPEED_STATES
    )
    return EvIohmm(
        frame,
        transitions,
        emissions,
        rule="dempster",
        input_variables=("max_speed", "precipitation", "visibility"),
        output_variables=("speed",),
        name="speed_limits",
    )


def ride_comfort_model():
    frame = Frame(["CRUISE", "CALMING_HUMP", "CALMING_GIVE_WAY"])
    to_cruise = cv(("hump", crisp_below(0.5)), ("give_way", crisp_below(0.5)))
    to_hump = cv(("hump", crisp_above(0.5)), ("give_way", constant(1.0), True))
    to_give_way = cv(("hump", constant(1.0), True), ("give_way", crisp_above(0.5)))
    gates = (to_cruise, to_hump, to_give_way)
    calming = cv(("accel", trapezoid(-4.0, -3.5, 1.0, 1.5)))
    return EvIohmm(
        frame,
        tuple(tuple(gates) for _ in range(3)),
        (cv(("accel", trapezoid(-2.5, -2.0, 2.0, 2.5))), calming, calming),
        rule="dempster",
        input_variables=("hump", "give_way"),
        output_variables=("accel",),
        name="ride_comfort",
    )


def speed_trace_600():
    """Comfort driving with one tolerance dip and one hard breach.

    Records 180..189 run 92 km/h in a dry 90 zone (inside the 5% radar
    tolerance band); records 450..452 run far beyond any limit.
    """
    rng = np.random.default_rng(42)
    segments = [
        (0, 150, 50.0, 44.0, 3.0),
        (150, 300, 90.0, 82.0, 4.0),
        (300, 450, 130.0, 120.0, 5.0),
        (450, 600, 130.0, 120.0, 5.0),
    ]
    dip = range(180, 190)
    breach = range(450, 453)
    records = []
    for start, stop, ms, cruise, spread in segments:
        for t in range(start, stop):
            if t in dip:
                speed = 92.0
            elif t in breach:
                speed = 150.0 + float(rng.uniform(0.0, 10.0))
            else:
                speed = cruise + float(rng.uniform(-spread, spread))
            records.append(
                TraceRecord(
                    float(t),
                    {"max_speed": ms, "precipitation": 0.0, "visibility": 10.0},
                    {"speed": round(speed, 2)},
                )
            )
    zones = [
        "tolerance" if t in dip else "breach" if t in breach else "comfort"
        for t in range(600)
    ]
    return records, zones


def main():
    models_dir = DATA / "models"
    traces_dir = DATA / "traces"
    models_dir.mkdir(parents=True, exist_ok=True)
    traces_dir.mkdir(parents=True, exist_ok=True)

    lum = luminosity_model()
    write_model(lum, models_dir / "luminosity.json")
    write_model(luminosity_model(crisp=True), models_dir / "luminosity_crisp.json")
    speed = speed_limits_model()
    write_model(speed, models_dir / "speed_limits.json")
    ride = ride_comfort_model()
    write_model(ride, models_dir / "ride_comfort.json")

    def dump_trace(name, model, records, zones, note):
        write_trace(
            traces_dir / f"{name}.csv",
            records,
            model.input_variables,
            model.output_variables,
        )
        manifest = {
            "model": model.name,
            "records": len(records),
            "note": note,
            "zones": manifest_lines(zones),
        }
        with open(traces_dir / f"{name}.manifest.json", "w", newline="\n") as fh:
            json.dump(manifest, fh, indent=2)
            fh.write("\n")

    records, zones = generate_trace(lum, "comfort", 30, seed=1)
    dump_trace("luminosity_comfort_30", lum, records, zones, "all records in comfort zones")

    records, zones = speed_trace_600()
    dump_trace(
        "speed_limits_mixed_600",
        speed,
        records,
        zones,
        "92 km/h in a 90 zone at records 180-189; runaway speed at 450-452",
    )

    records, zones = generate_trace(ride, "mixed", 120, seed=7)
    dump_trace(
        "ride_comfort_mixed_120",
        ride,
        records,
        zones,
        "mixed zone classes; out.accel is synthesized directly in m/s^2 "
        "(not differenced from a speed series, so no differencing window applies)",
    )

    print("bundled data regenerated under", DATA)


if __name__ == "__main__":
    main()
