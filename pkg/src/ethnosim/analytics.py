"""Measurement exports: flat CSV tables derived from a finished (or
in-progress) run, plus a manifest with per-file digests.

Every table that is a time series puts ``round`` in the first column.
Exports are deterministic: the same session state always produces
byte-identical files.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from pathlib import Path

from .world import WorldMap

#: Marker written when a value is undefined (e.g. the mean mood of a
#: region containing no agents). Deliberately not ``0``: an empty region
#: has no mood, neutral or otherwise.
UNDEFINED = "NA"

CSV_FILES = (
    "positions.csv",
    "emotions.csv",
    "chats.csv",
    "questionnaire.csv",
    "trust.csv",
    "events.csv",
    "heatmap.csv",
    "ambient_mood.csv",
)


def _fmt(value: float) -> str:
    return f"{value:.6f}"


def positions_rows(trajectory: list[dict]) -> list[list]:
    return [
        [row["round"], row["agent"], row["x"], row["y"], row["region"]]
        for row in trajectory
    ]


def emotions_rows(trajectory: list[dict]) -> list[list]:
    return [
        [
            row["round"],
            row["agent"],
            _fmt(row["v"]),
            _fmt(row["a"]),
            _fmt(row["d"]),
            _fmt(row["overall"]),
        ]
        for row in trajectory
    ]


def chats_rows(records: list[dict]) -> list[list]:
    rows = []
    for record in records:
        for chat in record.get("chats", ()):
            rows.append(
                [
                    record["round"],
                    chat["speaker"],
                    "|".join(chat["peers"]),
                    chat["utterance"],
                ]
            )
    return rows


def events_rows(records: list[dict]) -> list[list]:
    rows = []
    for record in records:
        for entry in record.get("events", ()):
            if "diagnostic" in entry:
                rows.append([entry["round"], "", "diagnostic", entry["diagnostic"]])
            else:
                rows.append(
                    [entry["round"], entry["id"], entry["cause_kind"], entry["cause_ref"] or ""]
                )
    return rows


def heatmap_rows(trajectory: list[dict], world: WorldMap) -> list[list]:
    counts: dict[tuple[int, int], int] = {}
    for row in trajectory:
        key = (row["x"], row["y"])
        counts[key] = counts.get(key, 0) + 1
    rows = []
    for y in range(world.height):
        for x in range(world.width):
            if world.is_wall((x, y)):
                continue
            rows.append([x, y, counts.get((x, y), 0)])
    return rows


def ambient_mood_rows(trajectory: list[dict], world: WorldMap) -> list[list]:
    """Per round and region, the mean overall emotion of the agents
    inside it; ``NA`` when the region is empty that round."""
    by_round: dict[int, dict[str, list[float]]] = {}
    for row in trajectory:
        bucket = by_round.setdefault(row["round"], {})
        if row["region"]:
            bucket.setdefault(row["region"], []).append(row["overall"])
    rows = []
    for round_index in sorted(by_round):
        bucket = by_round[round_index]
        for region in world.regions:
            values = bucket.get(region.name, [])
            if values:
                rows.append(
                    [round_index, region.name, _fmt(sum(values) / len(values))]
                )
            else:
                rows.append([round_index, region.name, UNDEFINED])
    return rows


def questionnaire_rows(measurements: list[dict]) -> list[list]:
    return [
        [m["round"], m["agent"], m["prompt"], m["answer"]]
        for m in measurements
        if m.get("kind") == "questionnaire"
    ]


def trust_rows(measurements: list[dict]) -> list[list]:
    return [
        [m["round"], m["agent"], m["target"], m["answer"]]
        for m in measurements
        if m.get("kind") == "trust"
    ]


_HEADERS = {
    "positions.csv": ["round", "agent", "x", "y", "region"],
    "emotions.csv": ["round", "agent", "v", "a", "d", "overall"],
    "chats.csv": ["round", "speaker", "peers", "utterance"],
    "questionnaire.csv": ["round", "agent", "prompt", "answer"],
    "trust.csv": ["round", "agent", "target", "answer"],
    "events.csv": ["round", "event", "cause_kind", "cause_ref"],
    "heatmap.csv": ["x", "y", "visits"],
    "ambient_mood.csv": ["round", "region", "mean_overall"],
}


def render_csv(name: str, rows: list[list]) -> bytes:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(_HEADERS[name])
    writer.writerows(rows)
    return buffer.getvalue().encode("utf-8")


def build_tables(
    world: WorldMap,
    trajectory: list[dict],
    records: list[dict],
    measurements: list[dict],
) -> dict[str, bytes]:
    return {
        "positions.csv": render_csv("positions.csv", positions_rows(trajectory)),
        "emotions.csv": render_csv("emotions.csv", emotions_rows(trajectory)),
        "chats.csv": render_csv("chats.csv", chats_rows(records)),
        "questionnaire.csv": render_csv(
            "questionnaire.csv", questionnaire_rows(measurements)
        ),
        "trust.csv": render_csv("trust.csv", trust_rows(measurements)),
        "events.csv": render_csv("events.csv", events_rows(records)),
        "heatmap.csv": render_csv("heatmap.csv", heatmap_rows(trajectory, world)),
        "ambient_mood.csv": render_csv(
            "ambient_mood.csv", ambient_mood_rows(trajectory, world)
        ),
    }


def export_run(
    out_dir: str | Path,
    world: WorldMap,
    trajectory: list[dict],
    records: list[dict],
    measurements: list[dict],
    final_digest: str,
) -> dict:
    """Write every CSV plus ``manifest.json``; returns the manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tables = build_tables(world, trajectory, records, measurements)
    manifest: dict = {"files": {}, "final_digest": final_digest}
    rounds = [r["round"] for r in records]
    manifest["rounds"] = max(rounds) + 1 if rounds else 0
    for name in CSV_FILES:
        data = tables[name]
        (out / name).write_bytes(data)
        manifest["files"][name] = {
            "rows": data.count(b"\n") - 1,
            "sha256": hashlib.sha256(data).hexdigest(),
        }
    (out / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return manifest


def fit_linear(xs: list[float], ys: list[float]) -> tuple[float, float, float]:
    """Least-squares line fit; returns (slope, intercept, r_squared)."""
    import numpy as np

    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.size < 2:
        raise ValueError("need at least two points")
    slope, intercept = np.polyfit(x, y, 1)
    predicted = slope * x + intercept
    ss_res = float(np.sum((y - predicted) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return float(slope), float(intercept), r2
