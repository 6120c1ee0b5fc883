"""Readers and writers for the on-disk formats of a run directory.

All text is UTF-8 with LF line endings; CSVs go through the ``csv``
module with ``lineterminator="\\n"`` so output is byte-stable.
"""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Iterable, Sequence

from .growth import EVENT_NAMES, Trajectory
from .holetrack import HoleRecord, SplitTree
from .homology import PersistenceInterval
from .lattice import CellCoord, GrowthState, codec_for


def _writer(f) -> csv.writer:
    return csv.writer(f, lineterminator="\n")


def cell_str(c: Sequence[int]) -> str:
    return ";".join(map(str, c))


def parse_cell(s: str) -> CellCoord:
    return tuple(int(x) for x in s.split(";"))


def _opt(x) -> str:
    return "" if x is None else str(x)


# --- events -------------------------------------------------------------

def events_header(d: int) -> list[str]:
    return ["step", "cell"] + [f"db{i}" for i in range(1, d)] + ["hole_event"]


def write_events(path: Path, traj: Trajectory) -> None:
    d = traj.d
    dec = traj.codec.decode
    with open(path, "w", encoding="utf-8", newline="") as f:
        w = _writer(f)
        w.writerow(events_header(d))
        w.writerow([1, cell_str(dec(traj.tiles[0]))] + [""] * (d - 1) + ["none"])
        cols = [traj.db.get(i) for i in range(1, d)]
        he = traj.hole_events
        for k, key in enumerate(traj.tiles[1:]):
            row = [k + 2, cell_str(dec(key))]
            row.extend("" if c is None else c[k] for c in cols)
            row.append(EVENT_NAMES[he[k]] if he is not None else "")
            w.writerow(row)


def read_events(path: Path) -> tuple[int, list[CellCoord], dict[int, list[int]], list[str]]:
    """(d, cells in addition order, {i: per-step deltas from step 2}, hole events)."""
    with open(path, encoding="utf-8", newline="") as f:
        r = csv.reader(f)
        head = next(r)
        if head[:2] != ["step", "cell"] or head[-1] != "hole_event":
            raise ValueError(f"{path}: not an event log")
        d = len(head) - 2
        cells = []
        db: dict[int, list[int]] = {i: [] for i in range(1, d)}
        events = []
        for lineno, row in enumerate(r, start=2):
            if int(row[0]) != lineno - 1:
                raise ValueError(f"{path}:{lineno}: steps must increase by 1")
            cells.append(parse_cell(row[1]))
            if lineno > 2:
                for i in range(1, d):
                    if row[1 + i] != "":
                        db[i].append(int(row[1 + i]))
                events.append(row[-1])
    return d, cells, {i: v for i, v in db.items() if v}, events


def replay_cells(cells: Sequence[CellCoord], upto: int | None = None) -> GrowthState:
    upto = len(cells) if upto is None else upto
    if not 1 <= upto <= len(cells):
        raise ValueError(f"step {upto} outside [1, {len(cells)}]")
    d = len(cells[0])
    state = GrowthState(d)
    enc = state.codec.encode
    state._seed(enc(cells[0]))
    for c in cells[1:upto]:
        state.add_key(enc(c))
    return state


# --- series / holes / tree ----------------------------------------------

def series_header(d: int) -> list[str]:
    return ["t", "P", "OutP", "InnP"] + [f"beta_{i}" for i in range(1, d)]


def write_series(path: Path, d: int, rows: Iterable[tuple]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        w = _writer(f)
        w.writerow(series_header(d))
        for t, p, out, inn, betas in rows:
            w.writerow([t, p, out, inn] + [_opt(b) for b in betas])


def read_series(path: Path) -> dict[str, list]:
    with open(path, encoding="utf-8", newline="") as f:
        r = csv.DictReader(f)
        cols: dict[str, list] = {k: [] for k in r.fieldnames}
        for row in r:
            for k, v in row.items():
                cols[k].append(None if v == "" else int(v))
    return cols


HOLES_HEADER = ["id", "parent", "birth", "death", "volume_at_birth", "shape_fixed", "shape_free"]


def write_holes(path: Path, records: Iterable[HoleRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        w = _writer(f)
        w.writerow(HOLES_HEADER)
        for r in sorted(records, key=lambda r: r.id):
            w.writerow([r.id, _opt(r.parent), r.birth, _opt(r.death), r.volume_at_birth, r.shape_fixed, r.shape_free])


def read_holes(path: Path) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as f:
        out = []
        for row in csv.DictReader(f):
            out.append({
                "id": int(row["id"]),
                "parent": int(row["parent"]) if row["parent"] else None,
                "birth": int(row["birth"]),
                "death": int(row["death"]) if row["death"] else None,
                "volume_at_birth": int(row["volume_at_birth"]),
                "shape_fixed": row["shape_fixed"],
                "shape_free": row["shape_free"],
            })
    return out


CREATIONS_HEADER = ["step", "hole_id", "volume", "shape_free"]


def write_creations(path: Path, records: Iterable[HoleRecord], free_key) -> None:
    """Every hole creation (split fragments included) with its free shape."""
    rows = []
    recs = sorted(records, key=lambda r: r.id)
    for r in recs:
        rows.append((r.birth, r.id, r.volume_at_birth, r.shape_free))
        for step, cells in r.kept:
            rows.append((step, r.id, len(cells), free_key(cells)))
    rows.sort()
    with open(path, "w", encoding="utf-8", newline="") as f:
        w = _writer(f)
        w.writerow(CREATIONS_HEADER)
        w.writerows(rows)


ALIVE_HEADER = ["id", "volume", "shape_free"]


def write_alive(path: Path, records: Iterable[HoleRecord], free_key) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        w = _writer(f)
        w.writerow(ALIVE_HEADER)
        for r in sorted(records, key=lambda r: r.id):
            if r.death is None:
                cells = r.final_cells or r.cells
                w.writerow([r.id, len(cells), free_key(cells)])


def read_rows(path: Path) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))


def write_tree(path: Path, tree: SplitTree) -> None:
    Path(path).write_text(tree.to_json(), encoding="utf-8")


# --- barcodes and cubical complexes ---------------------------------------

BARCODE_HEADER = ["hdim", "birth", "death"]


def write_barcode(path: Path, intervals: Iterable[PersistenceInterval]) -> None:
    rows = sorted((iv.hdim, iv.birth, -1 if iv.death is None else iv.death) for iv in intervals)
    with open(path, "w", encoding="utf-8", newline="") as f:
        w = _writer(f)
        w.writerow(BARCODE_HEADER)
        w.writerows(rows)


def read_barcode(path: Path) -> list[PersistenceInterval]:
    out = []
    for row in read_rows(path):
        death = int(row["death"])
        out.append(PersistenceInterval(int(row["hdim"]), int(row["birth"]), None if death == -1 else death))
    return out


def cubical_text(cells: Sequence[CellCoord], t: int) -> str:
    """d, t, then one line per cube (coordinates and birth step), sorted by
    birth then coordinates."""
    if not 1 <= t <= len(cells):
        raise ValueError(f"t={t} outside [1, {len(cells)}]")
    d = len(cells[0])
    buf = io.StringIO()
    buf.write(f"{d}\n{t}\n")
    for step, c in sorted(((s, c) for s, c in enumerate(cells[:t], start=1))):
        buf.write(" ".join(map(str, c)) + f" {step}\n")
    return buf.getvalue()


def parse_cubical(text: str) -> tuple[int, int, list[tuple[CellCoord, int]]]:
    lines = [l for l in text.splitlines() if l.strip()]
    d = int(lines[0])
    t = int(lines[1])
    cubes = []
    for l in lines[2:]:
        parts = [int(x) for x in l.split()]
        cubes.append((tuple(parts[:d]), parts[d]))
    if len(cubes) != t:
        raise ValueError(f"expected {t} cubes, found {len(cubes)}")
    return d, t, cubes


def dump_json(path: Path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        w = _writer(f)
        w.writerow(header)
        w.writerows(rows)
