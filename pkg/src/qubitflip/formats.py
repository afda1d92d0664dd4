"""CSV payoff curves and JSON control files."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .calib import PayoffCurve
from .chain import ControlPulse, ControlSequence

SCHEMA_VERSION = 1
CURVE_HEADER = ("J", "bob_mean_payoff")
RESULT_KEYS = (
    "schema_version",
    "player",
    "n",
    "J",
    "T",
    "pulses_per_move",
    "restarts",
    "seed",
    "payoff",
    "controls",
)


class FormatError(ValueError):
    pass


def curve_to_csv(curve: PayoffCurve) -> str:
    lines = [",".join(CURVE_HEADER)]
    lines += [f"{J:.12f},{p:.12f}" for J, p in zip(curve.J, curve.p_bob)]
    return "\n".join(lines) + "\n"


def write_curve_csv(curve: PayoffCurve, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(curve_to_csv(curve))


def read_curve_csv(path) -> PayoffCurve:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != CURVE_HEADER:
        raise FormatError(f"expected header {','.join(CURVE_HEADER)!r}")
    data = np.array([[float(a), float(b)] for a, b in rows[1:]]).reshape(-1, 2)
    return PayoffCurve(data[:, 0], data[:, 1])


def result_document(
    player, n, J, T, pulses_per_move, restarts, seed, payoff, sequences
) -> dict:
    """Ordered dict for one optimised strategy; ``sequences`` lists moves 1, 2, ..."""
    controls = [
        {"move": m, "index": k, "axis": p.axis, "amplitude": float(p.amplitude)}
        for m, seq in enumerate(sequences, start=1)
        for k, p in enumerate(seq.pulses)
    ]
    values = (
        SCHEMA_VERSION,
        player,
        int(n),
        float(J),
        float(T),
        int(pulses_per_move),
        int(restarts),
        int(seed),
        float(payoff),
        controls,
    )
    return dict(zip(RESULT_KEYS, values))


def dumps_result(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def write_result_json(doc: dict, path) -> None:
    Path(path).write_text(dumps_result(doc), encoding="utf-8")


def parse_result(text: str) -> tuple[dict, list[ControlSequence]]:
    """Parse a controls/result JSON document into its metadata and move sequences."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "controls" not in doc:
        raise FormatError("controls document must be an object with a 'controls' array")
    if doc.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise FormatError(f"unsupported schema_version {doc.get('schema_version')!r}")
    moves: dict[int, dict[int, ControlPulse]] = {}
    try:
        for entry in doc["controls"]:
            move, index = int(entry["move"]), int(entry["index"])
            pulse = ControlPulse(str(entry["axis"]), float(entry["amplitude"]))
            if index in moves.setdefault(move, {}):
                raise FormatError(f"duplicate pulse move={move} index={index}")
            moves[move][index] = pulse
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"malformed control entry: {exc}") from None
    if not moves or sorted(moves) != list(range(1, len(moves) + 1)):
        raise FormatError("moves must be numbered 1, 2, ...")
    sequences = []
    for m in sorted(moves):
        pulses = moves[m]
        if sorted(pulses) != list(range(len(pulses))):
            raise FormatError(f"pulse indices of move {m} must be 0..N-1")
        sequences.append(ControlSequence(tuple(pulses[k] for k in range(len(pulses)))))
    return doc, sequences


def read_result_json(path) -> tuple[dict, list[ControlSequence]]:
    return parse_result(Path(path).read_text(encoding="utf-8"))

