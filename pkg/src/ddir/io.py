"""Configuration files: JSON with every number stored as a rational string."""
from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Iterator, Sequence, Union

from .config import Configuration, Probe
from .geometry import Point, Rect, Segment, format_rational, parse_rational

PathLike = Union[str, Path]


class FormatError(ValueError):
    """A configuration file that is not well formed; the message locates the problem."""


def _r(x) -> str:
    return format_rational(x)


def _rect(r: Rect) -> list[str]:
    return [_r(v) for v in r.as_tuple()]


def segment_to_json(s: Segment) -> dict:
    return {"a": [_r(s.a.x), _r(s.a.y)], "b": [_r(s.b.x), _r(s.b.y)]}


def config_to_json(config: Configuration) -> dict:
    probes = sorted(config.probes, key=lambda p: (p.rect.y_lo, p.rect.x_lo))
    return {
        "segments": [segment_to_json(s) for s in config.segments],
        "probes": [
            {"rect": _rect(p.rect), "root": _rect(p.root), "pillars": [_rect(x) for x in p.pillars]}
            for p in probes
        ],
    }


def dumps(config: Configuration) -> str:
    """Canonical text: one segment or probe per line, stable across runs."""
    doc = config_to_json(config)
    seg_lines = ",\n".join("    " + json.dumps(s, separators=(", ", ": ")) for s in doc["segments"])
    probe_lines = ",\n".join("    " + json.dumps(p, separators=(", ", ": ")) for p in doc["probes"])
    parts = ["{", '  "segments": [']
    if seg_lines:
        parts.append(seg_lines)
    parts += ["  ],", '  "probes": [']
    if probe_lines:
        parts.append(probe_lines)
    parts += ["  ]", "}"]
    return "\n".join(parts) + "\n"


def _num(value, where: str):
    if not isinstance(value, str):
        raise FormatError(f"{where}: expected a rational string, got {type(value).__name__}")
    try:
        return parse_rational(value)
    except ValueError as exc:
        raise FormatError(f"{where}: {exc}") from None


def _rect_from(value, where: str) -> Rect:
    if not isinstance(value, list) or len(value) != 4:
        raise FormatError(f"{where}: expected [x_lo, x_hi, y_lo, y_hi]")
    coords = [_num(v, f"{where}[{i}]") for i, v in enumerate(value)]
    try:
        return Rect(*coords)
    except ValueError as exc:
        raise FormatError(f"{where}: {exc}") from None


def _point_from(value, where: str) -> Point:
    if not isinstance(value, list) or len(value) != 2:
        raise FormatError(f"{where}: expected [x, y]")
    return Point(_num(value[0], f"{where}[0]"), _num(value[1], f"{where}[1]"))


def segment_from_json(doc, where: str = "segment") -> Segment:
    if not isinstance(doc, dict) or set(doc) != {"a", "b"}:
        raise FormatError(f"{where}: expected an object with keys 'a' and 'b'")
    try:
        return Segment(_point_from(doc["a"], f"{where}.a"), _point_from(doc["b"], f"{where}.b"))
    except ValueError as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"{where}: {exc}") from None


def config_from_json(doc) -> Configuration:
    if not isinstance(doc, dict) or "segments" not in doc or "probes" not in doc:
        raise FormatError("top level: expected an object with 'segments' and 'probes'")
    if not isinstance(doc["segments"], list) or not isinstance(doc["probes"], list):
        raise FormatError("top level: 'segments' and 'probes' must be lists")
    segments = tuple(segment_from_json(s, f"segments[{i}]") for i, s in enumerate(doc["segments"]))
    probes = []
    for i, p in enumerate(doc["probes"]):
        where = f"probes[{i}]"
        if not isinstance(p, dict) or "rect" not in p or "root" not in p:
            raise FormatError(f"{where}: expected an object with 'rect' and 'root'")
        pillars = p.get("pillars", [])
        if not isinstance(pillars, list):
            raise FormatError(f"{where}.pillars: expected a list")
        probes.append(Probe(
            _rect_from(p["rect"], f"{where}.rect"),
            _rect_from(p["root"], f"{where}.root"),
            tuple(_rect_from(x, f"{where}.pillars[{j}]") for j, x in enumerate(pillars)),
        ))
    return Configuration(segments, tuple(probes)).sorted()


def loads(text: str) -> Configuration:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return config_from_json(doc)


def load_config(path: PathLike) -> Configuration:
    try:
        return loads(Path(path).read_text())
    except FormatError as exc:
        raise FormatError(f"{path}: {exc}") from None


def atomic_write(path: PathLike, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_config(config: Configuration, path: PathLike) -> None:
    atomic_write(path, dumps(config))


def dump_segment_lines(segments: Iterable[Segment]) -> Iterator[str]:
    """Line-delimited segment records for instances too large for one document."""
    for s in segments:
        yield json.dumps(segment_to_json(s), separators=(",", ":")) + "\n"


def load_segment_lines(lines: Iterable[str]) -> list[Segment]:
    out = []
    for no, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FormatError(f"line {no}, column {exc.colno}: {exc.msg}") from None
        out.append(segment_from_json(doc, f"line {no}"))
    return out


def segments_config(segments: Sequence[Segment]) -> Configuration:
    """Wrap a bare segment multiset (for example a blowup) as a probe-free configuration."""
    return Configuration(tuple(segments), ())
