"""Widget/snapshot data model, validation, and the snapshot file format.

A snapshot is one observation of a UI: the window size plus the axis-aligned
rectangle of every widget, keyed by an opaque widget id.  Everything else in
the toolkit consumes these values, so the invariants are enforced eagerly:

* coordinates are non-negative integers (logical pixels),
* width and height are at least 1,
* widget ids are unique within a snapshot,
* every rectangle lies inside the window,
* no two rectangle *interiors* overlap (shared edges are fine).

File format (UTF-8 JSON, strict field names, unknown fields rejected)::

    {"window": {"width": W, "height": H},
     "widgets": [{"id": "A", "left": 0, "top": 0, "width": 100, "height": 40}]}

A sample-set file is ``{"samples": [<snapshot>, ...]}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

Size = tuple[int, int]


class ParseError(ValueError):
    """Raised when a document is not well-formed."""


class ValidationError(ValueError):
    """Raised when a well-formed document violates a model invariant."""


class SizeOutOfRange(ValueError):
    """A query size fell outside the envelope of an oracle or spec."""


@dataclass(frozen=True)
class Widget:
    """One rectangular widget: id plus left/top corner and size in pixels."""

    id: str
    left: int
    top: int
    width: int
    height: int

    def __post_init__(self) -> None:
        for name in ("left", "top", "width", "height"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise ValidationError(f"widget {self.id!r}: {name} must be an integer, got {value!r}")
        if self.left < 0 or self.top < 0:
            raise ValidationError(f"widget {self.id!r}: negative position")
        if self.width < 1 or self.height < 1:
            raise ValidationError(f"widget {self.id!r}: width and height must be >= 1")

    @property
    def right(self) -> int:
        return self.left + self.width

    @property
    def bottom(self) -> int:
        return self.top + self.height

    def rect(self) -> tuple[int, int, int, int]:
        return (self.left, self.top, self.right, self.bottom)


@dataclass(frozen=True)
class Violation:
    """One invariant violation; `rule` is machine-readable, ids name offenders."""

    rule: str
    widget_ids: tuple[str, ...]
    message: str

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return f"{self.rule}({', '.join(self.widget_ids)}): {self.message}"


@dataclass(frozen=True)
class WidgetSnapshot:
    """A validated observation of the UI at one window size."""

    window_width: int
    window_height: int
    widgets: tuple[Widget, ...]

    def __post_init__(self) -> None:
        if self.window_width < 1 or self.window_height < 1:
            raise ValidationError("window size must be >= 1x1")

    @property
    def size(self) -> Size:
        return (self.window_width, self.window_height)

    def widget_by_id(self, widget_id: str) -> Widget:
        for w in self.widgets:
            if w.id == widget_id:
                return w
        raise KeyError(widget_id)

    def widget_ids(self) -> frozenset[str]:
        return frozenset(w.id for w in self.widgets)


def _interiors_overlap(a: Widget, b: Widget) -> bool:
    return (a.left < b.right and b.left < a.right
            and a.top < b.bottom and b.top < a.bottom)


def validate_snapshot(snapshot: WidgetSnapshot) -> list[Violation]:
    """Check all snapshot invariants; an empty list means the snapshot is valid.

    The check is pure and order-independent: permuting the widget list yields
    the same violation set (the returned list is sorted for determinism).
    """
    violations: list[Violation] = []
    seen: dict[str, int] = {}
    for w in snapshot.widgets:
        seen[w.id] = seen.get(w.id, 0) + 1
    for wid in sorted(wid for wid, n in seen.items() if n > 1):
        violations.append(Violation("duplicate_id", (wid,), f"widget id {wid!r} appears more than once"))

    for w in sorted(snapshot.widgets, key=lambda w: w.id):
        if w.left < 0 or w.top < 0 or w.right > snapshot.window_width or w.bottom > snapshot.window_height:
            violations.append(Violation(
                "out_of_bounds", (w.id,),
                f"rect {w.rect()} outside window {snapshot.window_width}x{snapshot.window_height}"))

    ordered = sorted(snapshot.widgets, key=lambda w: (w.left, w.top, w.id))
    for i, a in enumerate(ordered):
        for b in ordered[i + 1:]:
            if b.left >= a.right:
                break
            if a.id != b.id and _interiors_overlap(a, b):
                pair = tuple(sorted((a.id, b.id)))
                violations.append(Violation("overlap", pair, f"interiors of {pair[0]!r} and {pair[1]!r} overlap"))
    return sorted(violations, key=lambda v: (v.rule, v.widget_ids))


@dataclass
class SampleSet:
    """A set of snapshots keyed by window size, with provenance.

    `min_size`/`max_size` are the componentwise extremes of the sampled sizes;
    the envelope is derived, not declared, so sets can grow incrementally.
    """

    samples: dict[Size, WidgetSnapshot] = field(default_factory=dict)
    provenance: str = "recorded"  # "recorded" | "oracle"

    def __post_init__(self) -> None:
        if self.provenance not in ("recorded", "oracle"):
            raise ValidationError(f"unknown provenance {self.provenance!r}")

    @property
    def min_size(self) -> Size:
        if not self.samples:
            raise ValidationError("no samples")
        return (min(w for w, _ in self.samples), min(h for _, h in self.samples))

    @property
    def max_size(self) -> Size:
        if not self.samples:
            raise ValidationError("no samples")
        return (max(w for w, _ in self.samples), max(h for _, h in self.samples))

    def sorted_sizes(self) -> list[Size]:
        return sorted(self.samples)


# --- JSON (de)serialization -------------------------------------------------

_WIDGET_FIELDS = {"id", "left", "top", "width", "height"}


def _require_keys(obj: Mapping, allowed: set[str], required: set[str], where: str) -> None:
    if not isinstance(obj, Mapping):
        raise ParseError(f"{where}: expected an object")
    unknown = set(obj) - allowed
    if unknown:
        raise ParseError(f"{where}: unknown fields {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise ParseError(f"{where}: missing fields {sorted(missing)}")


def _int_field(obj: Mapping, key: str, where: str) -> int:
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{where}: field {key!r} must be an integer, got {value!r}")
    return value


def snapshot_from_dict(doc: Mapping, where: str = "snapshot") -> WidgetSnapshot:
    _require_keys(doc, {"window", "widgets"}, {"window", "widgets"}, where)
    _require_keys(doc["window"], {"width", "height"}, {"width", "height"}, f"{where}.window")
    if not isinstance(doc["widgets"], list):
        raise ParseError(f"{where}.widgets: expected a list")
    widgets = []
    for i, wdoc in enumerate(doc["widgets"]):
        wwhere = f"{where}.widgets[{i}]"
        _require_keys(wdoc, _WIDGET_FIELDS, _WIDGET_FIELDS, wwhere)
        if not isinstance(wdoc["id"], str):
            raise ParseError(f"{wwhere}: id must be a string")
        try:
            widgets.append(Widget(
                id=wdoc["id"],
                left=_int_field(wdoc, "left", wwhere),
                top=_int_field(wdoc, "top", wwhere),
                width=_int_field(wdoc, "width", wwhere),
                height=_int_field(wdoc, "height", wwhere),
            ))
        except ValidationError as exc:
            raise ValidationError(f"{wwhere}: {exc}") from exc
    try:
        snap = WidgetSnapshot(
            window_width=_int_field(doc["window"], "width", f"{where}.window"),
            window_height=_int_field(doc["window"], "height", f"{where}.window"),
            widgets=tuple(widgets),
        )
    except ValidationError as exc:
        raise ValidationError(f"{where}: {exc}") from exc
    violations = validate_snapshot(snap)
    if violations:
        raise ValidationError(f"{where}: " + "; ".join(str(v) for v in violations))
    return snap


def snapshot_to_dict(snapshot: WidgetSnapshot) -> dict:
    return {
        "window": {"width": snapshot.window_width, "height": snapshot.window_height},
        "widgets": [
            {"id": w.id, "left": w.left, "top": w.top, "width": w.width, "height": w.height}
            for w in snapshot.widgets
        ],
    }


def sample_set_to_dict(sample_set: SampleSet) -> dict:
    return {
        "provenance": sample_set.provenance,
        "samples": [snapshot_to_dict(sample_set.samples[size]) for size in sample_set.sorted_sizes()],
    }


def sample_set_from_dict(doc: Mapping) -> SampleSet:
    _require_keys(doc, {"samples", "provenance"}, {"samples"}, "sample set")
    if not isinstance(doc["samples"], list):
        raise ParseError("sample set: samples must be a list")
    if not doc["samples"]:
        raise ValidationError("no samples")
    provenance = doc.get("provenance", "recorded")
    samples: dict[Size, WidgetSnapshot] = {}
    for i, sdoc in enumerate(doc["samples"]):
        snap = snapshot_from_dict(sdoc, where=f"samples[{i}]")
        if snap.size in samples:
            raise ValidationError(f"duplicate size {snap.size[0]}x{snap.size[1]}")
        samples[snap.size] = snap
    return SampleSet(samples=samples, provenance=provenance)


def load_sample_set(source: bytes | str | Path) -> SampleSet:
    """Load and validate a SampleSet.

    Accepts JSON bytes/text, a sample-set file path, or a directory of
    one-snapshot-per-file ``*.json`` documents.  Raises ParseError for
    malformed documents and ValidationError when an invariant is violated;
    messages carry the snapshot key and widget id.
    """
    if isinstance(source, (str, Path)) and Path(str(source)).is_dir():
        samples: dict[Size, WidgetSnapshot] = {}
        files = sorted(Path(str(source)).glob("*.json"))
        if not files:
            raise ValidationError("no samples")
        for path in files:
            try:
                doc = json.loads(path.read_text("utf-8"))
            except (UnicodeDecodeError, json.JSONDecodeError) as exc:
                raise ParseError(f"{path.name}: malformed snapshot document: {exc}") from exc
            snap = snapshot_from_dict(doc, where=path.name)
            if snap.size in samples:
                raise ValidationError(f"duplicate size {snap.size[0]}x{snap.size[1]}")
            samples[snap.size] = snap
        return SampleSet(samples=samples, provenance="recorded")
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source and source.endswith(".json")):
        raw = Path(source).read_bytes()
    elif isinstance(source, (bytes, bytearray)):
        raw = bytes(source)
    else:
        raw = str(source).encode("utf-8")
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"malformed sample set document: {exc}") from exc
    return sample_set_from_dict(doc)


def dump_sample_set(sample_set: SampleSet) -> bytes:
    return json.dumps(sample_set_to_dict(sample_set), sort_keys=True, indent=1).encode("utf-8")


def snapshots_equal(a: WidgetSnapshot, b: WidgetSnapshot) -> bool:
    """Rectangle-identical comparison (window size and every widget rect)."""
    if a.size != b.size or a.widget_ids() != b.widget_ids():
        return False
    rects_a = {w.id: w.rect() for w in a.widgets}
    return all(rects_a[w.id] == w.rect() for w in b.widgets)
