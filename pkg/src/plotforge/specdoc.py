"""Spec-file loading: schema validation, CSV data references, scene building.

A spec is a version-1 JSON document whose `scene` mirrors the model types.
1D data arrays may be {"file": ..., "column": ...} references to CSV files
next to the spec; they are resolved here, before the scene is built, so the
rest of the system only ever sees inline data.
"""

from __future__ import annotations

import csv
import json
from importlib import resources
from pathlib import Path

import jsonschema

from .build import build_scene
from .errors import SpecError
from .model import PlotNode

_SERIES_KEYS = ("x", "y", "x_err_lo", "x_err_hi", "y_err_lo", "y_err_hi")


def _schema() -> dict:
    text = resources.files("plotforge").joinpath("schema/spec-v1.json").read_text()
    return json.loads(text)


def _json_path(error: jsonschema.ValidationError) -> str:
    parts = ["spec"]
    for p in error.absolute_path:
        parts.append(f"[{p}]" if isinstance(p, int) else f".{p}")
    return "".join(parts)


def parse_spec(text: str) -> dict:
    """Raw JSON text -> schema-valid plain document."""

    def _bad_constant(s):
        raise ValueError(f"non-JSON constant {s}")

    try:
        doc = json.loads(text, parse_constant=_bad_constant)
    except ValueError as exc:
        raise SpecError("SPEC_INVALID", f"not valid JSON: {exc}", path="spec") from None
    validator = jsonschema.Draft202012Validator(_schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        best = jsonschema.exceptions.best_match(errors)
        raise SpecError("SPEC_INVALID", best.message, path=_json_path(best))
    return doc


class _CsvSource:
    """Lazy column store for one CSV file: header row, float cells, '' -> null."""

    def __init__(self, path: Path, spec_path: str):
        if not path.is_file():
            raise SpecError("SPEC_INVALID", f"referenced data file '{path.name}' not found", path=spec_path)
        with path.open(newline="") as fh:
            rows = list(csv.reader(fh))
        if not rows:
            raise SpecError("SPEC_INVALID", f"data file '{path.name}' is empty", path=spec_path)
        self.name = path.name
        self.columns: dict[str, list] = {h: [] for h in rows[0]}
        header = rows[0]
        for r, row in enumerate(rows[1:], start=2):
            for c, cell in enumerate(row):
                if c >= len(header):
                    continue
                cell = cell.strip()
                if cell == "":
                    self.columns[header[c]].append(None)
                    continue
                try:
                    self.columns[header[c]].append(float(cell))
                except ValueError:
                    raise SpecError(
                        "SPEC_INVALID",
                        f"data file '{path.name}' row {r} column '{header[c]}': '{cell}' is not a number",
                        path=spec_path,
                    ) from None

    def column(self, name: str, spec_path: str) -> list:
        if name not in self.columns:
            raise SpecError(
                "SPEC_INVALID",
                f"data file '{self.name}' has no column '{name}' (has {sorted(self.columns)})",
                path=spec_path,
            )
        return self.columns[name]


def _resolve_refs(doc: dict, base: Path) -> dict:
    sources: dict[str, _CsvSource] = {}

    def resolve(value, spec_path: str):
        if isinstance(value, dict) and set(value) == {"file", "column"}:
            fname = value["file"]
            if fname not in sources:
                sources[fname] = _CsvSource(base / fname, spec_path)
            return sources[fname].column(value["column"], spec_path)
        return value

    def walk_node(node: dict, path: str):
        for i, layer in enumerate(node.get("layers", [])):
            for j, graph in enumerate(layer.get("graphs", [])):
                for key in _SERIES_KEYS:
                    if key in graph:
                        graph[key] = resolve(graph[key], f"{path}.layers[{i}].graphs[{j}].{key}")
        for i, child in enumerate(node.get("children", [])):
            walk_node(child, f"{path}.children[{i}]")

    walk_node(doc["scene"], "spec.scene")
    return doc


def load_spec(path: str | Path) -> PlotNode:
    """Read, validate, and build a spec file into a scene tree."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SpecError("IO_FAILURE", f"cannot read spec file: {exc}", path=str(path)) from None
    doc = parse_spec(text)
    doc = _resolve_refs(doc, path.parent)
    return build_scene(doc["scene"], path="spec.scene")


def validate_spec(path: str | Path) -> list[str]:
    """All problems found with a spec file; empty means valid."""
    try:
        load_spec(path)
    except SpecError as exc:
        return [str(exc)]
    return []
