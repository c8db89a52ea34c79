"""Burmeister ``.cxt`` and JSON serialisation of formal contexts."""
from __future__ import annotations

import json
from pathlib import Path

from .bitset import iter_bits, mask_of
from .context import FormalContext
from .errors import IngestionError


def dumps_cxt(ctx: FormalContext) -> str:
    for label in ctx.object_labels + ctx.attribute_labels:
        if "\n" in label or "\r" in label:
            raise ValueError(f"label {label!r} contains a line break")
    lines = ["B", "", str(ctx.n_objects), str(ctx.n_attributes), ""]
    lines += ctx.object_labels
    lines += ctx.attribute_labels
    for r in ctx.rows:
        lines.append("".join("X" if r >> m & 1 else "." for m in range(ctx.n_attributes)))
    return "\n".join(lines) + "\n"


def loads_cxt(text: str) -> FormalContext:
    """Parse Burmeister text.  Accepts ``X``/``x`` as a cross, anything else
    in ``.`` position as blank; tolerates CRLF and trailing blank lines."""
    lines = text.replace("\r\n", "\n").replace("\r", "\n").split("\n")
    if not lines or lines[0].strip() != "B":
        raise IngestionError("not a Burmeister context: first line must be 'B'", row=1)
    pos = 1
    # optional context name line followed by the blank separator
    while pos < len(lines) and not lines[pos].strip().isdigit():
        pos += 1
    try:
        n_obj = int(lines[pos].strip())
        n_att = int(lines[pos + 1].strip())
    except (IndexError, ValueError):
        raise IngestionError("missing object/attribute counts", row=pos + 1) from None
    pos += 2
    while pos < len(lines) and lines[pos].strip() == "":
        pos += 1
    need = n_obj + n_att + n_obj
    body = lines[pos:pos + need]
    if len(body) < need:
        raise IngestionError(f"expected {need} lines after the header, found {len(body)}", row=pos + 1)
    objects = body[:n_obj]
    attributes = body[n_obj:n_obj + n_att]
    rows = []
    for k, line in enumerate(body[n_obj + n_att:]):
        line = line.rstrip()
        if len(line) != n_att:
            raise IngestionError(
                f"incidence row has {len(line)} cells, expected {n_att}", row=pos + n_obj + n_att + k + 1
            )
        rows.append(mask_of(j for j, c in enumerate(line) if c in "Xx"))
    return FormalContext(tuple(objects), tuple(attributes), tuple(rows))


def context_to_dict(ctx: FormalContext) -> dict:
    return {
        "object_labels": list(ctx.object_labels),
        "attribute_labels": list(ctx.attribute_labels),
        "incidence_rows": [list(iter_bits(r)) for r in ctx.rows],
    }


def context_from_dict(data: dict) -> FormalContext:
    try:
        objects = data["object_labels"]
        attributes = data["attribute_labels"]
        rows = data["incidence_rows"]
    except KeyError as exc:
        raise IngestionError(f"JSON context lacks field {exc.args[0]!r}") from None
    if len(rows) != len(objects):
        raise IngestionError(f"{len(rows)} incidence rows for {len(objects)} objects")
    masks = []
    for g, row in enumerate(rows):
        for m in row:
            if not isinstance(m, int) or not 0 <= m < len(attributes):
                raise IngestionError(f"attribute index {m!r} out of range", row=g + 1)
        masks.append(mask_of(row))
    return FormalContext(tuple(objects), tuple(attributes), tuple(masks))


def dumps_json(ctx: FormalContext) -> str:
    return json.dumps(context_to_dict(ctx), ensure_ascii=False, indent=2) + "\n"


def loads_json(text: str) -> FormalContext:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise IngestionError(f"invalid JSON: {exc.msg}", row=exc.lineno) from None
    return context_from_dict(data)


def read_context(path) -> FormalContext:
    """Read a ``.cxt`` or ``.json`` context, chosen by suffix."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json":
        return loads_json(text)
    return loads_cxt(text)


def write_context(ctx: FormalContext, path) -> None:
    path = Path(path)
    text = dumps_json(ctx) if path.suffix.lower() == ".json" else dumps_cxt(ctx)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
