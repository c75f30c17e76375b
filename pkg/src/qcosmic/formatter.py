"""Canonical ``.qcm`` formatter.

Emits a deterministic textual form of a model: two-space indentation, LF
line endings, declaration order preserved, one movement per line. Parsing
the output reproduces a structurally equal model, and formatting is
idempotent.
"""

from __future__ import annotations

from .model import (
    Conversion,
    DataGroup,
    DataMovement,
    FunctionalProcess,
    Model,
    MovementKind,
)
from .parser import MOVEMENT_KEYWORDS

__all__ = ["format_model", "format_movement"]

_KIND_WORDS = {kind: word for word, kind in MOVEMENT_KEYWORDS.items()}

#: Canonical preposition per kind; entries and reads come from somewhere,
#: exits and writes go to somewhere.
_PREPOSITIONS = {
    MovementKind.E: "from",
    MovementKind.QE: "from",
    MovementKind.R: "from",
    MovementKind.QR: "from",
    MovementKind.X: "to",
    MovementKind.QX: "to",
    MovementKind.W: "to",
    MovementKind.QW: "to",
}

_STRING_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t", "\r": "\\r"}


def _quote(value: str) -> str:
    return '"' + "".join(_STRING_ESCAPES.get(ch, ch) for ch in value) + '"'


def format_model(model: Model) -> str:
    """Render a model as canonical source text."""
    if model.is_empty() and not model.purpose and not model.scope:
        return f"system {_quote(model.name)} {{}}\n"

    lines: list[str] = [f"system {_quote(model.name)} {{"]
    sections: list[list[str]] = []

    header: list[str] = []
    if model.purpose:
        header.append(f"  purpose {_quote(model.purpose)}")
    if model.scope:
        header.append(f"  scope {_quote(model.scope)}")
    if header:
        sections.append(header)

    for category, declared in (
        ("layer", model.layers),
        ("user", model.users),
        ("storage", model.storages),
    ):
        if declared:
            sections.append(
                [f"  {category} {d.nature.value} {_quote(d.name)}" for d in declared]
            )

    for group in model.data_groups:
        sections.append(_format_group(group))
    for process in model.processes:
        sections.append(_format_process(process))

    for index, section in enumerate(sections):
        if index:
            lines.append("")
        lines.extend(section)
    lines.append("}")
    return "\n".join(lines) + "\n"


def _format_group(group: DataGroup) -> list[str]:
    head = f"  datagroup {_quote(group.name)}"
    if not group.attributes:
        return [head + " {}"]
    lines = [head + " {"]
    for attr in group.attributes:
        lines.append(f"    attr {attr.name}: {attr.nature.value}")
    lines.append("  }")
    return lines


def _format_process(process: FunctionalProcess) -> list[str]:
    head = f"  process {_quote(process.name)} in layer {_quote(process.layer)}"
    if process.uses:
        head += " uses " + ", ".join(_quote(u) for u in process.uses)
    if not process.movements:
        return [head + " {}"]
    lines = [head + " {"]
    for movement in process.movements:
        lines.append("    " + format_movement(movement))
    lines.append("  }")
    return lines


def format_movement(movement: DataMovement) -> str:
    """One movement statement in canonical form, without indentation."""
    parts = [
        _KIND_WORDS[movement.kind],
        _quote(movement.data_group),
        _PREPOSITIONS[movement.kind],
        movement.counterpart.kind.value,
        _quote(movement.counterpart.name),
    ]
    if movement.conversion is not Conversion.NONE:
        parts += ["via", movement.conversion.value]
    return " ".join(parts)
