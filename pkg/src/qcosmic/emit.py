"""Report renderers and DOT context-diagram emission.

All renderers are pure: equal inputs produce byte-identical output. The
JSON layout is versioned via a top-level ``"schema": "qcosmic-report/1"``
key; CSV uses LF line endings and quotes a field only when it needs it.

Diagram conventions: classical elements use a single border and plain
labels, quantum elements a double border (``peripheries=2``) and bold
labels; quantum movement edges are drawn with doubled pen width; the
boundary around the measured software is a dashed cluster. Storage sits
outside the measured-scope cluster.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass

from .measure import MeasurementReport, unique_movements
from .model import (
    Conversion,
    EndpointKind,
    FunctionalProcess,
    KIND_ORDER,
    Model,
    Nature,
    movement_is_quantum,
    process_nature,
)

__all__ = [
    "OutputFormat",
    "RenderOptions",
    "render_csv",
    "render_dot",
    "render_json",
    "render_text",
]


class OutputFormat(enum.Enum):
    TEXT = "text"
    JSON = "json"
    CSV = "csv"
    DOT = "dot"


@dataclass(frozen=True)
class RenderOptions:
    format: OutputFormat = OutputFormat.TEXT
    by_layer: bool = False
    scope: str | None = None


# -- text ---------------------------------------------------------------------


def _tally_text(tally) -> str:
    parts = [f"{tally[kind]}{kind.value}" for kind in KIND_ORDER if tally[kind]]
    return " ".join(parts) if parts else "-"


def render_text(report: MeasurementReport, opts: RenderOptions | None = None) -> str:
    """Human-readable table, one row per process, totals in the footer."""
    opts = opts or RenderOptions()
    lines: list[str] = []

    if report.per_process:
        rows = [
            (p.name, p.layer, p.nature.value, str(p.qcfp), _tally_text(p.tally))
            for p in report.per_process
        ]
        header = ("process", "layer", "nature", "qcfp", "movements")
        widths = [
            max(len(header[i]), *(len(row[i]) for row in rows)) for i in range(len(header))
        ]
        lines.append(_row(header, widths))
        for row in rows:
            lines.append(_row(row, widths))
        lines.append("")

    if opts.by_layer and report.per_layer:
        rows = [(l.name, l.nature.value, str(l.qcfp)) for l in report.per_layer]
        header = ("layer", "nature", "qcfp")
        widths = [
            max(len(header[i]), *(len(row[i]) for row in rows)) for i in range(len(header))
        ]
        lines.append(_row(header, widths))
        for row in rows:
            lines.append(_row(row, widths))
        lines.append("")

    totals = report.totals
    lines.append(
        f"TOTAL {totals.total_qcfp} QCFP "
        f"(classical {totals.classical_qcfp} / quantum {totals.quantum_qcfp})"
    )
    lines.append(
        f"split: classical {totals.classical_percent}%, quantum {totals.quantum_percent}%"
    )
    if report.cfpv5_equivalent:
        lines.append("note: CFPv5-equivalent (purely classical model)")
    return "\n".join(lines) + "\n"


def _row(cells, widths) -> str:
    return "  ".join(cell.ljust(width) for cell, width in zip(cells, widths)).rstrip()


# -- json ---------------------------------------------------------------------


def render_json(report: MeasurementReport) -> str:
    """Canonical JSON: sorted keys, declaration-ordered arrays."""
    payload = {
        "schema": "qcosmic-report/1",
        "system": report.system_name,
        "total_qcfp": report.totals.total_qcfp,
        "classical_qcfp": report.totals.classical_qcfp,
        "quantum_qcfp": report.totals.quantum_qcfp,
        "classical_percent": report.totals.classical_percent,
        "quantum_percent": report.totals.quantum_percent,
        "cfpv5_equivalent": report.cfpv5_equivalent,
        "processes": [
            {
                "name": p.name,
                "layer": p.layer,
                "nature": p.nature.value,
                "qcfp": p.qcfp,
                "movements": {kind.value: p.tally[kind] for kind in KIND_ORDER},
            }
            for p in report.per_process
        ],
        "layers": [
            {"name": l.name, "nature": l.nature.value, "qcfp": l.qcfp}
            for l in report.per_layer
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# -- csv ----------------------------------------------------------------------


def render_csv(report: MeasurementReport) -> str:
    """One row per process plus a final TOTAL row."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(
        ["process", "layer", "nature"] + [kind.value for kind in KIND_ORDER] + ["qcfp"]
    )
    kind_totals = {kind: 0 for kind in KIND_ORDER}
    for p in report.per_process:
        writer.writerow(
            [p.name, p.layer, p.nature.value]
            + [p.tally[kind] for kind in KIND_ORDER]
            + [p.qcfp]
        )
        for kind in KIND_ORDER:
            kind_totals[kind] += p.tally[kind]
    writer.writerow(
        ["TOTAL", "", ""]
        + [kind_totals[kind] for kind in KIND_ORDER]
        + [report.totals.total_qcfp]
    )
    return buffer.getvalue()


# -- dot ----------------------------------------------------------------------


_DOT_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _dq(value: str) -> str:
    return '"' + "".join(_DOT_ESCAPES.get(ch, ch) for ch in value) + '"'


def _html(value: str) -> str:
    return value.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _label(name: str, nature: Nature) -> str:
    if nature is Nature.QUANTUM:
        return f"<<B>{_html(name)}</B>>"
    return _dq(name)


def _node(node_id: str, name: str, nature: Nature, shape: str, indent: str = "  ") -> str:
    peripheries = 2 if nature is Nature.QUANTUM else 1
    return (
        f"{indent}{node_id} [label={_label(name, nature)}, shape={shape}, "
        f"peripheries={peripheries}];"
    )


def render_dot(model: Model, opts: RenderOptions | None = None) -> str:
    """DOT digraph of a model, or of a single process when scoped.

    Edge count for a scoped diagram equals the process's unique movement
    count. Raises UnresolvedReferenceError when the scope names no process.
    """
    opts = opts or RenderOptions(format=OutputFormat.DOT)
    scoped: FunctionalProcess | None = None
    if opts.scope is not None:
        scoped = model.process(opts.scope)

    if model.is_empty():
        return f"digraph {_dq(model.name)} {{\n}}\n"

    drawn_processes = [scoped] if scoped else list(model.processes)
    movements = [
        (process, movement)
        for process in drawn_processes
        for movement in unique_movements(process)
    ]

    if scoped is not None:
        users, storages, layers, processes = _participants(scoped, movements, model)
    else:
        users = [u.name for u in model.users]
        storages = [s.name for s in model.storages]
        layers = [l.name for l in model.layers]
        processes = [p.name for p in model.processes]

    by_layer: dict[str, list[str]] = {name: [] for name in layers}
    for name in processes:
        process = model.process(name)
        if process.layer in by_layer:
            by_layer[process.layer].append(name)

    lines = [f"digraph {_dq(model.name)} {{"]
    lines.append("  rankdir=LR;")
    lines.append("  compound=true;")

    for name in users:
        user = model.user(name)
        lines.append(_node(_dq(f"user {name}"), name, user.nature, "ellipse"))
    for name in storages:
        storage = model.storage(name)
        lines.append(_node(_dq(f"storage {name}"), name, storage.nature, "cylinder"))

    if layers:
        lines.append(f"  subgraph {_dq('cluster software')} {{")
        lines.append(f"    label={_dq(model.name)};")
        lines.append("    style=dashed;")
        for layer_name in layers:
            layer = model.layer(layer_name)
            peripheries = 2 if layer.nature is Nature.QUANTUM else 1
            lines.append(f"    subgraph {_dq(f'cluster layer {layer_name}')} {{")
            lines.append(f"      label={_label(layer_name, layer.nature)};")
            lines.append(f"      peripheries={peripheries};")
            lines.append(f"      {_dq(f'layer {layer_name}')} [shape=point, style=invis];")
            for process_name in by_layer[layer_name]:
                process = model.process(process_name)
                nature = process_nature(process, model)
                lines.append(
                    _node(_dq(f"process {process_name}"), process_name, nature, "box", indent=" " * 6)
                )
            lines.append("    }")
        lines.append("  }")

    for process, movement in movements:
        lines.append(_edge(process, movement))

    if scoped is None:
        for process in model.processes:
            for used in process.uses:
                lines.append(
                    f"  {_dq(f'process {process.name}')} -> {_dq(f'process {used}')} "
                    "[label=uses, style=dashed, arrowhead=open];"
                )

    lines.append("}")
    return "\n".join(lines) + "\n"


def _participants(scoped, movements, model):
    users: list[str] = []
    storages: list[str] = []
    layers: list[str] = [scoped.layer]
    processes: list[str] = [scoped.name]
    for _, movement in movements:
        cp = movement.counterpart
        if cp.kind is EndpointKind.USER and cp.name not in users:
            users.append(cp.name)
        elif cp.kind is EndpointKind.STORAGE and cp.name not in storages:
            storages.append(cp.name)
        elif cp.kind is EndpointKind.LAYER and cp.name not in layers:
            layers.append(cp.name)
        elif cp.kind is EndpointKind.PROCESS:
            if cp.name not in processes:
                processes.append(cp.name)
            cp_layer = model.process(cp.name).layer
            if cp_layer not in layers:
                layers.append(cp_layer)
    return users, storages, layers, processes


_INBOUND = frozenset({"E", "QE", "R", "QR"})


def _edge(process: FunctionalProcess, movement) -> str:
    cp = movement.counterpart
    process_id = _dq(f"process {process.name}")
    attrs = [f"label={_dq(_edge_label(movement))}"]
    if cp.kind is EndpointKind.LAYER:
        cp_id = _dq(f"layer {cp.name}")
        cluster = _dq(f"cluster layer {cp.name}")
        side = "ltail" if movement.kind.value in _INBOUND else "lhead"
        attrs.append(f"{side}={cluster}")
    else:
        cp_id = _dq(f"{cp.kind.value} {cp.name}")
    if movement_is_quantum(movement.kind):
        attrs.append("penwidth=2")
    if movement.kind.value in _INBOUND:
        left, right = cp_id, process_id
    else:
        left, right = process_id, cp_id
    return f"  {left} -> {right} [{', '.join(attrs)}];"


def _edge_label(movement) -> str:
    label = f"{movement.kind.value}: {movement.data_group}"
    if movement.conversion is not Conversion.NONE:
        label += f" ({movement.conversion.value})"
    return label
