"""QCFP counting: per process, per layer, per nature, and system totals.

One QCFP is one unique data movement. Within a process, duplicate
declarations of the same movement collapse to one; by default movements to
different counterparts stay distinct (``DedupMode.ENDPOINT``), while
``DedupMode.COSMIC`` collapses on (kind, data group) alone.

Per-layer totals attribute each unique movement to exactly one layer:

* quantum movements, including preparation and measurement crossings, count
  toward the owning process's (quantum) layer;
* classical movements count toward the owning process's layer when that
  layer is classical; a classical payload handled by a quantum-layer
  process counts toward the classical layer on the far side of the
  crossing when the counterpart names one (a layer endpoint, or a process
  declared in a classical layer).

This keeps layer totals additive with process totals while charging each
side of a hybrid process for the work it actually performs.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from .diagnostics import Diagnostic, has_errors
from .model import (
    DataMovement,
    EndpointKind,
    FunctionalProcess,
    KIND_ORDER,
    Layer,
    Model,
    MovementKind,
    Nature,
    movement_is_quantum,
    process_nature,
    system_nature,
)
from .rules import validate

__all__ = [
    "DedupMode",
    "LayerMeasure",
    "MeasurementReport",
    "ProcessMeasure",
    "Totals",
    "UnvalidatedModelError",
    "measure_layer",
    "measure_process",
    "measure_system",
    "movement_layer",
    "unique_movements",
]


class UnvalidatedModelError(ValueError):
    """Measurement was requested for a model with outstanding errors."""

    def __init__(self, diagnostics: list[Diagnostic]):
        errors = [d for d in diagnostics if d.is_error]
        super().__init__(f"unvalidated model: {len(errors)} validation error(s) outstanding")
        self.diagnostics = diagnostics


class DedupMode(enum.Enum):
    """How duplicate movements inside one process are collapsed."""

    ENDPOINT = "endpoint"
    COSMIC = "cosmic"


def _dedup_key(movement: DataMovement, dedup: DedupMode):
    if dedup is DedupMode.COSMIC:
        return movement.kind, movement.data_group
    return movement.kind, movement.data_group, movement.counterpart


def unique_movements(
    process: FunctionalProcess, dedup: DedupMode = DedupMode.ENDPOINT
) -> list[DataMovement]:
    """The countable movements of a process, first occurrence order."""
    seen = set()
    unique: list[DataMovement] = []
    for movement in process.movements:
        key = _dedup_key(movement, dedup)
        if key not in seen:
            seen.add(key)
            unique.append(movement)
    return unique


def measure_process(process: FunctionalProcess, dedup: DedupMode = DedupMode.ENDPOINT) -> int:
    """QCFP of one process: every unique movement contributes exactly 1."""
    return len(unique_movements(process, dedup))


def movement_layer(movement: DataMovement, owner: FunctionalProcess, model: Model) -> str:
    """Name of the layer a movement counts toward in per-layer totals."""
    owner_layer = model.layer(owner.layer)
    if movement_is_quantum(movement.kind):
        return owner_layer.name
    if owner_layer.nature is Nature.CLASSICAL:
        return owner_layer.name
    counterpart = movement.counterpart
    if counterpart.kind is EndpointKind.LAYER:
        far_layer = model.layer(counterpart.name)
    elif counterpart.kind is EndpointKind.PROCESS:
        far_layer = model.layer(model.process(counterpart.name).layer)
    else:
        return owner_layer.name
    if far_layer.nature is Nature.CLASSICAL:
        return far_layer.name
    return owner_layer.name


def measure_layer(layer: Layer, model: Model, dedup: DedupMode = DedupMode.ENDPOINT) -> int:
    """QCFP attributed to one layer across all processes."""
    total = 0
    for process in model.processes:
        for movement in unique_movements(process, dedup):
            if movement_layer(movement, process, model) == layer.name:
                total += 1
    return total


@dataclass(frozen=True)
class ProcessMeasure:
    name: str
    layer: str
    nature: Nature
    qcfp: int
    tally: dict[MovementKind, int]


@dataclass(frozen=True)
class LayerMeasure:
    name: str
    nature: Nature
    qcfp: int


@dataclass(frozen=True)
class Totals:
    total_qcfp: int
    classical_qcfp: int
    quantum_qcfp: int
    classical_percent: str
    quantum_percent: str


@dataclass(frozen=True)
class MeasurementReport:
    system_name: str
    per_process: tuple[ProcessMeasure, ...]
    per_layer: tuple[LayerMeasure, ...]
    totals: Totals
    cfpv5_equivalent: bool


def percent(part: int, total: int) -> str:
    """Share of ``total`` as a percentage string with one decimal, half-up."""
    if total == 0:
        return "0.0"
    value = Decimal(100 * part) / Decimal(total)
    return str(value.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


def measure_system(model: Model, dedup: DedupMode = DedupMode.ENDPOINT) -> MeasurementReport:
    """Measure a validated model; refuses when validation errors exist."""
    diagnostics = validate(model)
    if has_errors(diagnostics):
        raise UnvalidatedModelError(diagnostics)

    per_process: list[ProcessMeasure] = []
    layer_totals: dict[str, int] = {layer.name: 0 for layer in model.layers}
    quantum_qcfp = 0

    for process in model.processes:
        unique = unique_movements(process, dedup)
        tally = {kind: 0 for kind in KIND_ORDER}
        for movement in unique:
            tally[movement.kind] += 1
            layer_totals[movement_layer(movement, process, model)] += 1
            if movement_is_quantum(movement.kind):
                quantum_qcfp += 1
        per_process.append(
            ProcessMeasure(
                name=process.name,
                layer=process.layer,
                nature=process_nature(process, model),
                qcfp=len(unique),
                tally=tally,
            )
        )

    total_qcfp = sum(p.qcfp for p in per_process)
    classical_qcfp = total_qcfp - quantum_qcfp
    per_layer = tuple(
        LayerMeasure(layer.name, layer.nature, layer_totals[layer.name])
        for layer in model.layers
    )
    return MeasurementReport(
        system_name=model.name,
        per_process=tuple(per_process),
        per_layer=per_layer,
        totals=Totals(
            total_qcfp=total_qcfp,
            classical_qcfp=classical_qcfp,
            quantum_qcfp=quantum_qcfp,
            classical_percent=percent(classical_qcfp, total_qcfp),
            quantum_percent=percent(quantum_qcfp, total_qcfp),
        ),
        cfpv5_equivalent=system_nature(model) is Nature.CLASSICAL,
    )
