"""Validation rule catalog for parsed models.

Structural and counting rules are errors and block measurement; hygiene
findings are warnings and never change measured size.

  R1  quantum system has at least one classical and one quantum layer  ERROR
  R2  read/write kinds target storage, entry/exit kinds do not         ERROR
  R3  storage nature matches the movement kind family                  ERROR
  R4  quantum data never crosses into a classical element or layer
      without a conversion                                             ERROR
  R5  prepare only on a qentry into a quantum-layer process from a
      classical counterpart; measure only on the mirroring qexit       ERROR
  R6  a quantum data group moves only via quantum kinds                ERROR
  R7  a classical data group moves via a quantum kind only when the
      movement converts (prepare/measure)                              ERROR
  R8  an inter-process flow is declared in exactly one process block   ERROR
  R9  the uses relation is acyclic                                     ERROR
  P1  process declares no movements                                    WARNING
  P2  data group or storage is never referenced by a movement          WARNING
  P3  purely classical model; size coincides with COSMIC CFPv5         WARNING

Codes are stable across releases. Every rule is a pure function of the
model, so identical models always yield the identical diagnostic sequence.
"""

from __future__ import annotations

from typing import Iterator

from .diagnostics import Diagnostic, Severity, sort_key
from .formatter import format_movement
from .model import (
    Conversion,
    DataMovement,
    Endpoint,
    EndpointKind,
    FunctionalProcess,
    Model,
    MovementKind,
    Nature,
    STORAGE_KINDS,
    data_group_nature,
    movement_is_quantum,
    process_nature,
    system_nature,
)

__all__ = ["validate"]


def validate(model: Model) -> list[Diagnostic]:
    """Check a resolved model against the rule catalog.

    Returns the findings in stable order (file position, then code). An
    empty error set means the model is measurable.
    """
    diagnostics: list[Diagnostic] = []
    for rule in (
        _rule_r1,
        _rule_r2,
        _rule_r3,
        _rule_r4,
        _rule_r5,
        _rule_r6,
        _rule_r7,
        _rule_r8,
        _rule_r9,
        _rule_p1,
        _rule_p2,
        _rule_p3,
    ):
        diagnostics.extend(rule(model))
    diagnostics.sort(key=sort_key)
    return diagnostics


def _error(code: str, message: str, subject: str, span=None) -> Diagnostic:
    return Diagnostic(Severity.ERROR, code, message, subject=subject, span=span)


def _warning(code: str, message: str, subject: str, span=None) -> Diagnostic:
    return Diagnostic(Severity.WARNING, code, message, subject=subject, span=span)


def _counterpart_nature(endpoint: Endpoint, model: Model) -> Nature:
    if endpoint.kind is EndpointKind.USER:
        return model.user(endpoint.name).nature
    if endpoint.kind is EndpointKind.STORAGE:
        return model.storage(endpoint.name).nature
    if endpoint.kind is EndpointKind.LAYER:
        return model.layer(endpoint.name).nature
    return process_nature(model.process(endpoint.name), model)


def _movements(model: Model) -> Iterator[tuple[FunctionalProcess, DataMovement]]:
    for process in model.processes:
        for movement in process.movements:
            yield process, movement


# -- structural rules -------------------------------------------------------


def _rule_r1(model: Model) -> Iterator[Diagnostic]:
    if system_nature(model) is not Nature.QUANTUM:
        return
    natures = {layer.nature for layer in model.layers}
    if Nature.CLASSICAL not in natures or Nature.QUANTUM not in natures:
        yield _error(
            "R1",
            "a quantum software system requires at least one classical and one quantum layer",
            model.name,
        )


def _rule_r2(model: Model) -> Iterator[Diagnostic]:
    for process, movement in _movements(model):
        to_storage = movement.counterpart.kind is EndpointKind.STORAGE
        if movement.kind in STORAGE_KINDS and not to_storage:
            yield _error(
                "R2",
                f"{format_movement(movement)}: read and write movements must target storage",
                process.name,
                movement.span,
            )
        elif movement.kind not in STORAGE_KINDS and to_storage:
            yield _error(
                "R2",
                f"{format_movement(movement)}: entry and exit movements cannot target storage",
                process.name,
                movement.span,
            )


def _rule_r3(model: Model) -> Iterator[Diagnostic]:
    for process, movement in _movements(model):
        if movement.counterpart.kind is not EndpointKind.STORAGE:
            continue
        if movement.kind not in STORAGE_KINDS:
            continue  # R2 already reports the category mismatch
        storage = model.storage(movement.counterpart.name)
        quantum_kind = movement_is_quantum(movement.kind)
        if storage.nature is Nature.QUANTUM and not quantum_kind:
            yield _error(
                "R3",
                f"{format_movement(movement)}: quantum storage accepts only qread/qwrite",
                process.name,
                movement.span,
            )
        elif storage.nature is Nature.CLASSICAL and quantum_kind:
            yield _error(
                "R3",
                f"{format_movement(movement)}: classical storage accepts only read/write",
                process.name,
                movement.span,
            )


def _rule_r4(model: Model) -> Iterator[Diagnostic]:
    # Classical structures may only exchange classical payloads. A quantum
    # movement without a conversion is quantum end to end, so neither its
    # counterpart nor its owning layer may be classical. Storage
    # counterparts are R3's concern.
    for process, movement in _movements(model):
        if not movement_is_quantum(movement.kind):
            continue
        if movement.conversion is not Conversion.NONE:
            continue
        if model.layer(process.layer).nature is Nature.CLASSICAL:
            yield _error(
                "R4",
                f"{format_movement(movement)}: quantum data handled inside classical layer "
                f"{process.layer!r}",
                process.name,
                movement.span,
            )
        cp = movement.counterpart
        if cp.kind is EndpointKind.STORAGE:
            continue
        if _counterpart_nature(cp, model) is Nature.CLASSICAL:
            yield _error(
                "R4",
                f"{format_movement(movement)}: classical {cp.kind.value} {cp.name!r} "
                "cannot exchange quantum data without a conversion",
                process.name,
                movement.span,
            )


def _rule_r5(model: Model) -> Iterator[Diagnostic]:
    for process, movement in _movements(model):
        if movement.conversion is Conversion.NONE:
            continue
        word = movement.conversion.value
        required = MovementKind.QE if movement.conversion is Conversion.PREPARE else MovementKind.QX
        if movement.kind is not required:
            yield _error(
                "R5",
                f"{format_movement(movement)}: 'via {word}' is only legal on "
                f"{'qentry' if required is MovementKind.QE else 'qexit'} movements",
                process.name,
                movement.span,
            )
            continue
        if model.layer(process.layer).nature is not Nature.QUANTUM:
            yield _error(
                "R5",
                f"{format_movement(movement)}: conversion crossings belong to a process "
                "in a quantum layer",
                process.name,
                movement.span,
            )
            continue
        if _counterpart_nature(movement.counterpart, model) is not Nature.CLASSICAL:
            yield _error(
                "R5",
                f"{format_movement(movement)}: 'via {word}' crosses from or to a classical "
                "element, but the counterpart is quantum",
                process.name,
                movement.span,
            )


def _rule_r6(model: Model) -> Iterator[Diagnostic]:
    for process, movement in _movements(model):
        group = model.data_group(movement.data_group)
        if data_group_nature(group) is Nature.QUANTUM and not movement_is_quantum(movement.kind):
            yield _error(
                "R6",
                f"{format_movement(movement)}: quantum data group {group.name!r} requires "
                "a quantum movement kind",
                process.name,
                movement.span,
            )


def _rule_r7(model: Model) -> Iterator[Diagnostic]:
    for process, movement in _movements(model):
        if not movement_is_quantum(movement.kind):
            continue
        if movement.conversion is not Conversion.NONE:
            continue  # the payload starts or ends classical by design
        group = model.data_group(movement.data_group)
        if data_group_nature(group) is Nature.CLASSICAL:
            yield _error(
                "R7",
                f"{format_movement(movement)}: classical data group {group.name!r} moves via "
                "a quantum kind but never converts",
                process.name,
                movement.span,
            )


_MIRROR_SENDS = {MovementKind.X: False, MovementKind.QX: True}
_MIRROR_RECEIVES = {MovementKind.E: False, MovementKind.QE: True}


def _rule_r8(model: Model) -> Iterator[Diagnostic]:
    # A flow between two processes is identified by (sender, receiver,
    # group, quantum?). Declaring it as an exit in the sender and again as
    # an entry in the receiver would double-count one movement.
    seen: dict[tuple[str, str, str, bool], dict[str, tuple[FunctionalProcess, DataMovement]]] = {}
    for process, movement in _movements(model):
        if movement.counterpart.kind is not EndpointKind.PROCESS:
            continue
        if movement.kind in _MIRROR_SENDS:
            flow = (process.name, movement.counterpart.name, movement.data_group,
                    _MIRROR_SENDS[movement.kind])
            style = "send"
        elif movement.kind in _MIRROR_RECEIVES:
            flow = (movement.counterpart.name, process.name, movement.data_group,
                    _MIRROR_RECEIVES[movement.kind])
            style = "receive"
        else:
            continue
        declared = seen.setdefault(flow, {})
        other = "receive" if style == "send" else "send"
        if other in declared and style not in declared:
            owner, _ = declared[other]
            yield _error(
                "R8",
                f"{format_movement(movement)}: this flow is already declared in process "
                f"{owner.name!r}; declare each inter-process movement exactly once",
                process.name,
                movement.span,
            )
        declared.setdefault(style, (process, movement))


def _rule_r9(model: Model) -> Iterator[Diagnostic]:
    for cycle in _cycles(model):
        chain = " -> ".join(cycle + (cycle[0],))
        yield _error(
            "R9",
            f"cyclic uses chain: {chain}",
            cycle[0],
            model.process(cycle[0]).span,
        )


def _cycles(model: Model) -> list[tuple[str, ...]]:
    """Strongly connected components of the uses graph that form cycles."""
    order = [p.name for p in model.processes]
    edges = {p.name: [u for u in p.uses] for p in model.processes}
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    counter = 0
    components: list[list[str]] = []

    def strongconnect(node: str) -> None:
        nonlocal counter
        index[node] = low[node] = counter
        counter += 1
        stack.append(node)
        on_stack.add(node)
        for succ in edges.get(node, ()):
            if succ not in edges:
                continue
            if succ not in index:
                strongconnect(succ)
                low[node] = min(low[node], low[succ])
            elif succ in on_stack:
                low[node] = min(low[node], index[succ])
        if low[node] == index[node]:
            component = []
            while True:
                member = stack.pop()
                on_stack.discard(member)
                component.append(member)
                if member == node:
                    break
            components.append(component)

    for name in order:
        if name not in index:
            strongconnect(name)

    cycles: list[tuple[str, ...]] = []
    position = {name: i for i, name in enumerate(order)}
    for component in components:
        if len(component) > 1 or component[0] in edges.get(component[0], ()):
            cycles.append(tuple(sorted(component, key=position.__getitem__)))
    cycles.sort(key=lambda c: position[c[0]])
    return cycles


# -- hygiene rules ----------------------------------------------------------


def _rule_p1(model: Model) -> Iterator[Diagnostic]:
    for process in model.processes:
        if not process.movements:
            yield _warning(
                "P1",
                "process declares no data movements and is not measurable",
                process.name,
                process.span,
            )


def _rule_p2(model: Model) -> Iterator[Diagnostic]:
    # Layers and users are strategy-phase declarations and may legitimately
    # go unreferenced; data groups and storages exist only to be moved.
    used_groups = {m.data_group for _, m in _movements(model)}
    used_storages = {
        m.counterpart.name
        for _, m in _movements(model)
        if m.counterpart.kind is EndpointKind.STORAGE
    }
    for group in model.data_groups:
        if group.name not in used_groups:
            yield _warning("P2", "data group is never moved", group.name, group.span)
    for storage in model.storages:
        if storage.name not in used_storages:
            yield _warning("P2", "storage is never read or written", storage.name, storage.span)


def _rule_p3(model: Model) -> Iterator[Diagnostic]:
    if system_nature(model) is Nature.CLASSICAL:
        yield _warning(
            "P3",
            "model is purely classical; QCFP size is CFPv5-equivalent",
            model.name,
        )
