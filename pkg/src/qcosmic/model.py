"""Domain types for hybrid classical/quantum software models.

The model mirrors the generic software model used by COSMIC-style
measurement: layers partition the system, functional processes own data
movements, and every movement carries a data group across a boundary to a
counterpart (user, storage, another process, or a layer).

Classicality is a two-valued tag. Layers, users, and storages declare it
explicitly; data groups and processes derive it:

* a data group is quantum iff at least one attribute is quantum;
* a process is quantum iff its layer is quantum, any movement touches a
  quantum data group, or any movement performs a state-preparation or
  measurement conversion;
* the system is quantum iff any element is quantum.

Everything here is immutable and hashable; all operations are pure.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .diagnostics import Span

__all__ = [
    "Attribute",
    "Conversion",
    "DataGroup",
    "DataMovement",
    "Endpoint",
    "EndpointKind",
    "FunctionalProcess",
    "FunctionalUser",
    "Layer",
    "Model",
    "MovementKind",
    "Nature",
    "PersistentStorage",
    "UnresolvedReferenceError",
    "data_group_nature",
    "movement_is_quantum",
    "process_nature",
    "system_nature",
]


class UnresolvedReferenceError(LookupError):
    """A name used in the model does not resolve to a declaration."""

    def __init__(self, category: str, name: str):
        super().__init__(f"unresolved {category} reference: {name!r}")
        self.category = category
        self.name = name


class Nature(enum.Enum):
    CLASSICAL = "classical"
    QUANTUM = "quantum"


class MovementKind(enum.Enum):
    """The eight countable data movement kinds."""

    E = "E"
    X = "X"
    R = "R"
    W = "W"
    QE = "QE"
    QX = "QX"
    QR = "QR"
    QW = "QW"


#: Movement kinds that target persistent storage.
STORAGE_KINDS = frozenset({MovementKind.R, MovementKind.W, MovementKind.QR, MovementKind.QW})

#: Canonical column/tally order for reports.
KIND_ORDER = (
    MovementKind.E,
    MovementKind.X,
    MovementKind.R,
    MovementKind.W,
    MovementKind.QE,
    MovementKind.QX,
    MovementKind.QR,
    MovementKind.QW,
)


class Conversion(enum.Enum):
    """Classical/quantum boundary conversion carried by a movement."""

    NONE = "none"
    PREPARE = "prepare"
    MEASURE = "measure"


class EndpointKind(enum.Enum):
    USER = "user"
    STORAGE = "storage"
    PROCESS = "process"
    LAYER = "layer"


@dataclass(frozen=True, slots=True)
class Endpoint:
    """The counterpart of a movement: what sits on the far side."""

    kind: EndpointKind
    name: str


@dataclass(frozen=True, slots=True)
class Layer:
    name: str
    nature: Nature
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class FunctionalUser:
    name: str
    nature: Nature
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class PersistentStorage:
    name: str
    nature: Nature
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Attribute:
    name: str
    nature: Nature


@dataclass(frozen=True, slots=True)
class DataGroup:
    name: str
    attributes: tuple[Attribute, ...] = ()
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class DataMovement:
    kind: MovementKind
    data_group: str
    counterpart: Endpoint
    conversion: Conversion = Conversion.NONE
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class FunctionalProcess:
    name: str
    layer: str
    movements: tuple[DataMovement, ...] = ()
    uses: tuple[str, ...] = ()
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Model:
    """A parsed system description. Declaration order is preserved."""

    name: str
    purpose: str = ""
    scope: str = ""
    layers: tuple[Layer, ...] = ()
    users: tuple[FunctionalUser, ...] = ()
    storages: tuple[PersistentStorage, ...] = ()
    data_groups: tuple[DataGroup, ...] = ()
    processes: tuple[FunctionalProcess, ...] = ()

    def is_empty(self) -> bool:
        return not (
            self.layers or self.users or self.storages or self.data_groups or self.processes
        )

    def layer(self, name: str) -> Layer:
        return _find(self.layers, name, "layer")

    def user(self, name: str) -> FunctionalUser:
        return _find(self.users, name, "user")

    def storage(self, name: str) -> PersistentStorage:
        return _find(self.storages, name, "storage")

    def data_group(self, name: str) -> DataGroup:
        return _find(self.data_groups, name, "datagroup")

    def process(self, name: str) -> FunctionalProcess:
        return _find(self.processes, name, "process")


def _find(items, name: str, category: str):
    for item in items:
        if item.name == name:
            return item
    raise UnresolvedReferenceError(category, name)


def movement_is_quantum(kind: MovementKind) -> bool:
    """True for QE/QX/QR/QW, false for the four classical kinds."""
    return kind in (MovementKind.QE, MovementKind.QX, MovementKind.QR, MovementKind.QW)


def data_group_nature(group: DataGroup) -> Nature:
    """Quantum iff at least one attribute stores quantum information."""
    for attr in group.attributes:
        if attr.nature is Nature.QUANTUM:
            return Nature.QUANTUM
    return Nature.CLASSICAL


def process_nature(process: FunctionalProcess, model: Model) -> Nature:
    """Derive a process's classicality.

    Quantum iff the containing layer is quantum, any movement touches a
    quantum data group, or any movement carries a nonzero conversion.
    Raises UnresolvedReferenceError when a reference does not resolve.
    """
    if model.layer(process.layer).nature is Nature.QUANTUM:
        return Nature.QUANTUM
    for movement in process.movements:
        if movement.conversion is not Conversion.NONE:
            return Nature.QUANTUM
        if data_group_nature(model.data_group(movement.data_group)) is Nature.QUANTUM:
            return Nature.QUANTUM
    return Nature.CLASSICAL


def system_nature(model: Model) -> Nature:
    """Quantum iff any layer, user, storage, data group, or process is quantum."""
    for declared in (*model.layers, *model.users, *model.storages):
        if declared.nature is Nature.QUANTUM:
            return Nature.QUANTUM
    for group in model.data_groups:
        if data_group_nature(group) is Nature.QUANTUM:
            return Nature.QUANTUM
    for process in model.processes:
        if process_nature(process, model) is Nature.QUANTUM:
            return Nature.QUANTUM
    return Nature.CLASSICAL
