"""Named identity systems and variety classification.

The catalog stores each identity verbatim as printed (fully
parenthesized), never re-derived forms, so checks compare against the
published tables without drift.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .algebra import FiniteAlgebra
from .errors import SignatureError, TailMismatchError
from .terms import (
    Identity,
    Node,
    Op,
    Term,
    Var,
    check_identity,
    identity_variables,
    parse_identity,
    tail,
)

_RAW_SYSTEMS: dict[str, list[tuple[str, str]]] = {
    "Q": [
        ("Q1", r"x \ (x * y) = y"),
        ("Q2", r"x * (x \ y) = y"),
        ("Q3", r"(x * y) / y = x"),
        ("Q4", r"(x / y) * y = x"),
    ],
    "A": [
        ("A1", r"x \ (x * y) = y"),
        ("A2", r"x * (x \ y) = y"),
        ("A3", r"(x / y) * y = (x * y) / y"),
        ("A4", r"((x / y) * y) / z = x / z"),
        ("A5", r"((x * y) / z) * z = x * ((y / z) * z)"),
    ],
    "B": [
        ("A1", r"x \ (x * y) = y"),
        ("A2", r"x * (x \ y) = y"),
        ("A3", r"(x / y) * y = (x * y) / y"),
        ("B1", r"(x * x) / x = x"),
        ("B2", r"((x * y) * (z / u)) / (z / u) = x * ((y * u) / u)"),
    ],
    # Any one of these makes a model of system A a right product left loop.
    "LL": [
        ("LL1", r"(x / x) * y = y"),
        ("LL2", r"(x / x) * z = (y / y) * z"),
        ("LL3m", r"(x * y) / (x * y) = y / y"),
        ("LL3l", r"(x \ y) / (x \ y) = y / y"),
        ("LL3r", r"(x / y) / (x / y) = y / y"),
    ],
    # Right product right loops.
    "RL": [
        ("RL1", r"(x * (y \ y)) * z = x * z"),
        ("RL2", r"(x \ x) * z = (y \ y) * z"),
        ("RL3m", r"(x * y) \ (x * y) = y \ y"),
        ("RL3l", r"(x \ y) \ (x \ y) = y \ y"),
        ("RL3r", r"(x / y) \ (x / y) = y \ y"),
    ],
    # Right product loops.
    "L": [
        ("L1", r"(x \ x) * y = y"),
        ("L2", r"x * (y / y) = (x * y) / y"),
        ("L3", r"x * (y / y) = (x / y) * y"),
        ("L4", r"(x \ x) * z = (y / y) * z"),
        ("L5m", r"(x * y) \ (x * y) = y / y"),
        ("L5l", r"(x \ y) \ (x \ y) = y / y"),
        ("L5r", r"(x / y) \ (x / y) = y / y"),
        ("L6m", r"(x * y) / (x * y) = y \ y"),
        ("L6l", r"(x \ y) / (x \ y) = y \ y"),
        ("L6r", r"(x / y) / (x / y) = y \ y"),
    ],
    # Pointed characterizations (loop language).
    "LLe": [("LLe", r"e * x = x")],
    "RLe": [("RLe", r"(x * e) * y = x * y")],
    "Le": [("LLe", r"e * x = x"), ("RLe", r"(x * e) * y = x * y")],
    "Qi": [("Qi", r"e * e = e")],
    # One-sided loops in the quasigroup language.
    "qleft": [("qleft", r"x / x = y / y")],
    "qright": [("qright", r"x \ x = y \ y")],
    "qloop": [("qloop", r"x \ x = y / y")],
    # Right zero semigroups (all three operations return the right argument).
    "rzero": [("RZm", r"x * y = y"), ("RZl", r"x \ y = y"), ("RZr", r"x / y = y")],
    # Associativity; with system A this axiomatizes right groups.
    "assoc": [("assoc", r"x * (y * z) = (x * y) * z")],
    # Commutativity lifted by a fresh right factor.
    "rpcomm": [("rpcomm", r"(x * y) * z = (y * x) * z")],
}


@dataclass(frozen=True)
class AxiomSystem:
    name: str
    identities: tuple[tuple[str, Identity], ...]

    def labels(self) -> list[str]:
        return [label for label, _ in self.identities]

    def identity(self, label: str) -> Identity:
        for lab, ident in self.identities:
            if lab == label:
                return ident
        raise KeyError(label)


def _build() -> dict[str, AxiomSystem]:
    systems = {}
    for name, pairs in _RAW_SYSTEMS.items():
        idents = tuple((label, parse_identity(text)) for label, text in pairs)
        labels = [label for label, _ in idents]
        assert len(labels) == len(set(labels)), f"duplicate label in system {name}"
        systems[name] = AxiomSystem(name, idents)
    return systems


SYSTEMS: dict[str, AxiomSystem] = _build()

LABELS: dict[str, Identity] = {}
for _sys in SYSTEMS.values():
    for _label, _ident in _sys.identities:
        if _label in LABELS:
            assert LABELS[_label] == _ident, f"conflicting reuse of label {_label}"
        LABELS[_label] = _ident


def builtin_systems() -> list[AxiomSystem]:
    return list(SYSTEMS.values())


def get_system(name: str) -> AxiomSystem:
    try:
        return SYSTEMS[name]
    except KeyError:
        raise KeyError(f"unknown axiom system {name!r}; known: {', '.join(sorted(SYSTEMS))}")


def identity_by_label(label: str) -> Identity:
    try:
        return LABELS[label]
    except KeyError:
        raise KeyError(f"unknown identity label {label!r}")


def check_system(alg: FiniteAlgebra, system: AxiomSystem | str) -> dict[str, Optional[dict]]:
    """Per-identity report: label -> None (holds) or first counterexample."""
    if isinstance(system, str):
        system = get_system(system)
    return {label: check_identity(alg, ident) for label, ident in system.identities}


def satisfies(alg: FiniteAlgebra, system: AxiomSystem | str) -> bool:
    try:
        return all(cx is None for cx in check_system(alg, system).values())
    except SignatureError:
        return False


class VarietyLabel(enum.Enum):
    RIGHT_QUASIGROUP = "RightQuasigroup"
    LEFT_QUASIGROUP = "LeftQuasigroup"
    QUASIGROUP = "Quasigroup"
    RIGHT_ZERO = "RightZero"
    RPQ = "RPQ"
    RP_LEFT_LOOP = "RPLeftLoop"
    RP_RIGHT_LOOP = "RPRightLoop"
    RP_LOOP = "RPLoop"
    RPQI = "RPQi"
    LEFT_LOOP = "LeftLoop"
    RIGHT_LOOP = "RightLoop"
    LOOP = "Loop"
    GROUP = "Group"
    RIGHT_GROUP = "RightGroup"


# Each label is decided by its own defining system, with no implication
# shortcuts, so the catalog equivalences stay genuine tests.
_LABEL_SYSTEMS: list[tuple[VarietyLabel, list[str], bool]] = [
    # (label, systems that must all hold, needs point)
    (VarietyLabel.RIGHT_QUASIGROUP, ["__rq"], False),
    (VarietyLabel.LEFT_QUASIGROUP, ["__lq"], False),
    (VarietyLabel.QUASIGROUP, ["Q"], False),
    (VarietyLabel.RIGHT_ZERO, ["rzero"], False),
    (VarietyLabel.RPQ, ["A"], False),
    (VarietyLabel.RP_LEFT_LOOP, ["A", "LL"], False),
    (VarietyLabel.RP_RIGHT_LOOP, ["A", "RL"], False),
    (VarietyLabel.RP_LOOP, ["A", "L"], False),
    (VarietyLabel.RPQI, ["A", "Qi"], True),
    (VarietyLabel.LEFT_LOOP, ["Q", "qleft"], False),
    (VarietyLabel.RIGHT_LOOP, ["Q", "qright"], False),
    (VarietyLabel.LOOP, ["Q", "qloop"], False),
    (VarietyLabel.GROUP, ["Q", "assoc"], False),
    (VarietyLabel.RIGHT_GROUP, ["A", "assoc"], False),
]

_SUBSYSTEMS = {
    "__rq": AxiomSystem("__rq", SYSTEMS["Q"].identities[:2]),  # Q1, Q2
    "__lq": AxiomSystem("__lq", SYSTEMS["Q"].identities[2:]),  # Q3, Q4
}


def classify(alg: FiniteAlgebra) -> set[VarietyLabel]:
    """Variety labels the algebra satisfies.

    Labels whose defining identities need a missing table or an absent
    point are simply excluded.
    """
    out = set()
    for label, names, needs_point in _LABEL_SYSTEMS:
        if needs_point and alg.point is None:
            continue
        systems = [_SUBSYSTEMS.get(name) or SYSTEMS[name] for name in names]
        if all(satisfies(alg, s) for s in systems):
            out.add(label)
    return out


# -- lifting identities to the right product variety -------------------------


class LiftMode(enum.Enum):
    MUL_Z = "mul-z"
    LDIV_Z = "ldiv-z"
    RDIV_Z = "rdiv-z"
    MIXED = "mixed"
    RDIV_TAIL = "rdiv-tail"
    MUL_TAIL = "mul-tail"
    PLAIN = "plain"


def _fresh_variable(ident: Identity) -> Term:
    used = set(identity_variables(ident))
    if "z" not in used:
        return Var("z")
    k = 0
    while f"z{k}" in used:
        k += 1
    return Var(f"z{k}")


def lift_identity(ident: Identity, mode: LiftMode) -> Identity:
    """Transform s = t into the equivalent axiom family member for right
    product quasigroups."""
    s, t = ident.lhs, ident.rhs
    if mode is LiftMode.PLAIN:
        ts, tt = tail(s), tail(t)
        if ts != tt:
            raise TailMismatchError(
                f"plain lift needs matching tails, got {ts!r} and {tt!r}"
            )
        return ident
    if mode in (LiftMode.MUL_Z, LiftMode.LDIV_Z, LiftMode.RDIV_Z):
        z = _fresh_variable(ident)
        op = {LiftMode.MUL_Z: Op.MUL, LiftMode.LDIV_Z: Op.LDIV, LiftMode.RDIV_Z: Op.RDIV}[mode]
        return Identity(Node(op, s, z), Node(op, t, z))
    if mode is LiftMode.MIXED:
        z = _fresh_variable(ident)
        return Identity(
            Node(Op.RDIV, z, Node(Op.LDIV, s, z)),
            Node(Op.LDIV, Node(Op.RDIV, z, t), z),
        )
    w = Var(tail(s))
    if mode is LiftMode.RDIV_TAIL:
        return Identity(s, Node(Op.RDIV, Node(Op.MUL, t, w), w))
    if mode is LiftMode.MUL_TAIL:
        return Identity(s, Node(Op.MUL, Node(Op.RDIV, t, w), w))
    raise ValueError(f"unknown lift mode {mode!r}")
