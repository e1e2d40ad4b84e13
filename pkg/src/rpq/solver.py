"""Solving a*x = b and x*a = b in right product quasigroups.

The left equation has the unique solution a\\b.  The right equation is
solved through its reproductive form x = (b/a)x/x: once consistency
holds, every carrier element p yields the solution (b/a)p/p, and the
idempotents alone already parameterize the full solution set.  The
solver evaluates these closed forms directly and never consults the
decomposition, so factor-count cross-checks stay independent tests.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional

from .algebra import FiniteAlgebra, Op, idempotents
from .axioms import SYSTEMS, AxiomSystem, VarietyLabel, check_system, classify, satisfies
from .errors import ClassificationError, ConsistencyError, InvariantError, NotRPQ

_RIGHT_QUASIGROUP = AxiomSystem("right-quasigroup", SYSTEMS["Q"].identities[:2])


class Side(enum.Enum):
    LEFT = "a*x = b"
    RIGHT = "x*a = b"


@dataclass(frozen=True)
class SolutionSet:
    a: int
    b: int
    side: Side
    solutions: frozenset[int]
    # parameter -> the solution it generates, retained for reporting
    generator_trace: dict[int, int] = field(default_factory=dict)
    # True when idempotent parameterization was requested but no
    # idempotents exist, so the full carrier was used instead
    fallback: bool = False


def solve_ax_b(alg: FiniteAlgebra, a: int, b: int) -> int:
    """Unique solution x = a\\b of a*x = b in a right quasigroup."""
    if not satisfies(alg, _RIGHT_QUASIGROUP):
        raise ClassificationError("right quasigroup")
    x = alg.table(Op.LDIV)[a][b]
    if alg.mul[a][x] != b:
        raise InvariantError(f"a\\b = {x} does not solve a*x = b")
    return x


def _require_rpq(alg: FiniteAlgebra) -> None:
    for label, cx in check_system(alg, "A").items():
        if cx is not None:
            raise NotRPQ(label, cx)


def _general_solution(alg: FiniteAlgebra, a: int, b: int) -> Callable[[int], int]:
    mul, rdiv = alg.mul, alg.table(Op.RDIV)
    c = rdiv[b][a]  # b/a
    return lambda p: rdiv[mul[c][p]][p]  # (b/a)p/p


def consistent_xa_b(alg: FiniteAlgebra, a: int, b: int) -> bool:
    """x*a = b is solvable exactly when (b/a)*a = b."""
    _require_rpq(alg)
    rdiv = alg.table(Op.RDIV)
    return alg.mul[rdiv[b][a]][a] == b


def _solve_right(alg: FiniteAlgebra, a: int, b: int, params, fallback: bool) -> SolutionSet:
    rdiv = alg.table(Op.RDIV)
    witness = alg.mul[rdiv[b][a]][a]
    if witness != b:
        raise ConsistencyError(a, b, witness)
    gen = _general_solution(alg, a, b)
    trace = {p: gen(p) for p in params}
    for x in trace.values():
        if alg.mul[x][a] != b:
            raise InvariantError(f"generated value {x} does not solve x*a = b")
    return SolutionSet(a, b, Side.RIGHT, frozenset(trace.values()), trace, fallback)


def solve_xa_b(alg: FiniteAlgebra, a: int, b: int) -> SolutionSet:
    """All solutions of x*a = b via the general solution x = (b/a)p/p."""
    _require_rpq(alg)
    return _solve_right(alg, a, b, alg.elements(), fallback=False)


def solve_xa_b_idempotent(alg: FiniteAlgebra, a: int, b: int) -> SolutionSet:
    """Solutions of x*a = b generated from idempotent parameters only.

    Falls back to the full carrier (flagged on the result) when there are
    no idempotents.  On right product right loops the simplified
    generator (b/a)e must agree with (b/a)e/e; that agreement is
    asserted.
    """
    _require_rpq(alg)
    ids = sorted(idempotents(alg))
    if not ids:
        return _solve_right(alg, a, b, alg.elements(), fallback=True)
    result = _solve_right(alg, a, b, ids, fallback=False)
    if VarietyLabel.RP_RIGHT_LOOP in classify(alg):
        rdiv = alg.table(Op.RDIV)
        c = rdiv[b][a]
        for e in ids:
            if alg.mul[c][e] != result.generator_trace[e]:
                raise InvariantError(
                    f"simplified generator (b/a)e disagrees at e = {e}"
                )
    return result


def check_reproductive(alg: FiniteAlgebra, f: Callable[[int], int]) -> bool:
    """True iff f(f(x)) = f(x) for every carrier element."""
    return all(f(f(x)) == f(x) for x in alg.elements())


def reproductive_map(alg: FiniteAlgebra, a: int, b: int) -> Callable[[int], int]:
    """The map F(x) = (b/a)x/x whose fixed points solve x*a = b."""
    return _general_solution(alg, a, b)
