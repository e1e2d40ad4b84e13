"""Latin squares and a few named small quasigroup tables.

Used to build test quasigroups: a Latin square is exactly the
multiplication table of a quasigroup, with both divisions derivable.
"""

from __future__ import annotations

import random
from functools import lru_cache

from .algebra import FiniteAlgebra, derive_divisions


@lru_cache(maxsize=None)
def all_latin_squares(n: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """Every n x n Latin square (as row tuples), in lexicographic order.

    Counts: 1, 2, 12, 576 for n = 1..4.  Intended for n <= 4.
    """
    squares = []
    rows: list[tuple[int, ...]] = []

    def place(r: int):
        if r == n:
            squares.append(tuple(rows))
            return
        cols = [set(range(n)) - {rows[i][c] for i in range(r)} for c in range(n)]
        row = [-1] * n

        def fill(c: int):
            if c == n:
                rows.append(tuple(row))
                place(r + 1)
                rows.pop()
                return
            for v in sorted(cols[c]):
                if v not in row[:c]:
                    row[c] = v
                    fill(c + 1)
                    row[c] = -1

        fill(0)

    place(0)
    return tuple(squares)


def random_latin_square(n: int, rng: random.Random) -> tuple[tuple[int, ...], ...]:
    """A uniformly random member of the enumerated squares (n <= 4)."""
    squares = all_latin_squares(n)
    return rng.choice(squares)


def quasigroup_from_square(square) -> FiniteAlgebra:
    """Quasigroup with both divisions derived from a Latin square."""
    return derive_divisions(square)


def cyclic_group(n: int, point: int | None = None) -> FiniteAlgebra:
    """The cyclic group Z_n as a quasigroup, optionally pointed at 0."""
    mul = [[(i + j) % n for j in range(n)] for i in range(n)]
    alg = derive_divisions(mul)
    return FiniteAlgebra(n, alg.mul, alg.ldiv, alg.rdiv, point)


def klein_group(point: int | None = None) -> FiniteAlgebra:
    """The Klein four-group (Z2 x Z2) as a quasigroup."""
    mul = [[i ^ j for j in range(4)] for i in range(4)]
    alg = derive_divisions(mul)
    return FiniteAlgebra(4, alg.mul, alg.ldiv, alg.rdiv, point)


def left_loop_3() -> FiniteAlgebra:
    """An order-3 quasigroup with a left neutral but no right neutral."""
    return derive_divisions([[0, 1, 2], [2, 0, 1], [1, 2, 0]])


def right_loop_3() -> FiniteAlgebra:
    """An order-3 quasigroup with a right neutral but no left neutral."""
    return derive_divisions([[0, 2, 1], [1, 0, 2], [2, 1, 0]])
