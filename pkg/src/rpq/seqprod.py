"""Bracketed products of element sequences and idempotent elision.

In a right product left loop a right-bracketed product keeps its value
when interior idempotents are dropped; dually for left-bracketed products
in right product right loops.  In a right product loop the same works for
any fixed bracket shape once a fresh two-sided unit is adjoined (or the
distinguished point is used instead, in the pointed case).  The reduction
functions return the reduced sequence, not just its value, and verify the
value is preserved before returning.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .algebra import FiniteAlgebra, Op, idempotents
from .axioms import SYSTEMS, VarietyLabel, classify, satisfies
from .errors import ClassificationError, InvariantError, ParseError, StructuralError


def product_right(alg: FiniteAlgebra, seq: Sequence[int]) -> int:
    """Multiply with brackets associated to the right: a1*(a2*(...))."""
    if not seq:
        raise StructuralError("empty sequence has no product")
    acc = seq[-1]
    for a in reversed(seq[:-1]):
        acc = alg.mul[a][acc]
    return acc


def product_left(alg: FiniteAlgebra, seq: Sequence[int]) -> int:
    """Multiply with brackets associated to the left: ((...)*a_{n-1})*a_n."""
    if not seq:
        raise StructuralError("empty sequence has no product")
    acc = seq[0]
    for a in seq[1:]:
        acc = alg.mul[acc][a]
    return acc


# -- bracket shapes ----------------------------------------------------------


@dataclass(frozen=True)
class Shape:
    """Binary bracket tree; a leaf has no children.  Carries no operation
    labels: shapes are multiplication-only."""

    left: Optional["Shape"] = None
    right: Optional["Shape"] = None

    def __post_init__(self):
        if (self.left is None) != (self.right is None):
            raise StructuralError("shape node needs both children or neither")

    @property
    def is_leaf(self) -> bool:
        return self.left is None


LEAF = Shape()


def leaf_count(shape: Shape) -> int:
    if shape.is_leaf:
        return 1
    return leaf_count(shape.left) + leaf_count(shape.right)


def parse_shape(text: str) -> Shape:
    """Parse the parenthesis grammar: '.' is a leaf, '(SS)' pairs two
    shapes, e.g. '((..)(..))' or '(.(..))'."""
    pos = 0

    def parse() -> Shape:
        nonlocal pos
        if pos >= len(text):
            raise ParseError("unexpected end of shape", pos)
        c = text[pos]
        if c == ".":
            pos += 1
            return LEAF
        if c == "(":
            pos += 1
            left = parse()
            right = parse()
            if pos >= len(text) or text[pos] != ")":
                raise ParseError("expected ')'", pos)
            pos += 1
            return Shape(left, right)
        raise ParseError(f"unexpected {c!r} in shape", pos)

    shape = parse()
    if pos != len(text):
        raise ParseError("trailing input after shape", pos)
    return shape


def format_shape(shape: Shape) -> str:
    if shape.is_leaf:
        return "."
    return f"({format_shape(shape.left)}{format_shape(shape.right)})"


def right_comb(n: int) -> Shape:
    shape = LEAF
    for _ in range(n - 1):
        shape = Shape(LEAF, shape)
    return shape


def left_comb(n: int) -> Shape:
    shape = LEAF
    for _ in range(n - 1):
        shape = Shape(shape, LEAF)
    return shape


@lru_cache(maxsize=None)
def all_shapes(n: int) -> tuple[Shape, ...]:
    """Every bracket shape with n leaves (Catalan many)."""
    if n == 1:
        return (LEAF,)
    out = []
    for k in range(1, n):
        for left in all_shapes(k):
            for right in all_shapes(n - k):
                out.append(Shape(left, right))
    return tuple(out)


def random_shape(n: int, rng: random.Random) -> Shape:
    if n == 1:
        return LEAF
    k = rng.randint(1, n - 1)
    return Shape(random_shape(k, rng), random_shape(n - k, rng))


def eval_shape(alg: FiniteAlgebra, shape: Shape, seq: Sequence[int]) -> int:
    """Multiplication-only fold of the sequence along the shape."""
    if leaf_count(shape) != len(seq):
        raise StructuralError(
            f"shape has {leaf_count(shape)} leaves but sequence has {len(seq)} entries"
        )
    pos = 0

    def go(s: Shape) -> int:
        nonlocal pos
        if s.is_leaf:
            v = seq[pos]
            pos += 1
            return v
        return alg.mul[go(s.left)][go(s.right)]

    return go(shape)


# -- unit adjunction ---------------------------------------------------------


@dataclass(frozen=True)
class ExtendedAlgebra:
    """The base algebra with a fresh two-sided unit adjoined as element
    ``base.size`` for all three operations."""

    base: FiniteAlgebra
    algebra: FiniteAlgebra

    @property
    def unit(self) -> int:
        return self.base.size


def adjoin_unit(alg: FiniteAlgebra) -> ExtendedAlgebra:
    n = alg.size

    def extend(t):
        if t is None:
            return None
        rows = [tuple(t[x]) + (x,) for x in range(n)]
        rows.append(tuple(range(n + 1)))
        return tuple(rows)

    ext = FiniteAlgebra(
        n + 1, extend(alg.mul), extend(alg.ldiv), extend(alg.rdiv), alg.point
    )
    return ExtendedAlgebra(alg, ext)


# -- idempotent elision ------------------------------------------------------


def _require(alg: FiniteAlgebra, label: VarietyLabel) -> None:
    if label not in classify(alg):
        raise ClassificationError(label.value)


def reduce_right(alg: FiniteAlgebra, seq: Sequence[int]) -> list[int]:
    """Drop idempotents from a right-bracketed product, keeping the final
    entry; the value is preserved in any right product left loop."""
    _require(alg, VarietyLabel.RP_LEFT_LOOP)
    if not seq:
        raise StructuralError("empty sequence")
    ids = idempotents(alg)
    # Non-idempotents survive; the final entry always appears, exactly once.
    reduced = [a for a in seq[:-1] if a not in ids]
    reduced.append(seq[-1])
    if product_right(alg, reduced) != product_right(alg, seq):
        raise InvariantError("right-product reduction changed the value")
    return reduced


def reduce_left(alg: FiniteAlgebra, seq: Sequence[int]) -> list[int]:
    """Keep the first entry, the non-idempotents, and the last entry of a
    left-bracketed product; the value is preserved in any right product
    right loop."""
    _require(alg, VarietyLabel.RP_RIGHT_LOOP)
    if not seq:
        raise StructuralError("empty sequence")
    ids = idempotents(alg)
    reduced = []
    if seq[0] in ids:
        reduced.append(seq[0])
    reduced.extend(a for a in seq if a not in ids)
    if len(seq) > 1 and seq[-1] in ids:
        reduced.append(seq[-1])
    if product_left(alg, reduced) != product_left(alg, seq):
        raise InvariantError("left-product reduction changed the value")
    return reduced


def _is_pointed_rp_loop(alg: FiniteAlgebra) -> bool:
    return alg.point is not None and satisfies(alg, "A") and satisfies(alg, "Le")


@dataclass(frozen=True)
class ShapeReduction:
    """A reduced sequence together with the algebra it lives in.

    For the unpointed form the sequence contains the adjoined unit (whose
    index is ``unit``) in place of elided idempotents; in the pointed form
    it stays inside the original algebra, using the point instead.
    """

    algebra: FiniteAlgebra
    unit: Optional[int]
    sequence: tuple[int, ...]
    value: int


def reduce_shape(
    alg: FiniteAlgebra, shape: Shape, seq: Sequence[int], pointed: bool = False
) -> ShapeReduction:
    """Replace every interior idempotent by the unit (or by the point when
    ``pointed``), preserving the value of the fixed-shape product.

    Requires a right product loop; the pointed form additionally needs the
    distinguished point to be a two-sided neutral of the factor.
    """
    if leaf_count(shape) != len(seq):
        raise StructuralError("shape and sequence length differ")
    ids = idempotents(alg)
    last = len(seq) - 1
    if pointed:
        if not _is_pointed_rp_loop(alg):
            raise ClassificationError("pointed right product loop")
        filler = alg.point
        reduced = tuple(
            filler if k < last and a in ids else a for k, a in enumerate(seq)
        )
        value = eval_shape(alg, shape, seq)
        if eval_shape(alg, shape, reduced) != value:
            raise InvariantError("pointed shape reduction changed the value")
        return ShapeReduction(alg, None, reduced, value)
    _require(alg, VarietyLabel.RP_LOOP)
    ext = adjoin_unit(alg)
    reduced = tuple(
        ext.unit if k < last and a in ids else a for k, a in enumerate(seq)
    )
    value = eval_shape(ext.algebra, shape, seq)  # original avoids the unit
    if eval_shape(ext.algebra, shape, reduced) != value:
        raise InvariantError("shape reduction changed the value")
    return ShapeReduction(ext.algebra, ext.unit, reduced, value)


def unit_tail_split_holds(alg: FiniteAlgebra, shape: Shape, seq: Sequence[int]) -> bool:
    """With an idempotent final entry, the product equals the same shape
    evaluated with the unit in the last slot, times that entry."""
    if leaf_count(shape) != len(seq):
        raise StructuralError("shape and sequence length differ")
    if seq[-1] not in idempotents(alg):
        raise StructuralError("final entry must be idempotent")
    ext = adjoin_unit(alg)
    whole = eval_shape(ext.algebra, shape, seq)
    split = ext.algebra.mul[eval_shape(ext.algebra, shape, list(seq[:-1]) + [ext.unit])][
        seq[-1]
    ]
    return whole == split


def reduce_few_nonidempotents(alg: FiniteAlgebra, seq: Sequence[int]) -> list[int]:
    """With at most two non-idempotents present, every bracketing of the
    sequence equals the left-bracketed product of: the non-idempotents
    before the final position, in order, then the final entry."""
    _require(alg, VarietyLabel.RP_LOOP)
    if not seq:
        raise StructuralError("empty sequence")
    ids = idempotents(alg)
    non = [a for a in seq if a not in ids]
    if len(non) > 2:
        raise StructuralError("more than two non-idempotents")
    return [a for a in seq[:-1] if a not in ids] + [seq[-1]]

