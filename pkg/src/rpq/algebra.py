"""Finite algebras in the (pointed) quasigroup signature.

An algebra is a carrier {0..n-1} with a total multiplication table and
optional left/right division tables, plus an optional distinguished point.
Tables are row-major: ``table[x][y]`` is ``x op y``.  Elements are plain
ints.  Algebras are immutable after construction and all operations here
are pure functions, so instances can be shared freely.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import (
    EmptyCarrierError,
    MissingOperationError,
    NotCancellative,
    SignatureError,
    SizeLimitError,
    StructuralError,
)


class Op(enum.Enum):
    """The three binary operation symbols of the quasigroup language."""

    MUL = "*"
    LDIV = "\\"
    RDIV = "/"


Table = tuple  # tuple of row tuples of int


def _freeze_table(rows, size, what):
    if len(rows) != size:
        raise StructuralError(f"{what} table has {len(rows)} rows, expected {size}")
    out = []
    for i, row in enumerate(rows):
        row = tuple(row)
        if len(row) != size:
            raise StructuralError(f"{what} row {i} has {len(row)} entries, expected {size}")
        for v in row:
            if not isinstance(v, int) or not 0 <= v < size:
                raise StructuralError(f"{what}[{i}] entry {v!r} outside 0..{size - 1}")
        out.append(row)
    return tuple(out)


@dataclass(frozen=True)
class FiniteAlgebra:
    """Carrier {0..size-1} with tables for *, \\, / and an optional point.

    Missing divisions are represented as absent (None) tables, never junk
    values; operations that need them fail loudly.
    """

    size: int
    mul: Table
    ldiv: Optional[Table] = None
    rdiv: Optional[Table] = None
    point: Optional[int] = None

    def __post_init__(self):
        if self.size < 1:
            raise EmptyCarrierError("carrier must have at least one element")
        object.__setattr__(self, "mul", _freeze_table(self.mul, self.size, "mul"))
        for name in ("ldiv", "rdiv"):
            t = getattr(self, name)
            if t is not None:
                object.__setattr__(self, name, _freeze_table(t, self.size, name))
        if self.point is not None and not 0 <= self.point < self.size:
            raise StructuralError(f"point {self.point} outside 0..{self.size - 1}")

    def table(self, op: Op) -> Table:
        t = {Op.MUL: self.mul, Op.LDIV: self.ldiv, Op.RDIV: self.rdiv}[op]
        if t is None:
            raise MissingOperationError(f"algebra has no {op.name} table")
        return t

    def has(self, op: Op) -> bool:
        return op is Op.MUL or getattr(self, op.name.lower()) is not None

    def elements(self) -> range:
        return range(self.size)


def apply(alg: FiniteAlgebra, op: Op, a: int, b: int) -> int:
    """Table lookup ``a op b`` with bounds checking."""
    if not 0 <= a < alg.size or not 0 <= b < alg.size:
        raise StructuralError(f"elements ({a}, {b}) outside carrier of size {alg.size}")
    return alg.table(op)[a][b]


def _is_permutation(seq, size) -> bool:
    return len(set(seq)) == size


def derive_divisions(mul: Sequence[Sequence[int]], require: Iterable[Op] = ()) -> FiniteAlgebra:
    """Build an algebra from a multiplication table, deriving divisions.

    ``ldiv[x][y]`` is the unique z with ``mul[x][z] = y`` and exists when
    every row is a permutation; ``rdiv[x][y]`` is the unique z with
    ``mul[z][y] = x`` and exists when every column is a permutation.
    Divisions in ``require`` must be derivable or NotCancellative is
    raised naming the offending row/column; others are derived when
    possible and left absent otherwise.
    """
    require = set(require)
    if Op.MUL in require:
        raise ValueError("only divisions can be required")
    n = len(mul)
    if n == 0:
        raise EmptyCarrierError("carrier must have at least one element")
    mul = _freeze_table(mul, n, "mul")

    ldiv = None
    bad_row = next((x for x in range(n) if not _is_permutation(mul[x], n)), None)
    if bad_row is None:
        ld = [[0] * n for _ in range(n)]
        for x in range(n):
            for z in range(n):
                ld[x][mul[x][z]] = z
        ldiv = ld
    elif Op.LDIV in require:
        raise NotCancellative("row", bad_row)

    rdiv = None
    bad_col = next(
        (y for y in range(n) if not _is_permutation([mul[x][y] for x in range(n)], n)),
        None,
    )
    if bad_col is None:
        rd = [[0] * n for _ in range(n)]
        for z in range(n):
            for y in range(n):
                rd[mul[z][y]][y] = z
        rdiv = rd
    elif Op.RDIV in require:
        raise NotCancellative("column", bad_col)

    return FiniteAlgebra(n, mul, ldiv, rdiv)


def right_zero(n: int) -> FiniteAlgebra:
    """The n-element algebra with x*y = x\\y = x/y = y."""
    if n < 1:
        raise EmptyCarrierError("right zero semigroup needs a nonempty carrier")
    t = tuple(tuple(range(n)) for _ in range(n))
    return FiniteAlgebra(n, t, t, t)


def pair_index(a: int, b: int, bsize: int) -> int:
    """Row-major encoding of the pair (a, b) in a product with right factor size bsize."""
    return a * bsize + b


def unpair_index(k: int, bsize: int) -> tuple[int, int]:
    return divmod(k, bsize)


def direct_product(a: FiniteAlgebra, b: FiniteAlgebra) -> FiniteAlgebra:
    """Componentwise product on pairs encoded row-major as i*|B| + j.

    A division table is present in the product iff present in both
    factors.  Points must be present in both factors or neither.
    """
    if (a.point is None) != (b.point is None):
        raise SignatureError("cannot form product: exactly one factor has a point")
    n = a.size * b.size

    def prod_table(ta, tb):
        rows = []
        for i in range(a.size):
            for j in range(b.size):
                row = []
                for k in range(a.size):
                    for l in range(b.size):
                        row.append(pair_index(ta[i][k], tb[j][l], b.size))
                rows.append(tuple(row))
        return tuple(rows)

    mul = prod_table(a.mul, b.mul)
    ldiv = prod_table(a.ldiv, b.ldiv) if a.ldiv is not None and b.ldiv is not None else None
    rdiv = prod_table(a.rdiv, b.rdiv) if a.rdiv is not None and b.rdiv is not None else None
    point = None
    if a.point is not None:
        point = pair_index(a.point, b.point, b.size)
    return FiniteAlgebra(n, mul, ldiv, rdiv, point)


def idempotents(alg: FiniteAlgebra) -> frozenset[int]:
    """The set { x : x*x = x }."""
    return frozenset(x for x in alg.elements() if alg.mul[x][x] == x)


def present_ops(alg: FiniteAlgebra) -> list[Op]:
    return [op for op in Op if alg.has(op)]


def generated_subalgebra(alg: FiniteAlgebra, seeds: Iterable[int]) -> frozenset[int]:
    """Least subset containing the seeds (and the point, if any) closed
    under all present operations.  Computed by closure iteration."""
    current = set(seeds)
    if alg.point is not None:
        current.add(alg.point)
    if not current:
        raise StructuralError("no seeds and no point: nothing generates")
    for x in current:
        if not 0 <= x < alg.size:
            raise StructuralError(f"seed {x} outside carrier")
    tables = [alg.table(op) for op in present_ops(alg)]
    frontier = list(current)
    while frontier:
        x = frontier.pop()
        for t in tables:
            for y in list(current):
                for v in (t[x][y], t[y][x]):
                    if v not in current:
                        current.add(v)
                        frontier.append(v)
    return frozenset(current)


def is_subalgebra(alg: FiniteAlgebra, subset: Iterable[int]) -> bool:
    """True iff the subset is closed under every present operation
    (and contains the point, if any)."""
    s = set(subset)
    if not s:
        return False
    if alg.point is not None and alg.point not in s:
        return False
    tables = [alg.table(op) for op in present_ops(alg)]
    return all(t[x][y] in s for t in tables for x in s for y in s)


def restrict(alg: FiniteAlgebra, subset: Iterable[int]) -> tuple[FiniteAlgebra, list[int]]:
    """Restrict a closed subset to a standalone algebra.

    Returns the restricted algebra on {0..k-1} together with the list of
    original elements in ascending order (index i of the restriction is
    element ``order[i]`` of the parent).
    """
    order = sorted(set(subset))
    if not is_subalgebra(alg, order):
        raise StructuralError("subset is not closed under the algebra's operations")
    back = {x: i for i, x in enumerate(order)}
    k = len(order)

    def sub(t):
        return tuple(tuple(back[t[x][y]] for y in order) for x in order) if t is not None else None

    point = back[alg.point] if alg.point is not None else None
    return FiniteAlgebra(k, sub(alg.mul), sub(alg.ldiv), sub(alg.rdiv), point), order


def unpointed(alg: FiniteAlgebra) -> FiniteAlgebra:
    """The same algebra with the distinguished point forgotten."""
    if alg.point is None:
        return alg
    return FiniteAlgebra(alg.size, alg.mul, alg.ldiv, alg.rdiv)


def _iso_search(a: FiniteAlgebra, b: FiniteAlgebra, count_all: bool):
    """Backtracking search for isomorphisms a -> b.

    Yields each complete image tuple.  Partial maps are extended by
    forced closure (the image of x*y is forced once x and y are mapped),
    so only images of generators branch.
    """
    if a.size != b.size:
        return []
    ops = present_ops(a)
    if ops != present_ops(b) or (a.point is None) != (b.point is None):
        return []
    n = a.size
    tables_a = [a.table(op) for op in ops]
    tables_b = [b.table(op) for op in ops]

    # Constraint-first order: the point (forced image), then elements whose
    # rows/columns are most varied.
    def diversity(x):
        score = 0
        for t in tables_a:
            score += len({t[x][y] for y in range(n)}) + len({t[y][x] for y in range(n)})
        return -score

    order = sorted(range(n), key=diversity)
    if a.point is not None:
        order.remove(a.point)
        order.insert(0, a.point)

    h = [-1] * n
    used = [False] * n

    def close(assigned):
        # Propagate forced images; returns (ok, trail of newly mapped elements).
        trail = []
        queue = list(assigned)
        while queue:
            x = queue.pop()
            for ta, tb in zip(tables_a, tables_b):
                for y in range(n):
                    if h[y] < 0:
                        continue
                    for p, q in ((x, y), (y, x)):
                        z = ta[p][q]
                        img = tb[h[p]][h[q]]
                        if h[z] < 0:
                            if used[img]:
                                return False, trail
                            h[z] = img
                            used[img] = True
                            trail.append(z)
                            queue.append(z)
                        elif h[z] != img:
                            return False, trail
        return True, trail

    def undo(trail):
        for z in trail:
            used[h[z]] = False
            h[z] = -1

    results = []

    def rec():
        x = next((y for y in order if h[y] < 0), None)
        if x is None:
            results.append(tuple(h))
            return not count_all  # stop at first unless counting
        candidates = [b.point] if a.point is not None and x == a.point else range(n)
        for img in candidates:
            if used[img]:
                continue
            h[x] = img
            used[img] = True
            ok, trail = close([x])
            if ok and rec():
                undo(trail)
                used[img] = False
                h[x] = -1
                return True
            undo(trail)
            used[img] = False
            h[x] = -1
        return False

    rec()
    return results


def find_isomorphism(a: FiniteAlgebra, b: FiniteAlgebra) -> Optional[tuple[int, ...]]:
    """A bijection h with h(x op y) = h(x) op h(y) for every present
    operation (and h(point) = point), or None if none exists."""
    found = _iso_search(a, b, count_all=False)
    return found[0] if found else None


def is_homomorphism_image(a: FiniteAlgebra, b: FiniteAlgebra, h: Sequence[int]) -> bool:
    """Verify that the map h respects every present operation and point."""
    ops = present_ops(a)
    if ops != present_ops(b):
        return False
    if a.point is not None and (b.point is None or h[a.point] != b.point):
        return False
    for op in ops:
        ta, tb = a.table(op), b.table(op)
        for x in a.elements():
            for y in a.elements():
                if h[ta[x][y]] != tb[h[x]][h[y]]:
                    return False
    return True


AUTOMORPHISM_SIZE_BOUND = 8


def automorphism_count(alg: FiniteAlgebra) -> int:
    """Number of isomorphisms alg -> alg (factorial search, size <= 8)."""
    if alg.size > AUTOMORPHISM_SIZE_BOUND:
        raise SizeLimitError(
            f"automorphism search refused for size {alg.size} > {AUTOMORPHISM_SIZE_BOUND}"
        )
    return len(_iso_search(alg, alg, count_all=True))


# -- JSON file format ------------------------------------------------------
#
# {"size": n, "mul": [[...]], "ldiv": [[...]]?, "rdiv": [[...]]?, "point": k?}
# with row-major tables: table[x][y] = x op y.


def algebra_from_dict(data: dict, derive: bool = True) -> FiniteAlgebra:
    try:
        size = data["size"]
        mul = data["mul"]
    except (KeyError, TypeError) as exc:
        raise StructuralError(f"algebra object needs 'size' and 'mul': {exc}")
    ldiv = data.get("ldiv")
    rdiv = data.get("rdiv")
    point = data.get("point")
    if derive and (ldiv is None or rdiv is None):
        derived = derive_divisions(mul)
        ldiv = ldiv if ldiv is not None else derived.ldiv
        rdiv = rdiv if rdiv is not None else derived.rdiv
    if len(mul) != size:
        raise StructuralError(f"declared size {size} does not match table")
    return FiniteAlgebra(size, mul, ldiv, rdiv, point)


def algebra_to_dict(alg: FiniteAlgebra) -> dict:
    data = {"size": alg.size, "mul": [list(r) for r in alg.mul]}
    if alg.ldiv is not None:
        data["ldiv"] = [list(r) for r in alg.ldiv]
    if alg.rdiv is not None:
        data["rdiv"] = [list(r) for r in alg.rdiv]
    if alg.point is not None:
        data["point"] = alg.point
    return data


def load_algebra(path, derive: bool = True) -> FiniteAlgebra:
    with open(path, "r", encoding="utf-8") as fh:
        return algebra_from_dict(json.load(fh), derive=derive)


def save_algebra(alg: FiniteAlgebra, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(algebra_to_dict(alg), fh, indent=1, sort_keys=True)
        fh.write("\n")
