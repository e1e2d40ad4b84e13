"""Direct-product decomposition of algebras satisfying the right product
quasigroup axioms, plus the idempotent/subloop structure reports.

From the derived band operation x ? y = (x*y)/y the left translations
group elements into the quasigroup factor and the right translations into
the right zero factor; the map x -> (left class, right class) is the
witnessing isomorphism.  Everything the theory guarantees is re-verified
before a Decomposition is returned: the checks double as defense in depth
and as a running test of the representation theorem.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

from .algebra import (
    FiniteAlgebra,
    Op,
    direct_product,
    idempotents,
    is_homomorphism_image,
    is_subalgebra,
    pair_index,
    restrict,
    right_zero,
    unpointed,
)
from .axioms import VarietyLabel, check_system, classify, satisfies
from .errors import InvariantError, NotRPQ, NotStarCompatible
from .terms import parse_identity, check_identity

StarTable = tuple


def star(alg: FiniteAlgebra) -> StarTable:
    """The derived band table s[x][y] = (x/y)*y, verified against (x*y)/y.

    The two forms agree exactly on models of the A3 axiom; a disagreement
    raises NotStarCompatible with the witnessing pair.
    """
    mul, rdiv = alg.table(Op.MUL), alg.table(Op.RDIV)
    rows = []
    for x in alg.elements():
        row = []
        for y in alg.elements():
            first = mul[rdiv[x][y]][y]
            second = rdiv[mul[x][y]][y]
            if first != second:
                raise NotStarCompatible(x, y, first, second)
            row.append(first)
        rows.append(tuple(row))
    return tuple(rows)


class BandCheck(NamedTuple):
    ok: bool
    witness: Optional[tuple]  # (x,) for failed idempotence, (x, y, z) otherwise


def is_rectangular_band(table: StarTable) -> BandCheck:
    """Check x?x = x and (x?y)?z = x?z = x?(y?z) over all triples."""
    n = len(table)
    for x in range(n):
        if table[x][x] != x:
            return BandCheck(False, (x,))
    for x in range(n):
        for y in range(n):
            for z in range(n):
                xz = table[x][z]
                if table[table[x][y]][z] != xz or table[x][table[y][z]] != xz:
                    return BandCheck(False, (x, y, z))
    return BandCheck(True, None)


@dataclass(frozen=True)
class Decomposition:
    """Quasigroup factor ``left``, right zero factor ``right``, and the
    witnessing isomorphism x -> (l_class[x], r_class[x])."""

    source: FiniteAlgebra
    left: FiniteAlgebra
    right: FiniteAlgebra
    l_class: tuple[int, ...]
    r_class: tuple[int, ...]

    def witness(self, x: int) -> tuple[int, int]:
        return (self.l_class[x], self.r_class[x])

    def witness_index(self, x: int) -> int:
        """Image of x in direct_product(left, right) pair encoding."""
        return pair_index(self.l_class[x], self.r_class[x], self.right.size)


def _class_partition(keys):
    """Indices grouped by equal keys, classes ordered by first appearance."""
    index: dict = {}
    assignment = []
    for key in keys:
        if key not in index:
            index[key] = len(index)
        assignment.append(index[key])
    return assignment


def decompose(alg: FiniteAlgebra) -> Decomposition:
    """Split a model of the defining axiom system into its quasigroup and
    right zero factors; raises NotRPQ with a counterexample otherwise."""
    report = check_system(alg, "A")
    for label, cx in report.items():
        if cx is not None:
            raise NotRPQ(label, cx)
    s = star(alg)
    n = alg.size

    l_class = _class_partition(s)  # rows: x ~ y iff same left translation
    cols = tuple(tuple(s[x][y] for x in range(n)) for y in range(n))
    r_class = _class_partition(cols)
    nl, nr = max(l_class) + 1, max(r_class) + 1
    if nl * nr != n:
        raise InvariantError(f"class counts {nl}*{nr} do not tile carrier of size {n}")

    reps = [l_class.index(i) for i in range(nl)]

    def factor_table(table):
        out = [[0] * nl for _ in range(nl)]
        for i, x in enumerate(reps):
            for j, y in enumerate(reps):
                out[i][j] = l_class[table[x][y]]
        # Well-definedness on whole classes, not just representatives: the
        # theory forces this, so a violation is an implementation bug.
        for x in range(n):
            for y in range(n):
                if l_class[table[x][y]] != out[l_class[x]][l_class[y]]:
                    raise InvariantError(
                        f"factor operation ill-defined at ({x}, {y})"
                    )
        return tuple(tuple(row) for row in out)

    left = FiniteAlgebra(
        nl,
        factor_table(alg.mul),
        factor_table(alg.table(Op.LDIV)),
        factor_table(alg.table(Op.RDIV)),
        l_class[alg.point] if alg.point is not None else None,
    )
    right = right_zero(nr)
    if alg.point is not None:
        right = FiniteAlgebra(nr, right.mul, right.ldiv, right.rdiv, r_class[alg.point])

    dec = Decomposition(alg, left, right, tuple(l_class), tuple(r_class))
    _verify(dec)
    return dec


def _verify(dec: Decomposition) -> None:
    alg, n = dec.source, dec.source.size
    images = [dec.witness_index(x) for x in range(n)]
    if sorted(images) != list(range(n)):
        raise InvariantError("witness map is not a bijection")
    product = direct_product(dec.left, dec.right)
    if not is_homomorphism_image(alg, product, images):
        raise InvariantError("witness map is not a homomorphism")
    if not satisfies(dec.left, "Q"):
        raise InvariantError("left factor is not a quasigroup")
    rz = right_zero(dec.right.size)
    if (dec.right.mul, dec.right.ldiv, dec.right.rdiv) != (rz.mul, rz.ldiv, rz.rdiv):
        raise InvariantError("right factor is not a right zero semigroup")


# -- structure reports -------------------------------------------------------


def _maximal_subsets(n, predicate):
    """Inclusion-maximal nonempty subsets of range(n) satisfying a
    monotone-checked predicate (brute force, n <= 8)."""
    good = []
    for mask in range(1, 1 << n):
        subset = [i for i in range(n) if mask >> i & 1]
        if predicate(subset):
            good.append(frozenset(subset))
    return [s for s in good if not any(s < t for t in good)]


def _is_quasigroup_subset(alg, subset):
    if not is_subalgebra(alg, subset):
        return False
    sub, _ = restrict(alg, subset)
    return satisfies(sub, "Q")


def _left_zero_subsemigroup(alg, subset):
    return all(alg.mul[x][y] == x for x in subset for y in subset)


def _right_zero_subsemigroup(alg, subset):
    return all(alg.mul[x][y] == y for x in subset for y in subset)


def _subband(alg, subset):
    s = set(subset)
    if any(alg.mul[x][y] not in s for x in s for y in s):
        return False
    return all(
        alg.mul[alg.mul[x][y]][z] == alg.mul[x][alg.mul[y][z]]
        for x in s
        for y in s
        for z in s
    )


_BRUTE_FORCE_BOUND = 8


def _verified_product_isomorphism(alg, fst, snd, subset_a, subset_b):
    """Check that x -> (fst(x), snd(x)) is an isomorphism onto the product
    of the two closed subsets."""
    if not (is_subalgebra(alg, subset_a) and is_subalgebra(alg, subset_b)):
        return False
    sub_a, order_a = restrict(unpointed(alg), subset_a)
    sub_b, order_b = restrict(unpointed(alg), subset_b)
    if sub_a.size * sub_b.size != alg.size:
        return False
    back_a = {x: i for i, x in enumerate(order_a)}
    back_b = {x: i for i, x in enumerate(order_b)}
    product = direct_product(sub_a, sub_b)
    images = []
    for x in range(alg.size):
        fx, sx = fst(x), snd(x)
        if fx not in back_a or sx not in back_b:
            return False
        images.append(pair_index(back_a[fx], back_b[sx], sub_b.size))
    if sorted(images) != list(range(alg.size)):
        return False
    return is_homomorphism_image(unpointed(alg), product, images)


def loop_structure_report(alg: FiniteAlgebra) -> dict:
    """Idempotent and subloop structure of a decomposable algebra.

    Points are ignored here (see pointed_structure_report); the report is
    a JSON-ready dict.
    """
    plain = unpointed(alg)
    dec = decompose(plain)
    mul = plain.mul
    ldiv, rdiv = plain.table(Op.LDIV), plain.table(Op.RDIV)
    n = plain.size
    ids = sorted(idempotents(plain))
    idset = set(ids)

    report: dict = {
        "size": n,
        "idempotents": ids,
        "idempotents_closed": bool(ids) and is_subalgebra(plain, ids),
        "rdiv_diagonal": sorted({rdiv[a][a] for a in range(n)}),
        "ldiv_diagonal": sorted({ldiv[a][a] for a in range(n)}),
        "left_neutrals": [e for e in range(n) if all(mul[e][x] == x for x in range(n))],
        "right_neutrals": [e for e in range(n) if all(mul[x][e] == x for x in range(n))],
        "factor_sizes": {"quasigroup": dec.left.size, "right_zero": dec.right.size},
    }
    # A closed idempotent set is automatically the largest subalgebra of
    # idempotents, since any such subalgebra sits inside it.
    report["largest_idempotent_subalgebra"] = ids if report["idempotents_closed"] else None

    # Maximal subquasigroups are the fibers of the right-class map.
    fibers = [
        sorted(x for x in range(n) if dec.r_class[x] == r) for r in range(dec.right.size)
    ]
    brute = n <= _BRUTE_FORCE_BOUND
    fiber_reports = []
    for fiber in fibers:
        entry = {
            "elements": fiber,
            "is_subalgebra": is_subalgebra(plain, fiber),
            "is_quasigroup": _is_quasigroup_subset(plain, fiber),
        }
        fiber_reports.append(entry)
    if brute:
        maximal = _maximal_subsets(n, lambda s: _is_quasigroup_subset(plain, s))
        expected = {frozenset(f) for f in fibers}
        for entry in fiber_reports:
            entry["is_maximal"] = frozenset(entry["elements"]) in maximal
        report["maximal_subquasigroups_match_fibers"] = set(maximal) == expected
    report["maximal_subquasigroups"] = fiber_reports

    # For each idempotent e the set S*e lands in e's fiber.
    se_entries = []
    for e in ids:
        se = sorted({mul[x][e] for x in range(n)})
        se_entries.append(
            {
                "e": e,
                "elements": se,
                "equals_right_class_fiber": se == fibers[dec.r_class[e]],
            }
        )
    report["se_sets"] = se_entries

    if brute and ids:
        left_zero_max = _maximal_subsets(n, lambda s: _left_zero_subsemigroup(plain, s))
        report["maximal_left_zero_subsemigroups"] = sorted(sorted(s) for s in left_zero_max)
        report["left_zero_maximal_are_idempotent_singletons"] = left_zero_max == [] or {
            frozenset(s) for s in left_zero_max
        } == {frozenset([e]) for e in ids}
        right_zero_max = _maximal_subsets(n, lambda s: _right_zero_subsemigroup(plain, s))
        report["maximal_right_zero_subsemigroups"] = sorted(sorted(s) for s in right_zero_max)
        # One maximal right zero subsemigroup per idempotent of the
        # quasigroup factor: the left-class fibers over E_left.
        e_left = sorted({dec.l_class[e] for e in ids})
        expected_rz = {
            frozenset(x for x in range(n) if dec.l_class[x] == i) for i in e_left
        }
        report["right_zero_maximal_are_idempotent_fibers"] = {
            frozenset(s) for s in right_zero_max
        } == expected_rz
        if len(e_left) == 1:
            bands = _maximal_subsets(n, lambda s: _subband(plain, s))
            report["largest_subband"] = sorted(sorted(s) for s in bands)
            report["unique_largest_subband_is_idempotents"] = len(bands) == 1 and set(
                bands[0]
            ) == idset

    # Loop-flavored checks keyed on the quasigroup factor's variety.
    factor_labels = classify(dec.left)
    report["factor_is_left_loop"] = VarietyLabel.LEFT_LOOP in factor_labels
    report["factor_is_right_loop"] = VarietyLabel.RIGHT_LOOP in factor_labels
    report["factor_is_loop"] = VarietyLabel.LOOP in factor_labels

    def f_map_checks(fst, snd_kind):
        checks = []
        for e in ids:
            se = {mul[x][e] for x in range(n)}
            snd = {
                "rdiv": lambda x: rdiv[x][x],
                "ldiv": lambda x: ldiv[x][x],
            }[snd_kind]
            checks.append(
                {
                    "e": e,
                    "is_isomorphism": _verified_product_isomorphism(
                        plain, fst(e), snd, se, idset
                    ),
                }
            )
        return checks

    if report["factor_is_left_loop"]:
        report["left_loop_checks"] = {
            "idempotents_equal_rdiv_diagonal": ids == report["rdiv_diagonal"],
            "left_neutrals_equal_idempotents": report["left_neutrals"] == ids,
            "se_equals_rdiv_fiber": all(
                entry["elements"] == sorted(x for x in range(n) if rdiv[x][x] == entry["e"])
                for entry in se_entries
            ),
            # f(x) = ((x*e)/e, x/x)
            "f_isomorphisms": f_map_checks(
                lambda e: (lambda x: rdiv[mul[x][e]][e]), "rdiv"
            ),
        }
    if report["factor_is_right_loop"]:
        report["right_loop_checks"] = {
            "idempotents_equal_ldiv_diagonal": ids == report["ldiv_diagonal"],
            "se_equals_ldiv_fiber": all(
                entry["elements"] == sorted(x for x in range(n) if ldiv[x][x] == entry["e"])
                for entry in se_entries
            ),
            # f(x) = (x*e, x\x)
            "f_isomorphisms": f_map_checks(lambda e: (lambda x: mul[x][e]), "ldiv"),
        }
    if report["factor_is_loop"]:
        report["loop_checks"] = {
            "left_neutrals_equal_idempotents": report["left_neutrals"] == ids,
            "right_neutral_iff_trivial_right_factor": bool(report["right_neutrals"])
            == (dec.right.size == 1),
            "se_equals_double_diagonal_fiber": all(
                entry["elements"]
                == sorted(
                    x
                    for x in range(n)
                    if ldiv[x][x] == entry["e"] and rdiv[x][x] == entry["e"]
                )
                for entry in se_entries
            ),
            # f(x) = (x*e, x/x)
            "f_isomorphisms": f_map_checks(lambda e: (lambda x: mul[x][e]), "rdiv"),
        }
    return report


def pointed_structure_report(alg: FiniteAlgebra) -> dict:
    """Structure report relative to the distinguished point."""
    if alg.point is None:
        raise InvariantError("pointed report needs a distinguished point")
    dec = decompose(alg)
    mul = alg.mul
    ldiv, rdiv = alg.table(Op.LDIV), alg.table(Op.RDIV)
    n = alg.size
    e = alg.point
    ids = sorted(idempotents(alg))
    idset = set(ids)
    plain = unpointed(alg)

    se = sorted({mul[x][e] for x in range(n)})
    report: dict = {
        "size": n,
        "point": e,
        "idempotents": ids,
        "se": se,
        "se_is_point_fiber": se
        == sorted(x for x in range(n) if dec.r_class[x] == dec.r_class[e]),
        "se_meet_idempotents": sorted(set(se) & idset),
    }

    if n <= _BRUTE_FORCE_BOUND:
        # Largest pointed subquasigroup: every subquasigroup containing the
        # point sits inside Se.
        all_pointed = []
        for mask in range(1, 1 << n):
            subset = [i for i in range(n) if mask >> i & 1]
            if e in subset and _is_quasigroup_subset(plain, subset):
                all_pointed.append(frozenset(subset))
        report["se_is_largest_pointed_subquasigroup"] = all(
            s <= frozenset(se) for s in all_pointed
        ) and frozenset(se) in all_pointed

    e_left = sorted({dec.l_class[x] for x in idset})
    point_component_unique_idempotent = e_left == [dec.l_class[e]]
    report["factor_idempotent_is_point_component"] = point_component_unique_idempotent
    if point_component_unique_idempotent:
        # With a unique factor idempotent at the point's component,
        # Se meets the idempotents exactly in the point iff the point is
        # itself idempotent.
        report["se_meet_is_point_iff_point_idempotent"] = (
            report["se_meet_idempotents"] == [e]
        ) == (e in idset)

    if point_component_unique_idempotent:
        # f(x) = ((x*e)/e, (e*x)/x)
        report["f_general_isomorphism"] = _verified_product_isomorphism(
            plain,
            lambda x: rdiv[mul[x][e]][e],
            lambda x: rdiv[mul[e][x]][x],
            set(se),
            idset,
        )

    i = dec.l_class[e]
    left = dec.left
    is_left_neutral = all(left.mul[i][x] == x for x in range(left.size))
    is_right_neutral = all(left.mul[x][i] == x for x in range(left.size))
    report["point_component_left_neutral"] = is_left_neutral
    report["point_component_right_neutral"] = is_right_neutral

    if is_left_neutral:
        report["left_neutral_checks"] = {
            "idempotents_equal_rdiv_diagonal": ids == sorted({rdiv[a][a] for a in range(n)}),
            "left_neutrals_equal_idempotents": ids
            == [a for a in range(n) if all(mul[a][x] == x for x in range(n))],
            "se_equals_rdiv_fiber": se == sorted(x for x in range(n) if rdiv[x][x] == e),
            # f(x) = ((x*e)/e, x/x)
            "f_isomorphism": _verified_product_isomorphism(
                plain, lambda x: rdiv[mul[x][e]][e], lambda x: rdiv[x][x], set(se), idset
            ),
        }
    if is_right_neutral:
        report["right_neutral_checks"] = {
            "idempotents_equal_ldiv_diagonal": ids == sorted({ldiv[a][a] for a in range(n)}),
            "right_neutral_iff_trivial_right_factor": any(
                all(mul[x][a] == x for x in range(n)) for a in range(n)
            )
            == (dec.right.size == 1),
            "se_equals_ldiv_fiber": se == sorted(x for x in range(n) if ldiv[x][x] == e),
            # f(x) = (x*e, x\x)
            "f_isomorphism": _verified_product_isomorphism(
                plain, lambda x: mul[x][e], lambda x: ldiv[x][x], set(se), idset
            ),
        }
    if is_left_neutral and is_right_neutral:
        report["neutral_checks"] = {
            "se_equals_double_diagonal_fiber": se
            == sorted(x for x in range(n) if ldiv[x][x] == e and rdiv[x][x] == e),
            # f(x) = (x*e, x/x)
            "f_isomorphism": _verified_product_isomorphism(
                plain, lambda x: mul[x][e], lambda x: rdiv[x][x], set(se), idset
            ),
        }
    return report
