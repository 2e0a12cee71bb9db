"""End-to-end recovery of irreducible characters from class data alone.

The core sequence: induce the irreducibles of all cyclic subgroups, seed the
trivial character, LLL-reduce the lattice they span, extract norm-1 vectors,
then close under symmetrizations and tensor products until the table is
complete.  The trivial seed matters: for a group like A5 every cyclic
induction has even degree, so without it no odd-degree irreducible lies in
the lattice at all.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .chartab import (
    CharacterTable,
    ClassFunction,
    induce_cyclic,
    symmetrize2,
    tensor,
)
from .lattice import (
    DEFAULT_DELTA,
    extract_irreducibles,
    lll_chars,
    reduce_against,
)
from .oracle import ClassData, PermGroup, classes_of


class IncompleteCharacterSearch(RuntimeError):
    """The closure loop stalled before the table was complete."""


def cyclic_inductions(t: CharacterTable) -> list[ClassFunction]:
    """Induced irreducibles from one representative of each cyclic subgroup."""
    seen_subgroups = set()
    chars: list[ClassFunction] = []
    for ci in range(t.n_classes):
        d = t.classes[ci].order
        sig = frozenset(
            t.power_class(ci, j) for j in range(1, d + 1) if math.gcd(j, d) == 1
        )
        if sig in seen_subgroups:
            continue
        seen_subgroups.add(sig)
        chars.extend(induce_cyclic(t, ci))
    out = []
    seen_vals = set()
    for c in chars:
        if c.values not in seen_vals:
            seen_vals.add(c.values)
            out.append(c)
    return out


def starting_characters(t: CharacterTable) -> list[ClassFunction]:
    """Cyclic inductions plus the trivial character."""
    return cyclic_inductions(t) + [t.trivial_character()]


def symmetrize3(chi: ClassFunction) -> tuple[ClassFunction, ClassFunction]:
    """Third symmetric and exterior power, via the power maps.

    Extends to virtual characters exactly (the Newton expressions agree with
    the lambda-ring operations there).
    """
    t = chi.table
    sym, alt = [], []
    for i in range(t.n_classes):
        v1 = chi.values[i]
        v2 = chi.values[t.power_class(i, 2)]
        v3 = chi.values[t.power_class(i, 3)]
        cube = v1 * v1 * v1
        sym.append((cube + 3 * (v1 * v2) + 2 * v3) / 6)
        alt.append((cube - 3 * (v1 * v2) + 2 * v3) / 6)
    return ClassFunction(t, sym), ClassFunction(t, alt)


def natural_character(data: ClassData) -> ClassFunction:
    """Fixed-point counts of the defining permutation action."""
    t = data.table
    vals = [
        sum(1 for x in range(rep.degree) if rep(x) == x) for rep in data.reps
    ]
    return ClassFunction(t, vals)


def find_irreducibles(
    table: CharacterTable,
    chars: Sequence[ClassFunction],
    delta: Fraction = DEFAULT_DELTA,
    max_rounds: int = 40,
) -> list[ClassFunction]:
    """Extract a complete irreducible set from a spanning set of virtual chars.

    Raises IncompleteCharacterSearch if the symmetrize/tensor closure
    reaches a fixpoint first; the caller can then enrich the starting set.
    """
    known: list[ClassFunction] = []
    known_vals: set = set()
    pool: list[ClassFunction] = list(chars)
    tried: set = {c.values for c in pool}
    for _ in range(max_rounds):
        if len(known) == table.n_classes:
            break
        reduced = [c for c in reduce_against(pool, known) if not c.is_zero()]
        progress = False
        if reduced:
            lat = lll_chars(reduced, delta)
            for v in extract_irreducibles(lat):
                if v.values not in known_vals:
                    known_vals.add(v.values)
                    known.append(v)
                    progress = True
            pool = list(lat.basis)
        if len(known) == table.n_classes:
            break
        if not progress:
            fresh = []
            for chi in known:
                fresh.extend(symmetrize2(chi))
                fresh.extend(symmetrize3(chi))
            for i in range(len(known)):
                for j in range(i, len(known)):
                    fresh.append(tensor(known[i], known[j]))
            added = False
            for c in fresh:
                if not c.is_zero() and c.values not in tried:
                    tried.add(c.values)
                    pool.append(c)
                    added = True
            if not added:
                raise IncompleteCharacterSearch(
                    f"found {len(known)} of {table.n_classes} irreducibles"
                )
    if len(known) != table.n_classes:
        raise IncompleteCharacterSearch(
            f"found {len(known)} of {table.n_classes} irreducibles"
        )
    known.sort(key=_char_key)
    return known


def _char_key(chi: ClassFunction) -> tuple:
    return (chi.degree.as_rational(), tuple(str(v) for v in chi.values))


def character_table_of(
    group: PermGroup | ClassData, delta: Fraction = DEFAULT_DELTA
) -> CharacterTable:
    """Class data by brute force, irreducibles by the induction/LLL pipeline.

    Seeds the defining permutation character alongside the cyclic
    inductions; for a few groups (S6 is the smallest) the cyclic-induction
    lattice has index > 1 in the full character lattice and the closure
    alone cannot finish.
    """
    data = group if isinstance(group, ClassData) else classes_of(group)
    t = data.table
    chars = starting_characters(t) + [natural_character(data)]
    irr = find_irreducibles(t, chars, delta)
    return t.with_irreducibles([chi.values for chi in irr])
