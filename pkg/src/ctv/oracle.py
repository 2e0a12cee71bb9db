"""Brute-force ground truth for small permutation groups.

Everything here is deliberately naive: closure enumeration, explicit
conjugacy testing, and coset counting.  It supplies the independent values
that the character-theoretic machinery is checked against.
"""

from __future__ import annotations

import math
from functools import cached_property
from typing import Iterable, Sequence

from .chartab import CharacterTable, ClassFunction, ClassInfo, FusionMap
from .cyclotomic import _factorize
from .ffmat import FFMatrix, OrderCapExceeded

DEFAULT_ENUM_CAP = 200_000


class GroupTooLargeError(RuntimeError):
    """Raised when closure enumeration exceeds its cap."""


class Perm:
    """A permutation of {0..degree-1}, composed right to left."""

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        imgs = tuple(int(i) for i in images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError(f"not a permutation: {imgs}")
        self.images = imgs

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Sequence[int]]) -> "Perm":
        """Build from 1-based disjoint cycles, e.g. [(1, 2, 3)]."""
        imgs = list(range(degree))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + type(cyc)((cyc[0],))):
                imgs[a - 1] = b - 1
        return cls(imgs)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Perm") -> "Perm":
        if not isinstance(other, Perm):
            return NotImplemented
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        # (a*b)(x) = a(b(x)), matching matrix products of permutation matrices
        return Perm(tuple(self.images[other.images[x]] for x in range(self.degree)))

    def inverse(self) -> "Perm":
        out = [0] * self.degree
        for x, y in enumerate(self.images):
            out[y] = x
        return Perm(out)

    def __pow__(self, k: int) -> "Perm":
        if k < 0:
            return self.inverse() ** (-k)
        out = Perm.identity(self.degree)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def conjugate_by(self, g: "Perm") -> "Perm":
        return g.inverse() * self * g

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, 1-based."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start] or self.images[start] == start:
                seen[start] = True
                continue
            cyc = [start]
            seen[start] = True
            x = self.images[start]
            while x != start:
                cyc.append(x)
                seen[x] = True
                x = self.images[x]
            out.append(tuple(v + 1 for v in cyc))
        return out

    def order(self, cap: int | None = None) -> int:
        o = 1
        for cyc in self.cycles():
            o = math.lcm(o, len(cyc))
        if cap is not None and o > cap:
            raise OrderCapExceeded(cap)
        return o

    def matrix(self, p: int) -> FFMatrix:
        """The permutation matrix over GF(p); a group homomorphism."""
        return FFMatrix.from_permutation(p, self.images)

    def is_identity(self) -> bool:
        return all(i == x for x, i in enumerate(self.images))

    def __eq__(self, other):
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __lt__(self, other: "Perm"):
        return self.images < other.images

    def __repr__(self):
        cyc = self.cycles()
        if not cyc:
            return "Perm(id)"
        return "Perm(" + "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) + ")"


class PermGroup:
    """An explicitly enumerated permutation group."""

    def __init__(self, degree: int, generators: Sequence[Perm], elements: Sequence[Perm]):
        self.degree = degree
        self.generators = tuple(generators)
        self.elements = tuple(elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def element_set(self) -> frozenset[Perm]:
        return frozenset(self.elements)

    def __contains__(self, g: Perm) -> bool:
        return g in self.element_set

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and self.element_set <= other.element_set

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order})"


def enumerate_group(
    gens: Sequence[Perm], cap: int = DEFAULT_ENUM_CAP, degree: int | None = None
) -> PermGroup:
    """Close the generators under products; deterministic BFS order."""
    if gens:
        degree = gens[0].degree
        if any(g.degree != degree for g in gens):
            raise ValueError("generators act on different degrees")
    elif degree is None:
        degree = 1
    ident = Perm.identity(degree)
    seen = {ident}
    ordered = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = a * g
                if b not in seen:
                    if len(seen) >= cap:
                        raise GroupTooLargeError(f"enumeration cap {cap} exceeded")
                    seen.add(b)
                    ordered.append(b)
                    nxt.append(b)
        frontier = nxt
    return PermGroup(degree, gens, ordered)


class ClassData:
    """Conjugacy classes, centralizer orders, and power maps of a PermGroup."""

    def __init__(self, group: PermGroup):
        self.group = group
        classes: list[list[Perm]] = []
        assigned: dict[Perm, int] = {}
        for e in group.elements:
            if e in assigned:
                continue
            idx = len(classes)
            orbit = [e]
            assigned[e] = idx
            queue = [e]
            while queue:
                x = queue.pop()
                for g in group.generators:
                    y = x.conjugate_by(g)
                    if y not in assigned:
                        assigned[y] = idx
                        orbit.append(y)
                        queue.append(y)
            classes.append(orbit)
        keyed = sorted(
            range(len(classes)),
            key=lambda i: (
                classes[i][0].order(),
                len(classes[i]),
                min(classes[i]).images,
            ),
        )
        self.class_elements = [sorted(classes[i]) for i in keyed]
        renumber = {old: new for new, old in enumerate(keyed)}
        self.class_of = {e: renumber[i] for e, i in assigned.items()}
        self.reps = [els[0] for els in self.class_elements]
        self.sizes = [len(els) for els in self.class_elements]
        self.orders = [rep.order() for rep in self.reps]
        for size in self.sizes:
            if group.order % size:
                raise AssertionError("class size does not divide the group order")
        self.centralizers = [group.order // size for size in self.sizes]
        counts: dict[int, int] = {}
        names = []
        for o in self.orders:
            counts[o] = counts.get(o, 0) + 1
            suffix = ""
            k = counts[o]
            while k:
                k, r = divmod(k - 1, 26)
                suffix = chr(ord("A") + r) + suffix
            names.append(f"{o}{suffix}")
        self.names = names
        top = max(self.orders)
        self.power_maps = {
            p: tuple(self.class_of[rep**p] for rep in self.reps)
            for p in _primes_upto(top)
        }

    @property
    def n_classes(self) -> int:
        return len(self.reps)

    def index_of(self, g: Perm) -> int:
        return self.class_of[g]

    @cached_property
    def table(self) -> CharacterTable:
        """The class-data part of the character table (no irreducibles)."""
        return CharacterTable(
            self.group.order,
            [
                ClassInfo(self.names[i], self.orders[i], self.centralizers[i])
                for i in range(self.n_classes)
            ],
            self.power_maps,
        )


def _primes_upto(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if all(p % d for d in range(2, p))]


def classes_of(g: PermGroup) -> ClassData:
    return ClassData(g)


def oracle_fusion(hdata: ClassData, gdata: ClassData) -> FusionMap:
    """Class fusion computed by explicit membership of representatives."""
    if not hdata.group.is_subgroup_of(gdata.group):
        raise ValueError("first group is not contained in the second")
    images = [gdata.index_of(rep) for rep in hdata.reps]
    return FusionMap(hdata.table, gdata.table, images)


def coset_reps(g: PermGroup, h: PermGroup) -> list[Perm]:
    if not h.is_subgroup_of(g):
        raise ValueError("not a subgroup")
    covered: set[Perm] = set()
    reps = []
    for x in g.elements:
        if x in covered:
            continue
        reps.append(x)
        covered.update(x * u for u in h.elements)
    return reps


def coset_perm_char(gdata: ClassData, h: PermGroup) -> ClassFunction:
    """Fixed-coset counts of G acting on the cosets of H, per class."""
    g = gdata.group
    reps = coset_reps(g, h)
    hset = h.element_set
    vals = []
    for z in gdata.reps:
        vals.append(sum(1 for x in reps if x.inverse() * z * x in hset))
    return ClassFunction(gdata.table, vals)


def brute_structure_constant(gdata: ClassData, i: int, j: int, k: int) -> int:
    """Count pairs (x, y) in classes i x j with x*y equal to a fixed z in class k."""
    z = gdata.reps[k]
    return sum(
        1 for x in gdata.class_elements[i] if gdata.class_of[x.inverse() * z] == j
    )


# -- standard small groups -----------------------------------------------------------


def cyclic(n: int) -> PermGroup:
    if n == 1:
        return enumerate_group([], degree=1)
    return enumerate_group([Perm([(i + 1) % n for i in range(n)])])


def dihedral(n: int) -> PermGroup:
    """Dihedral group of order 2n acting on n points (n >= 3)."""
    if n < 3:
        raise ValueError("dihedral needs n >= 3")
    rot = Perm([(i + 1) % n for i in range(n)])
    flip = Perm([(n - i) % n for i in range(n)])
    return enumerate_group([rot, flip])


def symmetric(n: int) -> PermGroup:
    if n < 2:
        return enumerate_group([], degree=max(n, 1))
    gens = [Perm.from_cycles(n, [(1, 2)])]
    if n > 2:
        gens.append(Perm([(i + 1) % n for i in range(n)]))
    return enumerate_group(gens)


def alternating(n: int) -> PermGroup:
    if n < 3:
        return enumerate_group([], degree=max(n, 1))
    gens = [Perm.from_cycles(n, [(1, 2, 3)])]
    if n > 3:
        if n % 2:
            gens.append(Perm([(i + 1) % n for i in range(n)]))
        else:
            gens.append(Perm([0] + [1 + (i % (n - 1)) for i in range(1, n)]))
    return enumerate_group(gens)


def quaternion8() -> PermGroup:
    """Q8 in its regular action on (1, -1, i, -i, j, -j, k, -k)."""
    left_i = Perm([2, 3, 1, 0, 6, 7, 5, 4])
    left_j = Perm([4, 5, 7, 6, 1, 0, 2, 3])
    return enumerate_group([left_i, left_j])


def simple168() -> PermGroup:
    """The simple group of order 168 on the 7 nonzero vectors of GF(2)^3."""
    a = Perm([4, 0, 3, 1, 6, 2, 5])
    b = Perm([0, 5, 6, 3, 4, 1, 2])
    g = enumerate_group([a, b])
    if g.order != 168:
        raise AssertionError("simple168 generators are wrong")
    return g


def frobenius20() -> PermGroup:
    return enumerate_group([Perm([1, 2, 3, 4, 0]), Perm([0, 2, 4, 1, 3])])


def frobenius21() -> PermGroup:
    return enumerate_group(
        [Perm([1, 2, 3, 4, 5, 6, 0]), Perm([0, 2, 4, 6, 1, 3, 5])]
    )


# -- permutation file format ------------------------------------------------------------


def format_permutations(perms: Sequence[Perm]) -> str:
    if not perms:
        raise ValueError("nothing to write")
    degree = perms[0].degree
    lines = [f"permutation degree={degree}"]
    for p in perms:
        lines.append(" ".join(str(i + 1) for i in p.images))
    return "\n".join(lines) + "\n"


def parse_permutations(text: str) -> list[Perm]:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("permutation"):
        raise ValueError("missing permutation header")
    head = dict(part.split("=", 1) for part in lines[0].split()[1:])
    degree = int(head["degree"])
    perms = []
    for ln in lines[1:]:
        images = [int(tok) - 1 for tok in ln.split()]
        if len(images) != degree:
            raise ValueError(f"expected {degree} images, got {len(images)}")
        perms.append(Perm(images))
    return perms


def load_group(path, cap: int = DEFAULT_ENUM_CAP) -> PermGroup:
    with open(path, "r", encoding="utf-8") as fh:
        perms = parse_permutations(fh.read())
    return enumerate_group(perms, cap=cap)


def save_permutations(path, perms: Sequence[Perm]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_permutations(perms))
