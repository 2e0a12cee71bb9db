"""Character tables, class functions, fusions, and exact character theory.

All values are exact cyclotomics; orthogonality and integrality checks are
therefore decidable, with no tolerances anywhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .cyclotomic import Cyclotomic, E, _factorize, cyc_sum

Value = Cyclotomic


class MissingPowerMapError(ValueError):
    """A needed prime power map is not stored on the table."""


def _as_value(v) -> Cyclotomic:
    if isinstance(v, Cyclotomic):
        return v
    return Cyclotomic.from_rational(v)


@dataclass(frozen=True)
class ClassInfo:
    name: str
    order: int
    centralizer: int


class CharacterTable:
    """Conjugacy class data plus (possibly partial) irreducible characters."""

    def __init__(
        self,
        group_order: int,
        classes: Sequence[ClassInfo | tuple],
        power_maps: dict[int, Sequence[int]] | None = None,
        irreducibles: Sequence[Sequence] = (),
    ):
        if group_order < 1:
            raise ValueError("group order must be positive")
        self.group_order = group_order
        self.classes = tuple(
            c if isinstance(c, ClassInfo) else ClassInfo(*c) for c in classes
        )
        if not self.classes:
            raise ValueError("a table needs at least one class")
        idents = [i for i, c in enumerate(self.classes) if c.order == 1]
        if len(idents) != 1:
            raise ValueError("exactly one class of order 1 required")
        self.identity_index = idents[0]
        if self.classes[self.identity_index].centralizer != group_order:
            raise ValueError("identity centralizer must equal the group order")
        for c in self.classes:
            if c.centralizer < 1 or group_order % c.centralizer:
                raise ValueError(f"centralizer of {c.name} does not divide {group_order}")
        if sum(group_order // c.centralizer for c in self.classes) != group_order:
            raise ValueError("class sizes do not sum to the group order")
        self.power_maps = {
            int(p): tuple(int(i) for i in row) for p, row in (power_maps or {}).items()
        }
        for p, row in self.power_maps.items():
            if len(row) != len(self.classes):
                raise ValueError(f"power map for p={p} has wrong length")
            for i, j in enumerate(row):
                o = self.classes[i].order
                expect = o // (p if o % p == 0 else 1)
                if self.classes[j].order != expect:
                    raise ValueError(
                        f"power map p={p} sends order {o} to order "
                        f"{self.classes[j].order}, expected {expect}"
                    )
        for p, _ in _factorize(group_order):
            if p not in self.power_maps:
                raise ValueError(f"missing power map for prime {p} dividing the order")
        self.irreducibles = tuple(
            ClassFunction(self, row) if not isinstance(row, ClassFunction) else row
            for row in irreducibles
        )
        self._name_index = {c.name: i for i, c in enumerate(self.classes)}

    # -- basic queries ------------------------------------------------------

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    def class_size(self, i: int) -> int:
        return self.group_order // self.classes[i].centralizer

    def index_of(self, name: str) -> int:
        try:
            return self._name_index[name]
        except KeyError:
            raise KeyError(f"no class named {name!r}") from None

    def names(self) -> list[str]:
        return [c.name for c in self.classes]

    @property
    def is_complete(self) -> bool:
        return len(self.irreducibles) == self.n_classes

    def with_irreducibles(self, rows: Sequence[Sequence]) -> "CharacterTable":
        return CharacterTable(
            self.group_order,
            self.classes,
            self.power_maps,
            [[_as_value(v) for v in row] for row in rows],
        )

    def power_class(self, i: int, k: int) -> int:
        """Index of the class of x**k for x in class i, via prime map chains."""
        m = self.classes[i].order
        k %= m
        if k == 0:
            return self.identity_index
        j = i
        for p, a in _factorize(k):
            row = self.power_maps.get(p)
            if row is None:
                raise MissingPowerMapError(f"no power map for prime {p}")
            for _ in range(a):
                j = row[j]
        return j

    def trivial_character(self) -> "ClassFunction":
        return ClassFunction(self, [1] * self.n_classes)

    def regular_character(self) -> "ClassFunction":
        vals = [0] * self.n_classes
        vals[self.identity_index] = self.group_order
        return ClassFunction(self, vals)

    def __repr__(self):
        return (
            f"CharacterTable(order={self.group_order}, classes={self.n_classes}, "
            f"irreducibles={len(self.irreducibles)})"
        )


class ClassFunction:
    """A vector of cyclotomic values indexed by the classes of one table."""

    __slots__ = ("table", "values")

    def __init__(self, table: CharacterTable, values: Sequence):
        if len(values) != table.n_classes:
            raise ValueError(
                f"expected {table.n_classes} values, got {len(values)}"
            )
        self.table = table
        self.values = tuple(_as_value(v) for v in values)

    @property
    def degree(self) -> Cyclotomic:
        return self.values[self.table.identity_index]

    def is_zero(self) -> bool:
        return all(v.is_zero for v in self.values)

    def _require_same_table(self, other: "ClassFunction") -> None:
        if self.table is not other.table:
            raise ValueError("class functions live on different tables")

    def __add__(self, other):
        self._require_same_table(other)
        return ClassFunction(
            self.table, [a + b for a, b in zip(self.values, other.values)]
        )

    def __sub__(self, other):
        self._require_same_table(other)
        return ClassFunction(
            self.table, [a - b for a, b in zip(self.values, other.values)]
        )

    def __neg__(self):
        return ClassFunction(self.table, [-v for v in self.values])

    def __mul__(self, other):
        if isinstance(other, ClassFunction):
            return tensor(self, other)
        return ClassFunction(self.table, [v * other for v in self.values])

    __rmul__ = __mul__

    def conjugate(self) -> "ClassFunction":
        return ClassFunction(self.table, [v.conjugate() for v in self.values])

    def __eq__(self, other):
        if not isinstance(other, ClassFunction):
            return NotImplemented
        return self.table is other.table and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return f"ClassFunction({', '.join(str(v) for v in self.values)})"


# -- inner products and constructions ------------------------------------------


def inner_product(a: ClassFunction, b: ClassFunction) -> Cyclotomic:
    """<a, b> = (1/|G|) sum over classes of |class| a(c) conj(b(c))."""
    a._require_same_table(b)
    t = a.table
    terms = []
    for i in range(t.n_classes):
        av = a.values[i]
        bv = b.values[i]
        if av.is_zero or bv.is_zero:
            continue
        terms.append(t.class_size(i) * (av * bv.conjugate()))
    return cyc_sum(terms) / t.group_order


def tensor(a: ClassFunction, b: ClassFunction) -> ClassFunction:
    """Pointwise product of class functions."""
    a._require_same_table(b)
    return ClassFunction(a.table, [x * y for x, y in zip(a.values, b.values)])


def symmetrize2(chi: ClassFunction) -> tuple[ClassFunction, ClassFunction]:
    """Symmetric and alternating square, via the squaring power map."""
    t = chi.table
    sym, alt = [], []
    for i in range(t.n_classes):
        sq = chi.values[t.power_class(i, 2)]
        v2 = chi.values[i] * chi.values[i]
        sym.append((v2 + sq) / 2)
        alt.append((v2 - sq) / 2)
    return ClassFunction(t, sym), ClassFunction(t, alt)


class FusionMap:
    """Class fusion from a subgroup table into a big-group table."""

    def __init__(self, h: CharacterTable, g: CharacterTable, images: Sequence[int]):
        if len(images) != h.n_classes:
            raise ValueError("fusion image list has wrong length")
        self.h = h
        self.g = g
        self.images = tuple(int(i) for i in images)
        for d, c in enumerate(self.images):
            if not 0 <= c < g.n_classes:
                raise ValueError(f"image index {c} out of range")
            if h.classes[d].order != g.classes[c].order:
                raise ValueError(
                    f"fusion breaks element orders: {h.classes[d].name} -> "
                    f"{g.classes[c].name}"
                )
            if g.classes[c].centralizer % h.classes[d].centralizer:
                raise ValueError(
                    f"centralizer of {h.classes[d].name} does not divide that of "
                    f"{g.classes[c].name}"
                )
        for p in set(h.power_maps) & set(g.power_maps):
            for d in range(h.n_classes):
                if self.images[h.power_maps[p][d]] != g.power_maps[p][self.images[d]]:
                    raise ValueError(f"fusion does not commute with the {p}-power map")

    def __eq__(self, other):
        return (
            isinstance(other, FusionMap)
            and self.h is other.h
            and self.g is other.g
            and self.images == other.images
        )

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        pairs = ", ".join(
            f"{self.h.classes[d].name}->{self.g.classes[c].name}"
            for d, c in enumerate(self.images)
        )
        return f"FusionMap({pairs})"


def induce(chi: ClassFunction, f: FusionMap) -> ClassFunction:
    """Frobenius induction of chi along the fusion f."""
    if chi.table is not f.h:
        raise ValueError("character does not live on the fusion's subgroup table")
    g = f.g
    vals = [Cyclotomic.from_rational(0)] * g.n_classes
    for d, c in enumerate(f.images):
        vals[c] = vals[c] + chi.values[d] * Fraction(1, f.h.classes[d].centralizer)
    return ClassFunction(
        g, [g.classes[c].centralizer * vals[c] for c in range(g.n_classes)]
    )


def restrict(chi: ClassFunction, f: FusionMap) -> ClassFunction:
    """Restriction of a big-group character along the fusion f."""
    if chi.table is not f.g:
        raise ValueError("character does not live on the fusion's big-group table")
    return ClassFunction(f.h, [chi.values[c] for c in f.images])


def induce_cyclic(t: CharacterTable, class_index: int) -> list[ClassFunction]:
    """Induce all irreducibles of the cyclic group generated by a class rep.

    Needs only the table's power maps: the class of g**j is computed by
    prime-map chains, and the cyclic irreducibles are roots of unity.
    """
    n = t.classes[class_index].order
    img = [t.power_class(class_index, j) for j in range(n)]
    out = []
    for k in range(n):
        roots: list[list[Cyclotomic]] = [[] for _ in range(t.n_classes)]
        for j in range(n):
            roots[img[j]].append(E(n, j * k))
        vals = [
            t.classes[c].centralizer * cyc_sum(roots[c]) * Fraction(1, n)
            for c in range(t.n_classes)
        ]
        out.append(ClassFunction(t, vals))
    return out


# -- verification ------------------------------------------------------------------


@dataclass(frozen=True)
class TableCheck:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class VerificationReport:
    checks: list[TableCheck] = field(default_factory=list)

    @property
    def all_ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[TableCheck]:
        return [c for c in self.checks if not c.ok]

    def __str__(self):
        lines = [
            f"check {c.name} {'pass' if c.ok else 'fail'}"
            + (f" {c.detail}" if c.detail else "")
            for c in self.checks
        ]
        lines.append("ALL CHECKS PASS" if self.all_ok else "CHECKS FAILED")
        return "\n".join(lines)


def verify_table(t: CharacterTable) -> VerificationReport:
    """Run the full self-consistency battery on a claimed-complete table."""
    rep = VerificationReport()
    n = t.n_classes
    irr = t.irreducibles

    rep.checks.append(
        TableCheck(
            "irreducible-count",
            len(irr) == n,
            f"{len(irr)} of {n}",
        )
    )

    bad = []
    total = 0
    for chi in irr:
        d = chi.degree
        if not (d.is_rational and d.as_rational().denominator == 1):
            bad.append("irrational degree")
            continue
        total += d.as_int() ** 2
    ok = not bad and total == t.group_order
    rep.checks.append(
        TableCheck("degree-sum", ok, f"sum of squares {total} vs {t.group_order}")
    )

    bad = []
    for i, a in enumerate(irr):
        for j in range(i, len(irr)):
            got = inner_product(a, irr[j])
            want = 1 if i == j else 0
            if got != want:
                bad.append(f"<{i},{j}>={got}")
    rep.checks.append(TableCheck("row-orthogonality", not bad, "; ".join(bad[:4])))

    bad = []
    if len(irr) == n:
        for i in range(n):
            for j in range(i, n):
                acc = cyc_sum(
                    chi.values[i] * chi.values[j].conjugate() for chi in irr
                )
                want = t.classes[i].centralizer if i == j else 0
                if acc != want:
                    bad.append(f"cols {t.classes[i].name},{t.classes[j].name}: {acc}")
    rep.checks.append(TableCheck("column-orthogonality", not bad, "; ".join(bad[:4])))

    bad = []
    for i, c in enumerate(t.classes):
        for chi in irr:
            if c.order % chi.values[i].conductor:
                bad.append(f"{c.name}: value outside Q(zeta_{c.order})")
    for p, row in t.power_maps.items():
        for i, c in enumerate(t.classes):
            if c.order % p == 0:
                continue
            for chi in irr:
                if chi.values[row[i]] != chi.values[i].galois(p):
                    bad.append(f"{c.name}^{p} value is not the Galois conjugate")
    rep.checks.append(TableCheck("power-map-values", not bad, "; ".join(bad[:4])))

    bad = []
    for chi in irr:
        d = chi.degree
        for i in range(n):
            if not chi.values[i].is_integral:
                bad.append(f"non-integral value {chi.values[i]}")
                continue
            central = t.class_size(i) * chi.values[i] / d.as_rational()
            if not central.is_integral:
                bad.append(f"central character not integral at {t.classes[i].name}")
    rep.checks.append(TableCheck("integrality", not bad, "; ".join(bad[:4])))

    return rep


# -- numeric class-theory helpers ---------------------------------------------------


def structure_constant(t: CharacterTable, i: int, j: int, k: int) -> Fraction:
    """Count of pairs (x, y) in classes i x j with xy a fixed element of class k."""
    if not t.is_complete:
        raise ValueError("structure constants need a complete table")
    acc = Cyclotomic.from_rational(0)
    for chi in t.irreducibles:
        term = chi.values[i] * chi.values[j] * chi.values[k].conjugate()
        acc = acc + term / chi.degree.as_rational()
    total = acc.as_rational() * Fraction(
        t.group_order, t.classes[i].centralizer * t.classes[j].centralizer
    )
    return total


def perm_char_value(cg_centralizer: int, fused_centralizers: Iterable[int]) -> int:
    """Permutation character value from centralizer orders of fused classes."""
    total = 0
    for c in fused_centralizers:
        if cg_centralizer % c:
            raise ValueError(
                f"centralizer {c} does not divide {cg_centralizer}; wrong fusion data"
            )
        total += cg_centralizer // c
    return total


def candidate_perm_chars(
    t: CharacterTable, target_degree: int, rank: int
) -> list[ClassFunction]:
    """Multiplicity-free trivial-plus-(rank-1) sums with the right degree and
    nonnegative values."""
    if not t.is_complete:
        raise ValueError("candidate search needs a complete table")
    trivial = t.trivial_character()
    triv_idx = [i for i, chi in enumerate(t.irreducibles) if chi == trivial]
    if not triv_idx:
        raise ValueError("table has no trivial character")
    others = [
        (i, chi) for i, chi in enumerate(t.irreducibles) if i != triv_idx[0]
    ]
    degrees = [chi.degree.as_int() for _, chi in others]
    found = []
    for combo in itertools.combinations(range(len(others)), rank - 1):
        if sum(degrees[i] for i in combo) != target_degree - 1:
            continue
        cand = trivial
        for i in combo:
            cand = cand + others[i][1]
        ok = True
        for v in cand.values:
            if not v.is_rational or v.as_rational() < 0 or v.as_rational().denominator != 1:
                ok = False
                break
        if ok:
            found.append(cand)
    return found


# -- class assembly -------------------------------------------------------------------


@dataclass(frozen=True)
class ClassSource:
    """Normalizer-overgroup data for one prime-order class.

    ``table`` describes N >= N_G(<g>) for the class of g given by
    ``gen_class``; every N-class powering to g yields a full G-class whose
    G-centralizer equals its N-centralizer.
    """

    prime: int
    table: CharacterTable
    gen_class: int
    predicate: Callable[[CharacterTable, int], bool] | None = None


@dataclass(frozen=True)
class AssembledClass:
    name: str
    order: int
    centralizer: int


@dataclass
class ConsistencyReport:
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def __str__(self):
        if self.ok:
            return "consistent"
        return "\n".join(self.problems)


def _powers_to(table: CharacterTable, idx: int, prime: int, gen_class: int) -> bool:
    o = table.classes[idx].order
    if o % prime:
        return False
    base = o // prime
    return any(
        table.power_class(idx, base * j) == gen_class for j in range(1, prime)
    )


def _source_records(src: ClassSource) -> list[tuple[int, int, tuple]]:
    t = src.table
    records = []
    for i in range(t.n_classes):
        if src.predicate is not None:
            hit = src.predicate(t, i)
        else:
            hit = _powers_to(t, i, src.prime, src.gen_class)
        if not hit:
            continue
        order = t.classes[i].order
        sig = []
        for p, _ in _factorize(order):
            j = t.power_class(i, p)
            if _powers_to(t, j, src.prime, src.gen_class):
                sig.append((p, t.classes[j].order, t.classes[j].centralizer))
            else:
                sig.append((p, t.classes[j].order, 0))
        records.append((order, t.classes[i].centralizer, tuple(sig)))
    return records


def _letters(k: int) -> str:
    out = ""
    k += 1
    while k:
        k, r = divmod(k - 1, 26)
        out = chr(ord("A") + r) + out
    return out


def assemble_classes(
    group_order: int, sources: Sequence[ClassSource]
) -> tuple[list[AssembledClass], ConsistencyReport]:
    """Assemble the class list of G from per-prime normalizer data.

    Classes whose order is divisible by several covered primes appear in
    several sources; their (order, centralizer) data must agree, which is the
    cross-prime consistency check reported alongside the list.
    """
    report = ConsistencyReport()
    by_prime: dict[int, list[tuple[int, int, tuple]]] = {}
    for src in sources:
        by_prime.setdefault(src.prime, []).extend(_source_records(src))

    orders = sorted({order for recs in by_prime.values() for order, _, _ in recs})
    merged: list[tuple[int, int, tuple]] = []
    for m in orders:
        covering = sorted(p for p in by_prime if m % p == 0)
        per_prime = {}
        for p in covering:
            bucket = sorted(
                (cen, sig) for order, cen, sig in by_prime[p] if order == m
            )
            per_prime[p] = bucket
        base = per_prime[covering[0]]
        for p in covering[1:]:
            if [c for c, _ in per_prime[p]] != [c for c, _ in base]:
                report.problems.append(
                    f"order {m}: prime {covering[0]} sources give centralizers "
                    f"{[c for c, _ in base]} but prime {p} gives "
                    f"{[c for c, _ in per_prime[p]]}"
                )
        merged.extend((m, cen, sig) for cen, sig in base)

    classes = [AssembledClass("1A", 1, group_order)]
    for m in orders:
        bucket = sorted(
            ((cen, sig) for order, cen, sig in merged if order == m),
            key=lambda t: (-t[0], t[1]),
        )
        for k, (cen, _sig) in enumerate(bucket):
            classes.append(AssembledClass(f"{m}{_letters(k)}", m, cen))

    total = sum(group_order // c.centralizer for c in classes)
    if total != group_order:
        report.problems.append(
            f"class sizes sum to {total}, expected {group_order}"
        )
    return classes, report


# -- text format -----------------------------------------------------------------------


def _tokenize_value(text: str):
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            yield ("int", int(text[i:j]))
            i = j
        elif ch in "+-*/^()E":
            yield (ch, ch)
            i += 1
        else:
            raise ValueError(f"bad character {ch!r} in value {text!r}")
    yield ("end", None)


class _ValueParser:
    def __init__(self, text: str):
        self.tokens = list(_tokenize_value(text))
        self.pos = 0
        self.text = text

    def peek(self):
        return self.tokens[self.pos][0]

    def take(self, kind=None):
        k, v = self.tokens[self.pos]
        if kind is not None and k != kind:
            raise ValueError(f"expected {kind} in value {self.text!r}")
        self.pos += 1
        return v

    def parse(self) -> Cyclotomic:
        v = self.expr()
        if self.peek() != "end":
            raise ValueError(f"trailing junk in value {self.text!r}")
        return v

    def expr(self):
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.take() == "-" else 1
        acc = self.term() * sign
        while self.peek() in "+-":
            op = self.take()
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.factor()
        while self.peek() in "*/":
            op = self.take()
            rhs = self.factor()
            acc = acc * rhs if op == "*" else acc / rhs
        return acc

    def factor(self):
        if self.peek() == "-":
            self.take()
            return -self.factor()
        if self.peek() == "int":
            base = Cyclotomic.from_rational(self.take())
        elif self.peek() == "E":
            self.take()
            self.take("(")
            n = self.take("int")
            self.take(")")
            if self.peek() == "^":
                self.take()
                neg = False
                if self.peek() == "-":
                    self.take()
                    neg = True
                k = self.take("int")
                return E(n, -k if neg else k)
            return E(n)
        elif self.peek() == "(":
            self.take()
            base = self.expr()
            self.take(")")
        else:
            raise ValueError(f"bad value syntax in {self.text!r}")
        if self.peek() == "^":
            self.take()
            k = self.take("int")
            return base**k
        return base


def parse_value(text: str) -> Cyclotomic:
    """Parse a cyclotomic literal such as ``3``, ``-1/2`` or ``E(5)+E(5)^4``."""
    return _ValueParser(text).parse()


def format_table(t: CharacterTable) -> str:
    lines = [f"order {t.group_order}", "classes"]
    for c in t.classes:
        lines.append(f"{c.name} {c.order} {c.centralizer}")
    for p in sorted(t.power_maps):
        lines.append(f"powermap p={p}")
        lines.append(" ".join(t.classes[j].name for j in t.power_maps[p]))
    if t.irreducibles:
        lines.append("irreducible")
        for chi in t.irreducibles:
            lines.append(" ".join(str(v) for v in chi.values))
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> CharacterTable:
    order = None
    classes: list[ClassInfo] = []
    power_maps: dict[int, list[int]] = {}
    irreducibles: list[list[Cyclotomic]] = []
    mode = None
    map_prime = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split()
        if head[0] == "order":
            order = int(head[1])
            mode = None
        elif head[0] == "classes":
            mode = "classes"
        elif head[0] == "powermap":
            map_prime = int(head[1].split("=", 1)[1])
            mode = "powermap"
        elif head[0] == "irreducible":
            mode = "irreducible"
        elif mode == "classes":
            name, o, cen = head
            classes.append(ClassInfo(name, int(o), int(cen)))
        elif mode == "powermap":
            names = {c.name: i for i, c in enumerate(classes)}
            power_maps[map_prime] = [names[nm] for nm in head]
            mode = None
        elif mode == "irreducible":
            irreducibles.append([parse_value(tok) for tok in head])
        else:
            raise ValueError(f"unexpected line in table: {raw!r}")
    if order is None:
        raise ValueError("table is missing the order section")
    return CharacterTable(order, classes, power_maps, irreducibles)


def load_table(path) -> CharacterTable:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_table(fh.read())


def save_table(path, t: CharacterTable) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_table(t))
