"""Integer lattices of virtual characters and exact LLL reduction.

The inner product is the character inner product, so Gram matrices are
integer matrices and norm-1 vectors are (up to sign) irreducible characters.
All arithmetic is integer/Fraction exact; there is no floating point here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .chartab import CharacterTable, ClassFunction, inner_product

DEFAULT_DELTA = Fraction(3, 4)


@dataclass(frozen=True)
class CharLattice:
    basis: tuple[ClassFunction, ...]
    gram: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)


def _integral_inner(a: ClassFunction, b: ClassFunction) -> int:
    v = inner_product(a, b)
    if not v.is_rational:
        raise ValueError(f"inner product {v} is not rational")
    q = v.as_rational()
    if q.denominator != 1:
        raise ValueError(f"inner product {q} is not an integer; not a virtual character")
    return q.numerator


def build_lattice(chars: Sequence[ClassFunction]) -> CharLattice:
    """Wrap virtual characters with their exact integer Gram matrix."""
    chars = [c for c in chars]
    if not chars:
        return CharLattice((), ())
    table = chars[0].table
    for c in chars:
        if c.table is not table:
            raise ValueError("characters live on different tables")
    n = len(chars)
    gram = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1):
            gram[i][j] = gram[j][i] = _integral_inner(chars[i], chars[j])
    return CharLattice(tuple(chars), tuple(tuple(r) for r in gram))


# -- integer span reduction -------------------------------------------------------


def _flatten(chars: Sequence[ClassFunction]) -> list[list[int]]:
    """Embed class functions as integer vectors (faithful for the Z-span)."""
    table = chars[0].table
    n_classes = table.n_classes
    conductors = [1] * n_classes
    for c in chars:
        for i, v in enumerate(c.values):
            conductors[i] = math.lcm(conductors[i], v.conductor)
    rows = []
    for c in chars:
        row: list[Fraction] = []
        for i, v in enumerate(c.values):
            coords = v.coords(conductors[i])
            row.extend(coords.get(e, Fraction(0)) for e in range(conductors[i]))
        rows.append(row)
    denom = 1
    for row in rows:
        for v in row:
            denom = math.lcm(denom, v.denominator)
    return [[int(v * denom) for v in row] for row in rows]


def _span_basis(chars: Sequence[ClassFunction]) -> list[ClassFunction]:
    """An independent generating set of the same Z-span, via Hermite reduction."""
    flat = _flatten(chars)
    m = len(flat)
    width = len(flat[0])
    # augment with identity to track the combinations
    rows = [flat[i] + [int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for col in range(width):
        while True:
            nz = [i for i in range(r, m) if rows[i][col]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(rows[i][col]))
            rows[r], rows[piv] = rows[piv], rows[r]
            clean = True
            for i in range(r + 1, m):
                if rows[i][col]:
                    q = rows[i][col] // rows[r][col]
                    if q:
                        rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
                    if rows[i][col]:
                        clean = False
            if clean:
                r += 1
                break
        if r == m:
            break
    out = []
    for i in range(r):
        combo = rows[i][width:]
        acc = None
        for j, q in enumerate(combo):
            if q:
                term = q * chars[j]
                acc = term if acc is None else acc + term
        if acc is not None and not acc.is_zero():
            out.append(acc)
    return out


# -- LLL proper ---------------------------------------------------------------------


def _round_nearest(q: Fraction) -> int:
    return round(q)


def _lll_raw(vecs: list[ClassFunction], gram: list[list[int]], delta: Fraction):
    n = len(vecs)
    if n < 2:
        return vecs, gram
    mu = [[Fraction(0)] * n for _ in range(n)]
    B = [Fraction(0)] * n
    B[0] = Fraction(gram[0][0])

    def row_op(kk: int, ll: int, q: int) -> None:
        # b_kk := b_kk - q * b_ll
        vecs[kk] = vecs[kk] - q * vecs[ll]
        gkl = gram[kk][ll]
        gll = gram[ll][ll]
        for i in range(n):
            if i != kk:
                gram[kk][i] -= q * gram[ll][i]
                gram[i][kk] = gram[kk][i]
        gram[kk][kk] += -2 * q * gkl + q * q * gll

    def red(kk: int, ll: int) -> None:
        if 2 * abs(mu[kk][ll]) <= 1:
            return
        q = _round_nearest(mu[kk][ll])
        row_op(kk, ll, q)
        mu[kk][ll] -= q
        for i in range(ll):
            mu[kk][i] -= q * mu[ll][i]

    def swap_rows(kk: int) -> None:
        vecs[kk], vecs[kk - 1] = vecs[kk - 1], vecs[kk]
        gram[kk], gram[kk - 1] = gram[kk - 1], gram[kk]
        for row in gram:
            row[kk], row[kk - 1] = row[kk - 1], row[kk]

    kmax = 0
    k = 1
    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k):
                mu[k][j] = (
                    Fraction(gram[k][j])
                    - sum(mu[k][i] * mu[j][i] * B[i] for i in range(j))
                ) / B[j]
            B[k] = Fraction(gram[k][k]) - sum(
                mu[k][j] ** 2 * B[j] for j in range(k)
            )
        while True:
            red(k, k - 1)
            if B[k] < (delta - mu[k][k - 1] ** 2) * B[k - 1]:
                m = mu[k][k - 1]
                bnew = B[k] + m * m * B[k - 1]
                mu[k][k - 1] = m * B[k - 1] / bnew
                B[k] = B[k - 1] * B[k] / bnew
                B[k - 1] = bnew
                swap_rows(k)
                for j in range(k - 1):
                    mu[k][j], mu[k - 1][j] = mu[k - 1][j], mu[k][j]
                for i in range(k + 1, kmax + 1):
                    t = mu[i][k]
                    mu[i][k] = mu[i][k - 1] - m * t
                    mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k]
                k = max(k - 1, 1)
            else:
                for l in range(k - 2, -1, -1):
                    red(k, l)
                k += 1
                break
    return vecs, gram


def lll_chars(
    chars: Sequence[ClassFunction], delta: Fraction = DEFAULT_DELTA
) -> CharLattice:
    """LLL directly from a (possibly dependent) list of virtual characters."""
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta < 1:
        raise ValueError("delta must lie strictly between 1/4 and 1")
    if not chars:
        return CharLattice((), ())
    vecs = _span_basis(chars)
    if not vecs:
        return CharLattice((), ())
    reduced = build_lattice(vecs)
    vecs, gram = _lll_raw(list(reduced.basis), [list(r) for r in reduced.gram], delta)
    return CharLattice(tuple(vecs), tuple(tuple(r) for r in gram))


def lll_reduce(lat: CharLattice, delta: Fraction = DEFAULT_DELTA) -> CharLattice:
    """LLL-reduce the lattice; dependent generators and zero vectors drop out."""
    return lll_chars(lat.basis, delta)


def extract_irreducibles(lat: CharLattice) -> list[ClassFunction]:
    """Norm-1 basis vectors, sign-normalized to positive degree, deduplicated."""
    out: list[ClassFunction] = []
    seen = set()
    for i, v in enumerate(lat.basis):
        if lat.gram[i][i] != 1:
            continue
        deg = v.degree
        if not deg.is_rational or deg.as_rational() == 0:
            raise ValueError("norm-1 vector with degree zero cannot occur")
        if deg.as_rational() < 0:
            v = -v
        if v.values not in seen:
            seen.add(v.values)
            out.append(v)
    return out


def reduce_against(
    cands: Sequence[ClassFunction], known: Sequence[ClassFunction]
) -> list[ClassFunction]:
    """Project each candidate onto the orthogonal complement of the known set."""
    for i, a in enumerate(known):
        for j in range(i, len(known)):
            want = 1 if i == j else 0
            if inner_product(a, known[j]) != want:
                raise ValueError("known characters are not pairwise orthonormal")
    out = []
    for cand in cands:
        acc = cand
        for chi in known:
            c = inner_product(cand, chi)
            if not c.is_rational or c.as_rational().denominator != 1:
                raise ValueError(f"non-integral projection coefficient {c}")
            k = c.as_rational().numerator
            if k:
                acc = acc - k * chi
        out.append(acc)
    return out
