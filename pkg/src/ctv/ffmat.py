"""Dense exact linear algebra over small prime fields GF(p).

GF(2) matrices are bit-packed, 64 columns per little-endian word, and
multiplied with an 8-bit table-lookup kernel so that 4370-dimensional work
runs in seconds.  Other primes (p < 256) are stored one byte per entry and
multiplied through float64 BLAS, which is exact because every dot product
stays far below 2**53.  Matrices are immutable; all operations are pure.
"""

from __future__ import annotations

import io
from typing import Iterable, Sequence

import numpy as np

DEFAULT_ORDER_CAP = 10000

FF2M_MAGIC = b"FF2M"


class SingularMatrixError(ValueError):
    """Raised when an inverse of a singular matrix is requested."""


class OrderCapExceeded(RuntimeError):
    """Raised when an element order search passes its cap."""

    def __init__(self, cap: int):
        super().__init__(f"element order exceeds cap {cap}")
        self.cap = cap


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _check_prime(p: int) -> None:
    if not _is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    if p >= 256:
        raise ValueError(f"modulus {p} too large (p < 256 supported)")


def _pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a (rows, cols) 0/1 array into (rows, ceil(cols/64)) words."""
    rows, cols = bits.shape
    nbytes = -(-cols // 8)
    words = -(-cols // 64)
    by = np.packbits(bits, axis=1, bitorder="little")
    buf = np.zeros((rows, words * 8), dtype=np.uint8)
    buf[:, :nbytes] = by
    return buf.view("<u8")


def _unpack_bits(packed: np.ndarray, cols: int) -> np.ndarray:
    rows = packed.shape[0]
    by = np.ascontiguousarray(packed).view(np.uint8).reshape(rows, -1)
    bits = np.unpackbits(by, axis=1, bitorder="little")
    return bits[:, :cols]


class FFMatrix:
    """Immutable dense matrix over GF(p)."""

    __slots__ = ("p", "rows", "cols", "_w")

    def __init__(self, p: int, rows: int, cols: int, _data: np.ndarray):
        self.p = p
        self.rows = rows
        self.cols = cols
        _data.flags.writeable = False
        self._w = _data

    # -- construction -----------------------------------------------------

    @classmethod
    def from_rows(cls, p: int, rows: Iterable[Iterable[int]]) -> "FFMatrix":
        _check_prime(p)
        arr = np.array([[int(e) % p for e in row] for row in rows], dtype=np.uint8)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("matrix needs at least one row and one column")
        m, n = arr.shape
        if p == 2:
            return cls(2, m, n, _pack_bits(arr))
        return cls(p, m, n, arr)

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "FFMatrix":
        _check_prime(p)
        if rows < 1 or cols < 1:
            raise ValueError("dimensions must be positive")
        if p == 2:
            return cls(2, rows, cols, np.zeros((rows, -(-cols // 64)), dtype="<u8"))
        return cls(p, rows, cols, np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def identity(cls, p: int, n: int) -> "FFMatrix":
        _check_prime(p)
        if n < 1:
            raise ValueError("dimension must be positive")
        if p == 2:
            w = np.zeros((n, -(-n // 64)), dtype="<u8")
            idx = np.arange(n)
            w[idx, idx // 64] = np.uint64(1) << (idx % 64).astype(np.uint64)
            return cls(2, n, n, w)
        return cls(p, n, n, np.eye(n, dtype=np.uint8))

    @classmethod
    def from_permutation(cls, p: int, images: Sequence[int]) -> "FFMatrix":
        """Permutation matrix M with M[images[j], j] = 1 (0-based images)."""
        n = len(images)
        if sorted(images) != list(range(n)):
            raise ValueError("images are not a permutation of 0..n-1")
        bits = np.zeros((n, n), dtype=np.uint8)
        for j, i in enumerate(images):
            bits[i, j] = 1
        return cls.from_rows(p, bits)

    @classmethod
    def random(cls, p: int, rows: int, cols: int, rng=None) -> "FFMatrix":
        rng = np.random.default_rng(rng)
        return cls.from_rows(p, rng.integers(0, p, size=(rows, cols)))

    @classmethod
    def random_invertible(cls, p: int, n: int, rng=None) -> "FFMatrix":
        rng = np.random.default_rng(rng)
        while True:
            m = cls.random(p, n, n, rng)
            if mat_rank(m) == n:
                return m

    # -- raw access --------------------------------------------------------

    def to_rows(self) -> list[list[int]]:
        if self.p == 2:
            return _unpack_bits(self._w, self.cols).astype(int).tolist()
        return self._w.astype(int).tolist()

    def entry(self, i: int, j: int) -> int:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError((i, j))
        if self.p == 2:
            return int((self._w[i, j // 64] >> np.uint64(j % 64)) & np.uint64(1))
        return int(self._w[i, j])

    def __getitem__(self, key):
        return self.entry(*key)

    # -- structure ----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, FFMatrix):
            return NotImplemented
        return (
            self.p == other.p
            and self.rows == other.rows
            and self.cols == other.cols
            and np.array_equal(self._w, other._w)
        )

    def __hash__(self):
        return hash((self.p, self.rows, self.cols, self._w.tobytes()))

    def __repr__(self):
        return f"FFMatrix(p={self.p}, {self.rows}x{self.cols})"

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == FFMatrix.identity(self.p, self.rows)

    def is_zero(self) -> bool:
        return not self._w.any()

    def _require_same_field(self, other: "FFMatrix") -> None:
        if not isinstance(other, FFMatrix):
            raise TypeError(f"expected FFMatrix, got {type(other).__name__}")
        if self.p != other.p:
            raise ValueError(f"modulus mismatch: GF({self.p}) vs GF({other.p})")

    # -- arithmetic ----------------------------------------------------------

    def __matmul__(self, other):
        return mat_mul(self, other)

    def __mul__(self, other):
        if isinstance(other, FFMatrix):
            return mat_mul(self, other)
        return NotImplemented

    def __add__(self, other):
        self._require_same_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch in addition")
        if self.p == 2:
            return FFMatrix(2, self.rows, self.cols, self._w ^ other._w)
        return FFMatrix(
            self.p,
            self.rows,
            self.cols,
            ((self._w.astype(np.int16) + other._w) % self.p).astype(np.uint8),
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        if self.p == 2:
            return self
        return FFMatrix(
            self.p, self.rows, self.cols, ((-self._w.astype(np.int16)) % self.p).astype(np.uint8)
        )

    def scale(self, c: int) -> "FFMatrix":
        c %= self.p
        if self.p == 2:
            return self if c else FFMatrix.zeros(2, self.rows, self.cols)
        return FFMatrix(
            self.p, self.rows, self.cols, ((self._w.astype(np.int64) * c) % self.p).astype(np.uint8)
        )

    def __pow__(self, k: int):
        return mat_pow(self, k)

    def inverse(self) -> "FFMatrix":
        return mat_inverse(self)

    def trace(self) -> int:
        return mat_trace(self)

    def rank(self) -> int:
        return mat_rank(self)

    def order(self, cap: int = DEFAULT_ORDER_CAP) -> int:
        return element_order(self, cap)


# -- kernels ------------------------------------------------------------------


def _mul_gf2(a: FFMatrix, b: FFMatrix) -> FFMatrix:
    m = a.rows
    wb = b._w.shape[1]
    abytes = np.ascontiguousarray(a._w).view(np.uint8).reshape(m, -1)
    out = np.zeros((m, wb), dtype="<u8")
    table = np.empty((256, wb), dtype="<u8")
    for c in range(-(-a.cols // 8)):
        rows = b._w[8 * c: 8 * c + 8]
        table[0] = 0
        t = 1
        for r in rows:
            table[t: 2 * t] = table[:t] ^ r
            t *= 2
        # when the last chunk is short, the high index bits are zero padding
        out ^= table[abytes[:, c]]
    return FFMatrix(2, m, b.cols, out)


def _mul_odd(a: FFMatrix, b: FFMatrix) -> FFMatrix:
    prod = a._w.astype(np.float64) @ b._w.astype(np.float64)
    return FFMatrix(a.p, a.rows, b.cols, np.remainder(prod, a.p).astype(np.uint8))


def mat_mul(a: FFMatrix, b: FFMatrix) -> FFMatrix:
    """Exact product over GF(p)."""
    a._require_same_field(b)
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: {a.rows}x{a.cols} @ {b.rows}x{b.cols}")
    return _mul_gf2(a, b) if a.p == 2 else _mul_odd(a, b)


def _rank_gf2(a: FFMatrix) -> int:
    work = a._w.copy()
    m = work.shape[0]
    rank = 0
    for col in range(a.cols):
        w, bit = divmod(col, 64)
        mask = np.uint64(1) << np.uint64(bit)
        hit = np.nonzero(work[rank:, w] & mask)[0]
        if hit.size == 0:
            continue
        piv = rank + hit[0]
        if piv != rank:
            work[[rank, piv]] = work[[piv, rank]]
        below = np.nonzero(work[rank + 1:, w] & mask)[0]
        if below.size:
            work[rank + 1 + below] ^= work[rank]
        rank += 1
        if rank == m:
            break
    return rank


def _rank_odd(a: FFMatrix) -> int:
    p = a.p
    work = a._w.astype(np.int64)
    m = work.shape[0]
    rank = 0
    for col in range(a.cols):
        hit = np.nonzero(work[rank:, col])[0]
        if hit.size == 0:
            continue
        piv = rank + hit[0]
        if piv != rank:
            work[[rank, piv]] = work[[piv, rank]]
        work[rank] = (work[rank] * pow(int(work[rank, col]), -1, p)) % p
        below = rank + 1 + np.nonzero(work[rank + 1:, col])[0]
        if below.size:
            work[below] = (work[below] - np.outer(work[below, col], work[rank])) % p
        rank += 1
        if rank == m:
            break
    return rank


def mat_rank(a: FFMatrix) -> int:
    """Rank over GF(p) by Gaussian elimination; rectangular input allowed."""
    return _rank_gf2(a) if a.p == 2 else _rank_odd(a)


def mat_trace(a: FFMatrix) -> int:
    """Sum of diagonal entries mod p."""
    if a.rows != a.cols:
        raise ValueError(f"trace of non-square {a.rows}x{a.cols} matrix")
    if a.p == 2:
        idx = np.arange(a.rows)
        bits = (a._w[idx, idx // 64] >> (idx % 64).astype(np.uint64)) & np.uint64(1)
        return int(bits.sum() & np.uint64(1))
    return int(a._w.trace() % a.p)


def _inverse_gf2(x: FFMatrix) -> FFMatrix:
    n = x.rows
    bits = _unpack_bits(x._w, n)
    aug = np.concatenate([bits, np.eye(n, dtype=np.uint8)], axis=1)
    work = _pack_bits(aug)
    for col in range(n):
        w, bit = divmod(col, 64)
        mask = np.uint64(1) << np.uint64(bit)
        hit = np.nonzero(work[col:, w] & mask)[0]
        if hit.size == 0:
            raise SingularMatrixError("matrix is singular over GF(2)")
        piv = col + hit[0]
        if piv != col:
            work[[col, piv]] = work[[piv, col]]
        rows = np.nonzero(work[:, w] & mask)[0]
        rows = rows[rows != col]
        if rows.size:
            work[rows] ^= work[col]
    inv_bits = _unpack_bits(work, 2 * n)[:, n:]
    return FFMatrix(2, n, n, _pack_bits(np.ascontiguousarray(inv_bits)))


def _inverse_odd(x: FFMatrix) -> FFMatrix:
    p = x.p
    n = x.rows
    work = np.concatenate([x._w.astype(np.int64), np.eye(n, dtype=np.int64)], axis=1)
    for col in range(n):
        hit = np.nonzero(work[col:, col])[0]
        if hit.size == 0:
            raise SingularMatrixError(f"matrix is singular over GF({p})")
        piv = col + hit[0]
        if piv != col:
            work[[col, piv]] = work[[piv, col]]
        work[col] = (work[col] * pow(int(work[col, col]), -1, p)) % p
        rows = np.nonzero(work[:, col])[0]
        rows = rows[rows != col]
        if rows.size:
            work[rows] = (work[rows] - np.outer(work[rows, col], work[col])) % p
    return FFMatrix(p, n, n, work[:, n:].astype(np.uint8))


def mat_inverse(x: FFMatrix) -> FFMatrix:
    """Two-sided inverse; raises SingularMatrixError when none exists."""
    if x.rows != x.cols:
        raise ValueError(f"inverse of non-square {x.rows}x{x.cols} matrix")
    return _inverse_gf2(x) if x.p == 2 else _inverse_odd(x)


def mat_pow(x: FFMatrix, k: int) -> FFMatrix:
    """x**k by square and multiply; negative k inverts first."""
    if x.rows != x.cols:
        raise ValueError("powers need a square matrix")
    if k < 0:
        return mat_pow(mat_inverse(x), -k)
    out = FFMatrix.identity(x.p, x.rows)
    base = x
    while k:
        if k & 1:
            out = mat_mul(out, base)
        k >>= 1
        if k:
            base = mat_mul(base, base)
    return out


def element_order(x: FFMatrix, cap: int = DEFAULT_ORDER_CAP) -> int:
    """Least n >= 1 with x**n = 1, by iterated multiplication up to cap."""
    if x.rows != x.cols:
        raise ValueError("order needs a square matrix")
    if cap < 1:
        raise ValueError("cap must be at least 1")
    if mat_rank(x) != x.rows:
        raise SingularMatrixError("singular matrix has no order")
    ident = FFMatrix.identity(x.p, x.rows)
    y = x
    for n in range(1, cap + 1):
        if y == ident:
            return n
        y = mat_mul(y, x)
    raise OrderCapExceeded(cap)


# -- polynomials ----------------------------------------------------------------


class FFPoly:
    """Polynomial over GF(p), constant term first."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Iterable[int]):
        _check_prime(p)
        cs = [int(c) % p for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.p = p
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other):
        return (
            isinstance(other, FFPoly) and self.p == other.p and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __mul__(self, other: "FFPoly") -> "FFPoly":
        if self.p != other.p:
            raise ValueError("modulus mismatch")
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1 or 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = (out[i + j] + a * b) % self.p
        return FFPoly(self.p, out)

    def __add__(self, other: "FFPoly") -> "FFPoly":
        if self.p != other.p:
            raise ValueError("modulus mismatch")
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return FFPoly(self.p, [(x + y) % self.p for x, y in zip(a, b)])

    def __repr__(self):
        return f"FFPoly(p={self.p}, coeffs={self.coeffs})"


def poly_eval(f: FFPoly, x: FFMatrix) -> FFMatrix:
    """Horner evaluation f(x); the constant term contributes c*I."""
    if x.rows != x.cols:
        raise ValueError("polynomial evaluation needs a square matrix")
    if f.p != x.p:
        raise ValueError(f"modulus mismatch: poly GF({f.p}) vs matrix GF({x.p})")
    n = x.rows
    if not f.coeffs:
        return FFMatrix.zeros(x.p, n, n)
    ident = FFMatrix.identity(x.p, n)
    acc = ident.scale(f.coeffs[-1])
    for c in reversed(f.coeffs[:-1]):
        acc = mat_mul(acc, x)
        if c:
            acc = acc + ident.scale(c)
    return acc


# -- file formats ----------------------------------------------------------------


def format_matrix_text(m: FFMatrix) -> str:
    if m.p >= 10:
        raise ValueError("text format supports single-digit entries only (p < 10)")
    lines = [f"matrix p={m.p} rows={m.rows} cols={m.cols}"]
    for row in m.to_rows():
        lines.append("".join(str(e) for e in row))
    return "\n".join(lines) + "\n"


def parse_matrix_text(text: str) -> FFMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "matrix":
        raise ValueError(f"bad matrix header: {lines[0]!r}")
    fields = dict(part.split("=", 1) for part in head[1:])
    try:
        p, rows, cols = int(fields["p"]), int(fields["rows"]), int(fields["cols"])
    except (KeyError, ValueError) as exc:
        raise ValueError(f"bad matrix header: {lines[0]!r}") from exc
    body = lines[1:]
    if len(body) != rows:
        raise ValueError(f"expected {rows} rows, found {len(body)}")
    data = []
    for k, ln in enumerate(body):
        ln = ln.strip()
        if len(ln) != cols:
            raise ValueError(f"row {k + 1}: expected {cols} digits, found {len(ln)}")
        row = []
        for ch in ln:
            if not ch.isdigit() or int(ch) >= p:
                raise ValueError(f"row {k + 1}: bad digit {ch!r} for GF({p})")
            row.append(int(ch))
        data.append(row)
    return FFMatrix.from_rows(p, data)


def format_ff2m(m: FFMatrix) -> bytes:
    """Binary GF(2) format: FF2M magic, u32 rows/cols, LSB-first row bytes."""
    if m.p != 2:
        raise ValueError("FF2M format is for GF(2) matrices")
    nbytes = -(-m.cols // 8)
    buf = io.BytesIO()
    buf.write(FF2M_MAGIC)
    buf.write(m.rows.to_bytes(4, "little"))
    buf.write(m.cols.to_bytes(4, "little"))
    rowbytes = np.ascontiguousarray(m._w).view(np.uint8).reshape(m.rows, -1)[:, :nbytes]
    buf.write(np.ascontiguousarray(rowbytes).tobytes())
    return buf.getvalue()


def parse_ff2m(data: bytes) -> FFMatrix:
    if data[:4] != FF2M_MAGIC:
        raise ValueError("missing FF2M magic")
    rows = int.from_bytes(data[4:8], "little")
    cols = int.from_bytes(data[8:12], "little")
    nbytes = -(-cols // 8)
    body = np.frombuffer(data[12:12 + rows * nbytes], dtype=np.uint8)
    if body.size != rows * nbytes:
        raise ValueError("truncated FF2M payload")
    bits = np.unpackbits(body.reshape(rows, nbytes), axis=1, bitorder="little")[:, :cols]
    return FFMatrix(2, rows, cols, _pack_bits(np.ascontiguousarray(bits)))


def load_matrix(path) -> FFMatrix:
    """Read a matrix file, sniffing the FF2M magic vs the text format."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] == FF2M_MAGIC:
        return parse_ff2m(blob)
    return parse_matrix_text(blob.decode("utf-8"))


def save_matrix(path, m: FFMatrix, binary: bool = False) -> None:
    if binary:
        with open(path, "wb") as fh:
            fh.write(format_ff2m(m))
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(format_matrix_text(m))
