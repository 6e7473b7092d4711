"""Exact matrix arithmetic over the integers and over Z/m.

Entries are plain Python ints, so nothing overflows. Matrices are immutable
and hashable; endomorphisms act on column vectors by left multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


class NonSquare(ValueError):
    pass


class ShapeMismatch(ValueError):
    pass


class NotPrime(ValueError):
    pass


class NotInvertible(ArithmeticError):
    """Raised when a matrix (or ring element) has no inverse.

    ``which`` optionally names the offending operand, e.g. ``"b"`` or ``"1-a^2"``.
    """

    def __init__(self, which: str | None = None, det: int | None = None):
        self.which = which
        self.det = det
        msg = f"{which or 'matrix'} is not invertible"
        if det is not None:
            msg += f" (det = {det})"
        super().__init__(msg)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Ring:
    """Either the integers (``modulus is None``) or Z/m with m >= 2."""

    modulus: int | None = None

    def __post_init__(self):
        if self.modulus is not None and self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")

    @classmethod
    def integers(cls) -> Ring:
        return cls(None)

    @classmethod
    def mod(cls, m: int) -> Ring:
        return cls(m)

    @property
    def is_integers(self) -> bool:
        return self.modulus is None

    def reduce(self, x: int) -> int:
        return x if self.modulus is None else x % self.modulus

    def is_unit(self, x: int) -> bool:
        if self.modulus is None:
            return x in (1, -1)
        return gcd(x % self.modulus, self.modulus) == 1

    def inverse(self, x: int) -> int:
        if not self.is_unit(x):
            raise NotInvertible(det=x)
        if self.modulus is None:
            return x
        return pow(x, -1, self.modulus)

    def to_json(self) -> dict:
        return {"ring": "Z"} if self.modulus is None else {"mod": self.modulus}

    @classmethod
    def from_json(cls, obj: dict) -> Ring:
        if "mod" in obj:
            return cls(int(obj["mod"]))
        if obj.get("ring") == "Z":
            return cls(None)
        raise ValueError(f"unrecognised ring literal: {obj!r}")

    def __str__(self):
        return "Z" if self.modulus is None else f"Z/{self.modulus}"


ZZ = Ring(None)


@dataclass(frozen=True)
class GroupSpec:
    """X = (Z/m)^N; elements are length-N residue vectors."""

    m: int
    N: int

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("modulus must be >= 2")
        if self.N < 1:
            raise ValueError("rank must be >= 1")

    @property
    def ring(self) -> Ring:
        return Ring(self.m)

    @property
    def order(self) -> int:
        return self.m**self.N

    def elements(self) -> list[tuple[int, ...]]:
        """All elements in lexicographic order (first coordinate most significant)."""
        out = [()]
        for _ in range(self.N):
            out = [v + (r,) for v in out for r in range(self.m)]
        return out

    def index(self, v: Sequence[int]) -> int:
        k = 0
        for r in v:
            k = k * self.m + r % self.m
        return k

    def to_json(self) -> dict:
        return {"mod": self.m, "rank": self.N}


@dataclass(frozen=True)
class Matrix:
    ring: Ring
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.rows or not self.rows[0]:
            raise ValueError("matrix must have at least one row and column")
        width = len(self.rows[0])
        if any(len(r) != width for r in self.rows):
            raise ValueError("ragged matrix literal")
        canon = tuple(tuple(self.ring.reduce(int(x)) for x in r) for r in self.rows)
        object.__setattr__(self, "rows", canon)

    # construction -------------------------------------------------------

    @classmethod
    def of(cls, rows: Iterable[Iterable[int]], ring: Ring = ZZ) -> Matrix:
        return cls(ring, tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, n: int, ring: Ring = ZZ) -> Matrix:
        return cls(ring, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int | None = None, ring: Ring = ZZ) -> Matrix:
        n_cols = n_rows if n_cols is None else n_cols
        return cls(ring, tuple((0,) * n_cols for _ in range(n_rows)))

    @classmethod
    def column(cls, v: Sequence[int], ring: Ring = ZZ) -> Matrix:
        return cls(ring, tuple((x,) for x in v))

    # shape ---------------------------------------------------------------

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.rows[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_rows, self.n_cols

    @property
    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def entries(self) -> tuple[int, ...]:
        return tuple(x for r in self.rows for x in r)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def with_ring(self, ring: Ring) -> Matrix:
        return Matrix(ring, self.rows)

    def is_zero(self) -> bool:
        return not any(self.entries())

    def is_identity(self) -> bool:
        return self.is_square and self == Matrix.identity(self.n_rows, self.ring)

    # arithmetic ------------------------------------------------------------

    def _check_same(self, other: Matrix):
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if self.ring != other.ring:
            raise ShapeMismatch(f"ring mismatch: {self.ring} vs {other.ring}")

    def __add__(self, other: Matrix | int) -> Matrix:
        if isinstance(other, int):
            other = Matrix.identity(self.n_rows, self.ring) * other
        self._check_same(other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} + {other.shape}")
        return Matrix(self.ring, tuple(
            tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    __radd__ = __add__

    def __neg__(self) -> Matrix:
        return Matrix(self.ring, tuple(tuple(-x for x in r) for r in self.rows))

    def __sub__(self, other: Matrix | int) -> Matrix:
        return self + (-other)

    def __rsub__(self, other: int) -> Matrix:
        return (-self) + other

    def __mul__(self, k: int) -> Matrix:
        if not isinstance(k, int):
            return NotImplemented
        return Matrix(self.ring, tuple(tuple(k * x for x in r) for r in self.rows))

    __rmul__ = __mul__

    def __matmul__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        if self.n_cols != other.n_rows:
            raise ShapeMismatch(f"{self.shape} @ {other.shape}")
        cols = list(zip(*other.rows))
        return Matrix(self.ring, tuple(
            tuple(sum(x * y for x, y in zip(r, c)) for c in cols) for r in self.rows))

    def __pow__(self, k: int) -> Matrix:
        if not self.is_square:
            raise NonSquare(f"cannot raise {self.shape} matrix to a power")
        if k < 0:
            return invert(self) ** (-k)
        out = Matrix.identity(self.n_rows, self.ring)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        """Left action on a column vector, returned as a tuple of canonical residues."""
        if len(v) != self.n_cols:
            raise ShapeMismatch(f"{self.shape} applied to length-{len(v)} vector")
        return tuple(self.ring.reduce(sum(x * y for x, y in zip(r, v))) for r in self.rows)

    @property
    def T(self) -> Matrix:
        return Matrix(self.ring, tuple(zip(*self.rows)))

    def minor(self, i: int, j: int) -> Matrix:
        return Matrix(self.ring, tuple(
            r[:j] + r[j + 1:] for k, r in enumerate(self.rows) if k != i))

    def __repr__(self):
        return f"Matrix({self.tolist()}, {self.ring})"


def block_diag(blocks: Sequence[Matrix]) -> Matrix:
    if not blocks:
        raise ValueError("need at least one block")
    ring = blocks[0].ring
    n = sum(b.n_rows for b in blocks)
    rows = []
    offset = 0
    for b in blocks:
        for r in b.rows:
            rows.append((0,) * offset + r + (0,) * (n - offset - b.n_cols))
        offset += b.n_cols
    return Matrix(ring, tuple(rows))


def _bareiss(rows: list[list[int]]) -> int:
    # Fraction-free elimination; every division below is exact over Z.
    a = [list(r) for r in rows]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def det(M: Matrix) -> int:
    """Determinant in canonical form for ``M.ring``.

    Computed exactly over Z on the stored representatives, then reduced; this
    is valid for composite moduli since reduction is a ring homomorphism.
    """
    if not M.is_square:
        raise NonSquare(f"determinant of {M.shape} matrix")
    return M.ring.reduce(_bareiss([list(r) for r in M.rows]))


def adjugate(M: Matrix) -> Matrix:
    if not M.is_square:
        raise NonSquare(f"adjugate of {M.shape} matrix")
    n = M.n_rows
    if n == 1:
        return Matrix.identity(1, M.ring)
    cof = [[(-1) ** (i + j) * _bareiss([list(r) for r in M.minor(i, j).rows])
            for j in range(n)] for i in range(n)]
    return Matrix(M.ring, tuple(zip(*cof)))


def is_invertible(M: Matrix) -> bool:
    return M.is_square and M.ring.is_unit(det(M))


def invert(M: Matrix, which: str | None = None) -> Matrix:
    """Inverse as det(M)^-1 * adj(M).

    Over Z/m this succeeds iff det is a unit mod m (composite m included);
    over Z iff det = +-1. Raises ``NotInvertible`` otherwise.
    """
    if not M.is_square:
        raise NonSquare(f"inverse of {M.shape} matrix")
    d = det(M)
    if not M.ring.is_unit(d):
        raise NotInvertible(which, d)
    return adjugate(M) * M.ring.inverse(d)


def _rref_mod_p(rows: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    a = [[x % p for x in r] for r in rows]
    n_rows = len(a)
    n_cols = len(a[0]) if a else 0
    pivots = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(n_rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return a, pivots


def _check_reducible(M: Matrix, p: int):
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    m = M.ring.modulus
    if m is not None and m % p:
        raise ValueError(f"entries over Z/{m} do not reduce mod {p}")


def rank_mod_p(M: Matrix, p: int) -> int:
    """Rank over the field Z/p by Gauss-Jordan elimination."""
    _check_reducible(M, p)
    return len(_rref_mod_p([list(r) for r in M.rows], p)[1])


def nullspace_mod_p(rows: Sequence[Sequence[int]], n_cols: int, p: int) -> list[tuple[int, ...]]:
    """Basis of {x : A x = 0} over Z/p, one vector per free column."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if not rows:
        return [tuple(int(i == j) for j in range(n_cols)) for i in range(n_cols)]
    red, pivots = _rref_mod_p([list(r) for r in rows], p)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * n_cols
        v[f] = 1
        for row, pc in zip(red, pivots):
            v[pc] = -row[f] % p
        basis.append(tuple(v))
    return basis


def rank_rational(M: Matrix) -> int:
    """Rank over Q of an integer matrix."""
    a = [[Fraction(x) for x in r] for r in M.rows]
    n_rows, n_cols = M.shape
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, n_rows):
            f = a[i][c] / a[r][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return r
