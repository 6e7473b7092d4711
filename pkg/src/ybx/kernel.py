"""Linear and affine set-theoretical R-matrices on X = (Z/m)^N.

A linear solution is R(x, y) = (cx + dy, ax + by); an affine one adds the
translations t (first output) and z (second output). This module builds them
from (a, b) or (a, b, z), checks the defining matrix identities, and verifies
the Yang-Baxter, unitarity and crossing conditions directly on the
permutation of X x X.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import sparse

from .modmat import GroupSpec, Matrix, NotInvertible, ShapeMismatch, invert, is_invertible


class Eq13Violation(ValueError):
    """(a, b) does not satisfy ab = ba + aba."""


class GroupTooLarge(ValueError):
    def __init__(self, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(f"|X| = {size} exceeds cap {cap}")


DEFAULT_CAP = 4096


@dataclass(frozen=True)
class LinearSolution:
    group: GroupSpec
    a: Matrix
    b: Matrix
    c: Matrix
    d: Matrix

    def __post_init__(self):
        for name in "abcd":
            M = getattr(self, name)
            if M.shape != (self.group.N, self.group.N) or M.ring != self.group.ring:
                raise ShapeMismatch(
                    f"{name} must be {self.group.N}x{self.group.N} over Z/{self.group.m}")

    def __call__(self, x: Sequence[int], y: Sequence[int]):
        c, d, a, b = self.c, self.d, self.a, self.b
        m = self.group.m
        return (tuple((u + v) % m for u, v in zip(c.apply(x), d.apply(y))),
                tuple((u + v) % m for u, v in zip(a.apply(x), b.apply(y))))


@dataclass(frozen=True)
class AffineSolution:
    linear: LinearSolution
    z: tuple[int, ...]
    t: tuple[int, ...]

    def __post_init__(self):
        g = self.linear.group
        for name in ("z", "t"):
            v = tuple(int(x) % g.m for x in getattr(self, name))
            if len(v) != g.N:
                raise ShapeMismatch(f"{name} must have length {g.N}")
            object.__setattr__(self, name, v)

    @property
    def group(self) -> GroupSpec:
        return self.linear.group

    def __call__(self, x: Sequence[int], y: Sequence[int]):
        m = self.group.m
        u, v = self.linear(x, y)
        return (tuple((p + q) % m for p, q in zip(u, self.t)),
                tuple((p + q) % m for p, q in zip(v, self.z)))


def check_eq13(a: Matrix, b: Matrix) -> bool:
    """True iff ab = ba + aba; no invertibility is assumed."""
    if not (a.is_square and a.shape == b.shape and a.ring == b.ring):
        raise ShapeMismatch(f"a {a.shape} over {a.ring}, b {b.shape} over {b.ring}")
    ba = b @ a
    return a @ b == ba + a @ ba


def complete_solution(group: GroupSpec, a: Matrix, b: Matrix) -> LinearSolution:
    """Fill in c = b^-1 (1 - a^2) and d = a (a - 1)^-1.

    Raises NotInvertible naming ``b``, ``1-a^2`` or ``a-1``, or Eq13Violation.
    """
    ring = group.ring
    a, b = a.with_ring(ring), b.with_ring(ring)
    if a.shape != (group.N, group.N) or b.shape != a.shape:
        raise ShapeMismatch(f"a, b must be {group.N}x{group.N}")
    b_inv = invert(b, "b")
    one_minus_a2 = 1 - a @ a
    if not is_invertible(one_minus_a2):
        raise NotInvertible("1-a^2")
    if not check_eq13(a, b):
        raise Eq13Violation("ab != ba + aba")
    c = b_inv @ one_minus_a2
    d = a @ invert(a - 1, "a-1")
    return LinearSolution(group, a, b, c, d)


def translation_for(sol: LinearSolution, z: Sequence[int]) -> tuple[int, ...]:
    """t = -b^-1 (1 + a) z."""
    g = sol.group
    t = (invert(sol.b, "b") @ (1 + sol.a)).apply(tuple(z))
    return tuple(-x % g.m for x in t)


def complete_affine(group: GroupSpec, a: Matrix, b: Matrix, z: Sequence[int]) -> AffineSolution:
    lin = complete_solution(group, a, b)
    return AffineSolution(lin, tuple(z), translation_for(lin, z))


# -- verification results --------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    status: str  # "pass" | "fail" | "skipped"
    witness: object = None
    note: str | None = None

    def __bool__(self):
        return self.status == "pass"

    def to_json(self) -> dict:
        out = {"status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.note:
            out["note"] = self.note
        return out


PASS = CheckResult("pass")
SKIPPED = CheckResult("skipped")


def fail(witness, note=None) -> CheckResult:
    return CheckResult("fail", witness, note)


@dataclass(frozen=True)
class VerificationReport:
    qybe: CheckResult = SKIPPED
    unitarity: CheckResult = SKIPPED
    crossing: CheckResult = SKIPPED
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.status != "fail" for r in (self.qybe, self.unitarity, self.crossing))

    def to_json(self) -> dict:
        out = {k: getattr(self, k).to_json() for k in ("qybe", "unitarity", "crossing")}
        out.update(self.extra)
        out["ok"] = self.ok
        return out


# -- algebraic checks ---------------------------------------------------------


def braid_identities(sol: LinearSolution) -> list[tuple[str, Matrix, Matrix]]:
    a, b, c, d = sol.a, sol.b, sol.c, sol.d
    return [
        ("a(1-a)=bac", a @ (1 - a), b @ a @ c),
        ("d(1-d)=cdb", d @ (1 - d), c @ d @ b),
        ("ab=ba(1-d)", a @ b, b @ a @ (1 - d)),
        ("ca=(1-d)ac", c @ a, (1 - d) @ a @ c),
        ("dc=cd(1-a)", d @ c, c @ d @ (1 - a)),
        ("bd=(1-a)db", b @ d, (1 - a) @ d @ b),
        ("cb-bc=ada-dad", c @ b - b @ c, a @ d @ a - d @ a @ d),
    ]


def unitarity_identities(sol: LinearSolution) -> list[tuple[str, Matrix, Matrix]]:
    a, b, c, d = sol.a, sol.b, sol.c, sol.d
    zero = 0 * a
    one = zero + 1
    return [
        ("a^2+bc=1", a @ a + b @ c, one),
        ("cb+d^2=1", c @ b + d @ d, one),
        ("ab+bd=0", a @ b + b @ d, zero),
        ("ca+dc=0", c @ a + d @ c, zero),
    ]


def _first_failure(identities) -> CheckResult:
    for name, lhs, rhs in identities:
        if lhs != rhs:
            return fail({"identity": name, "lhs": lhs.tolist(), "rhs": rhs.tolist()})
    return PASS


def verify_braid_algebraic(sol: LinearSolution) -> CheckResult:
    return _first_failure(braid_identities(sol))


def verify_unitarity_algebraic(sol: LinearSolution) -> CheckResult:
    return _first_failure(unitarity_identities(sol))


def verify_crossing_linear(sol: LinearSolution | AffineSolution, pointwise: bool = False,
                           cap: int = DEFAULT_CAP) -> CheckResult:
    """Crossing symmetry for R given by (a, b, c, d) and optional translations.

    Condition 1: for all x, x' the system y' = cx + dy + t, y = cx' + dy' + t
    has a unique solution, i.e. 1 - d^2 is invertible. Condition 2: that
    solution satisfies x' = ax + by + z and x = ax' + by' + z. Eliminating
    y, y' with K = (1 - d^2)^-1 turns condition 2 into four matrix identities
    plus two constant terms.
    """
    if isinstance(sol, AffineSolution):
        lin, t, z = sol.linear, sol.t, sol.z
    else:
        lin, t, z = sol, (0,) * sol.group.N, (0,) * sol.group.N
    a, b, c, d = lin.a, lin.b, lin.c, lin.d
    g = lin.group
    m = g.m
    one_minus_d2 = 1 - d @ d
    if not is_invertible(one_minus_d2):
        return fail({"condition": 1, "reason": "1-d^2 is not invertible"})
    K = invert(one_minus_d2)
    zero = 0 * a
    # y = K(c x' + d c x + (1 + d) t),  y' = c x + d y + t
    identities = [
        ("bKc=1", b @ K @ c, zero + 1),
        ("a+bKdc=0", a + b @ K @ d @ c, zero),
        ("a+bdKc=0", a + b @ d @ K @ c, zero),
        ("bc+bdKdc=1", b @ c + b @ d @ K @ d @ c, zero + 1),
    ]
    res = _first_failure(identities)
    if not res:
        return fail({"condition": 2, **res.witness})
    y0 = (K @ (1 + d)).apply(t)
    yp0 = tuple((u + v) % m for u, v in zip(d.apply(y0), t))
    for name, y in (("bK(1+d)t+z=0", y0), ("b(dK(1+d)+1)t+z=0", yp0)):
        const = tuple((u + v) % m for u, v in zip(b.apply(y), z))
        if any(const):
            return fail({"condition": 2, "identity": name, "value": list(const)})
    if not pointwise:
        return PASS
    if g.order > cap:
        raise GroupTooLarge(g.order, cap)

    def add(*vs):
        return tuple(sum(col) % m for col in zip(*vs))

    for x in g.elements():
        for xp in g.elements():
            y = K.apply(add(c.apply(xp), (d @ c).apply(x), (1 + d).apply(t)))
            yp = add(c.apply(x), d.apply(y), t)
            if add(a.apply(x), b.apply(y), z) != tuple(xp) or add(a.apply(xp), b.apply(yp), z) != tuple(x):
                return fail({"condition": 2, "x": list(x), "x'": list(xp)})
    return PASS


# -- permutations of X x X --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PermutationMap:
    """A bijection of X x X stored as two arrays indexed by element indices.

    ``first[i, j]`` and ``second[i, j]`` are the indices of the two outputs of
    R applied to (x_i, y_j), with elements indexed lexicographically.
    """

    n: int
    first: np.ndarray
    second: np.ndarray
    group: GroupSpec | None = None

    def __post_init__(self):
        f = np.asarray(self.first, dtype=np.int64).reshape(self.n, self.n)
        s = np.asarray(self.second, dtype=np.int64).reshape(self.n, self.n)
        f.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "first", f)
        object.__setattr__(self, "second", s)
        flat = (f * self.n + s).ravel()
        if len(np.unique(flat)) != self.n * self.n:
            raise ValueError("table is not a bijection of X x X")

    @classmethod
    def from_table(cls, table: Sequence[int], n: int, group: GroupSpec | None = None):
        """From one-line notation on pair indices p = i*n + j."""
        t = np.asarray(table, dtype=np.int64)
        return cls(n, t // n, t % n, group)

    @classmethod
    def identity(cls, n: int):
        i, j = np.indices((n, n))
        return cls(n, i, j)

    @classmethod
    def flip(cls, n: int):
        i, j = np.indices((n, n))
        return cls(n, j, i)

    @property
    def table(self) -> tuple[int, ...]:
        return tuple(int(v) for v in (self.first * self.n + self.second).ravel())

    def __eq__(self, other):
        return isinstance(other, PermutationMap) and self.n == other.n and self.table == other.table

    def __hash__(self):
        return hash((self.n, self.table))

    def __call__(self, i: int, j: int) -> tuple[int, int]:
        return int(self.first[i, j]), int(self.second[i, j])


def to_permutation(sol: LinearSolution | AffineSolution, cap: int = DEFAULT_CAP) -> PermutationMap:
    g = sol.group
    n = g.order
    if n > cap:
        raise GroupTooLarge(n, cap)
    if isinstance(sol, AffineSolution):
        lin, t, z = sol.linear, np.array(sol.t), np.array(sol.z)
    else:
        lin, t, z = sol, np.zeros(g.N, dtype=np.int64), np.zeros(g.N, dtype=np.int64)
    # coordinates of every element, shape (n, N)
    coords = np.array(g.elements(), dtype=np.int64).reshape(n, g.N)
    A, B, C, D = (np.array(M.rows, dtype=np.int64) for M in (lin.a, lin.b, lin.c, lin.d))
    m = g.m
    weights = m ** np.arange(g.N - 1, -1, -1, dtype=np.int64)
    cx, dy = coords @ C.T, coords @ D.T
    ax, by = coords @ A.T, coords @ B.T
    first = ((cx[:, None, :] + dy[None, :, :] + t) % m) @ weights
    second = ((ax[:, None, :] + by[None, :, :] + z) % m) @ weights
    # raises ValueError when the block matrix [[c, d], [a, b]] is singular
    return PermutationMap(n, first, second, g)


def _x_chunks(n: int, budget: int = 1 << 21):
    step = max(1, budget // (n * n))
    for lo in range(0, n, step):
        yield lo, min(n, lo + step)


def verify_qybe_set(R: PermutationMap) -> CheckResult:
    """R12 R13 R23 = R23 R13 R12 on every triple, witness = least failing (x, y, z)."""
    n, f, s = R.n, R.first, R.second
    for lo, hi in _x_chunks(n):
        x, y, z = np.meshgrid(np.arange(lo, hi), np.arange(n), np.arange(n), indexing="ij")
        # left side: apply R23, then R13, then R12
        y1, z1 = f[y, z], s[y, z]
        x1, z2 = f[x, z1], s[x, z1]
        lx, ly, lz = f[x1, y1], s[x1, y1], z2
        # right side: apply R12, then R13, then R23
        x1, y1 = f[x, y], s[x, y]
        x2, z1 = f[x1, z], s[x1, z]
        rx, ry, rz = x2, f[y1, z1], s[y1, z1]
        bad = (lx != rx) | (ly != ry) | (lz != rz)
        if bad.any():
            k = int(np.flatnonzero(bad.ravel())[0])
            i, j, l = np.unravel_index(k, bad.shape)
            return fail([int(i) + lo, int(j), int(l)])
    return PASS


def verify_unitarity_set(R: PermutationMap) -> CheckResult:
    """R21 R = 1 with R21 = P R P; witness = least pair not fixed."""
    n, f, s = R.n, R.first, R.second
    x, y = np.indices((n, n))
    u, v = f[x, y], s[x, y]
    # R21(u, v) = P R (v, u)
    bx, by = s[v, u], f[v, u]
    bad = (bx != x) | (by != y)
    if bad.any():
        k = int(np.flatnonzero(bad.ravel())[0])
        return fail([k // n, k % n])
    return PASS


def permutation_matrix(R: PermutationMap) -> sparse.csr_matrix:
    """0/1 matrix sum_{x,y} E_{f(x,y),x} (x) E_{g(x,y),y}, rows/cols indexed u*n+v."""
    n = R.n
    x, y = np.indices((n, n))
    rows = (R.first * n + R.second).ravel()
    cols = (x * n + y).ravel()
    return sparse.csr_matrix((np.ones(n * n, dtype=np.int64), (rows, cols)), shape=(n * n, n * n))


def partial_transpose(M: sparse.spmatrix, n: int) -> sparse.csr_matrix:
    """Transpose in the second tensor factor: entry ((u,v),(x,y)) moves to ((u,y),(x,v))."""
    coo = M.tocoo()
    u, v = np.divmod(coo.row, n)
    x, y = np.divmod(coo.col, n)
    return sparse.csr_matrix((coo.data, (u * n + y, x * n + v)), shape=M.shape)


def flip_conjugate(R: PermutationMap) -> PermutationMap:
    """R21 = P R P."""
    return PermutationMap(R.n, R.second.T, R.first.T, R.group)


def verify_crossing_matrix(R: PermutationMap, cap: int = DEFAULT_CAP,
                           assume_unitary: bool | None = None) -> CheckResult:
    """(R21)^t R^t = 1 as an exact integer matrix product; witness = first bad entry."""
    n = R.n
    if n > cap:
        raise GroupTooLarge(n, cap)
    Rt = partial_transpose(permutation_matrix(R), n)
    R21t = partial_transpose(permutation_matrix(flip_conjugate(R)), n)
    diff = (R21t @ Rt - sparse.identity(n * n, dtype=np.int64, format="csr")).tocoo()
    diff.eliminate_zeros()
    note = None if assume_unitary else "QYBE/unitarity not checked by this call"
    if diff.nnz:
        order = np.lexsort((diff.col, diff.row))[0]
        r, c = int(diff.row[order]), int(diff.col[order])
        return fail({"row": [r // n, r % n], "col": [c // n, c % n],
                     "value": int(diff.data[order]) + int(r == c)}, note)
    return CheckResult("pass", note=note)


def verify_set(R: PermutationMap, checks=("qybe", "unitarity", "crossing"),
               cap: int = DEFAULT_CAP) -> VerificationReport:
    q = verify_qybe_set(R) if "qybe" in checks else SKIPPED
    u = verify_unitarity_set(R) if "unitarity" in checks else SKIPPED
    c = (verify_crossing_matrix(R, cap, assume_unitary=bool(q) and bool(u))
         if "crossing" in checks else SKIPPED)
    return VerificationReport(q, u, c)


def _origin_checks(sol: AffineSolution) -> tuple[CheckResult, CheckResult]:
    # affine composites agree everywhere iff linear parts agree and they agree at 0
    N = sol.group.N
    o = (0,) * N

    def r12(x, y, w):
        return (*sol(x, y), w)

    def r13(x, y, w):
        u, v = sol(x, w)
        return (u, y, v)

    def r23(x, y, w):
        return (x, *sol(y, w))

    lhs, rhs = r12(*r13(*r23(o, o, o))), r23(*r13(*r12(o, o, o)))
    q = PASS if lhs == rhs else fail(
        {"identity": "R12R13R23(0)=R23R13R12(0)", "lhs": [list(v) for v in lhs],
         "rhs": [list(v) for v in rhs]})
    u, v = sol(o, o)
    back = sol(v, u)[::-1]  # R21 = P R P applied to R(0, 0)
    un = PASS if back == (o, o) else fail(
        {"identity": "R21R(0)=0", "image": [list(x) for x in back]})
    return q, un


def verify_algebraic(sol: LinearSolution | AffineSolution,
                     checks=("qybe", "unitarity", "crossing")) -> VerificationReport:
    """Matrix-identity checks; affine maps also compare the composites at the origin."""
    lin = sol.linear if isinstance(sol, AffineSolution) else sol
    q = verify_braid_algebraic(lin) if "qybe" in checks else SKIPPED
    u = verify_unitarity_algebraic(lin) if "unitarity" in checks else SKIPPED
    if isinstance(sol, AffineSolution):
        q0, u0 = _origin_checks(sol)
        q = q0 if q and not q0 else q
        u = u0 if u and not u0 else u
    c = verify_crossing_linear(sol) if "crossing" in checks else SKIPPED
    return VerificationReport(q, u, c)
