"""Canonical solutions from shift and binomial blocks, and nilpotent classification."""

from __future__ import annotations

from itertools import product
from math import comb, gcd
from typing import Iterator, Sequence

from .modmat import (ZZ, Matrix, NotInvertible, NotPrime, Ring, block_diag, invert,
                     is_invertible, is_prime, nullspace_mod_p, rank_mod_p, rank_rational)
from .kernel import check_eq13


class NotNilpotent(ArithmeticError):
    pass


class CommutantViolation(ValueError):
    def __init__(self, commutator: Matrix):
        self.commutator = commutator
        super().__init__(f"[A, a] = {commutator.tolist()} is nonzero")


class JordanType(tuple):
    """Non-increasing partition of N into nilpotent block sizes."""

    def __new__(cls, parts: Sequence[int]):
        parts = sorted((int(p) for p in parts), reverse=True)
        if not parts or parts[-1] < 1:
            raise ValueError(f"block sizes must be >= 1: {parts}")
        return super().__new__(cls, parts)

    @property
    def N(self) -> int:
        return sum(self)

    def __repr__(self):
        return f"JordanType({list(self)})"


def shift_matrix(N: int, ring: Ring = ZZ) -> Matrix:
    """J_N: ones on the superdiagonal."""
    return Matrix(ring, tuple(tuple(int(j == i + 1) for j in range(N)) for i in range(N)))


def binomial_matrix(N: int, ring: Ring = ZZ) -> Matrix:
    """B_N with B[i][j] = C(j, i), 0-based; upper unitriangular."""
    return Matrix(ring, tuple(tuple(comb(j, i) for j in range(N)) for i in range(N)))


def canonical_pair(jtype: Sequence[int], ring: Ring = ZZ) -> tuple[Matrix, Matrix]:
    jtype = JordanType(jtype)
    a = block_diag([shift_matrix(k, ring) for k in jtype])
    b0 = block_diag([binomial_matrix(k, ring) for k in jtype])
    return a, b0


def canonical_solution(jtype: Sequence[int], A: Matrix, ring: Ring = ZZ) -> tuple[Matrix, Matrix]:
    """(a, b0 A) for A invertible and commuting with a = sum of shift blocks."""
    a, b0 = canonical_pair(jtype, ring)
    A = A.with_ring(ring)
    if not is_invertible(A):
        raise NotInvertible("A")
    comm = A @ a - a @ A
    if not comm.is_zero():
        raise CommutantViolation(comm)
    return a, b0 @ A


def _max_prime_exponent(m: int) -> int:
    e, q = 1, 2
    while q * q <= m:
        k = 0
        while m % q == 0:
            m //= q
            k += 1
        e = max(e, k)
        q += 1
    return e


def nilpotency_index(a: Matrix) -> int:
    """Least k with a^k = 0; raises NotNilpotent otherwise.

    Over Z and Z/p the index is at most N. Over Z/m it is at most N*e, with e
    the largest prime exponent in m (a = 2 in Z/4 has index 2 > N = 1).
    """
    if not a.is_square:
        raise ValueError("square matrix required")
    m = a.ring.modulus
    bound = a.n_rows * (1 if m is None else _max_prime_exponent(m))
    power = a
    for k in range(1, bound + 1):
        if power.is_zero():
            return k
        power = power @ a
    raise NotNilpotent(f"a^{bound} != 0")


def _partition_from_ranks(ranks: list[int]) -> JordanType:
    # ranks[k] = rank(a^k), ranks[0] = N; blocks of size >= k number ranks[k-1] - ranks[k]
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    parts = []
    for k, cnt in enumerate(at_least, start=1):
        nxt = at_least[k] if k < len(at_least) else 0
        parts += [k] * (cnt - nxt)
    return JordanType(parts)


def jordan_type(a: Matrix, p: int | None = None) -> JordanType:
    """Block sizes of a nilpotent a over Z/p, read off the ranks of its powers."""
    if p is None:
        p = a.ring.modulus
        if p is None:
            raise ValueError("pass p explicitly for integer matrices")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    k = nilpotency_index(a)
    N = a.n_rows
    ranks, power = [N], a
    for _ in range(k):
        ranks.append(rank_mod_p(power, p))
        power = power @ a
    return _partition_from_ranks(ranks)


def jordan_type_rational(a: Matrix) -> JordanType:
    """Same as jordan_type but with ranks over Q; a must have integer entries."""
    k = nilpotency_index(a)
    ranks, power = [a.n_rows], a
    for _ in range(k):
        ranks.append(rank_rational(power))
        power = power @ a
    return _partition_from_ranks(ranks)


def eq13_operator(a: Matrix) -> list[list[int]]:
    """Matrix of the linear map b -> ab - ba - aba on row-major coordinates of b."""
    N = a.n_rows
    cols = []
    for i, j in product(range(N), repeat=2):
        E = Matrix(a.ring, tuple(tuple(int((r, s) == (i, j)) for s in range(N)) for r in range(N)))
        Ea = E @ a
        cols.append((a @ E - Ea - a @ Ea).entries())
    return [list(r) for r in zip(*cols)]


def solve_b_space(a: Matrix, p: int | None = None) -> list[Matrix]:
    """Basis over Z/p of {b : ab = ba + aba}."""
    if p is None:
        p = a.ring.modulus
    if p is None or not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    ring = Ring(p)
    a = a.with_ring(ring)
    N = a.n_rows
    basis = nullspace_mod_p(eq13_operator(a), N * N, p)
    return [Matrix(ring, tuple(tuple(v[i * N:(i + 1) * N]) for i in range(N))) for v in basis]


def span(basis: Sequence[Matrix], zero: Matrix) -> Iterator[Matrix]:
    """Every Z/p-combination of ``basis``; ``zero`` fixes shape and ring."""
    p = zero.ring.modulus
    for coeffs in product(range(p), repeat=len(basis)):
        acc = zero
        for k, B in zip(coeffs, basis):
            if k:
                acc = acc + k * B
        yield acc


def entry_gcds(a: Matrix) -> list[int]:
    """gcd of the entries of a, a^2, ... until the power vanishes.

    Each value is a GL_N(Z)-conjugation invariant: conjugation preserves the
    ideal generated by the entries of a matrix.
    """
    out, power = [], a
    for _ in range(a.n_rows):
        if power.is_zero():
            break
        g = 0
        for x in power.entries():
            g = gcd(g, x)
        out.append(g)
        power = power @ a
    return out


def probe_prop5(a: Matrix, b: Matrix | None = None) -> dict:
    """Compare an integer nilpotent a with the shift-block form of its rational Jordan type.

    Returns a report; ``conjugate_over_Z`` is False when an invariant separates
    them and None when the probe is inconclusive.
    """
    a = a.with_ring(ZZ)
    report: dict = {"ring": "Z"}
    if b is not None:
        b = b.with_ring(ZZ)
        report["eq13"] = check_eq13(a, b)
        report["b_in_GL_N(Z)"] = is_invertible(b)
    try:
        jt = jordan_type_rational(a)
    except NotNilpotent:
        report["nilpotent"] = False
        return report
    canon_a, _ = canonical_pair(jt)
    ga, gc = entry_gcds(a), entry_gcds(canon_a)
    report.update({
        "nilpotent": True,
        "jordan_type_over_Q": list(jt),
        "entry_gcds": ga,
        "canonical_entry_gcds": gc,
        "conjugate_over_Z": False if ga != gc else None,
    })
    return report


def classify(a: Matrix, b: Matrix | None = None) -> dict:
    """Nilpotency index, Jordan type (prime modulus), and comparison with the canonical pair."""
    report: dict = {"ring": str(a.ring)}
    if b is not None:
        report["eq13"] = check_eq13(a, b)
    try:
        report["nilpotency_index"] = nilpotency_index(a)
    except NotNilpotent:
        report["nilpotency_index"] = None
        report["nilpotent"] = False
        return report
    report["nilpotent"] = True
    p = a.ring.modulus
    if p is None or not is_prime(p):
        return report
    jt = jordan_type(a)
    ca, cb0 = canonical_pair(jt, a.ring)
    report["jordan_type"] = list(jt)
    report["canonical_a"] = ca.tolist()
    report["canonical_b0"] = cb0.tolist()
    report["canonical_eq13"] = check_eq13(ca, cb0)
    # conjugate matrices have b-spaces of equal dimension
    report["b_space_dim"] = len(solve_b_space(a))
    report["canonical_b_space_dim"] = len(solve_b_space(ca))
    if b is not None:
        try:
            invert(b)
            report["b_invertible"] = True
        except NotInvertible:
            report["b_invertible"] = False
    return report
