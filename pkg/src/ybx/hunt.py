"""Exhaustive searches: linear (a, b) pairs over Mat_N(Z/m), and raw permutations of X x X.

The checks used inside the search loops are deliberately written against flat
tuples here instead of calling into :mod:`ybx.kernel`, so that kernel
verifiers can audit search output independently.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import permutations, product
from math import factorial

from .canon import solve_b_space, span
from .kernel import complete_solution, to_permutation
from .modmat import GroupSpec, Matrix, Ring, det, is_prime

CHECKS = ("qybe", "unitarity", "crossing")


class BudgetExceeded(ValueError):
    pass


class CapExceeded(ValueError):
    def __init__(self, n: int, cap: int):
        self.n = n
        self.cap = cap
        self.candidates = factorial(n * n)
        super().__init__(
            f"|X x X| = {n * n} exceeds cap {cap}: {self.candidates} permutations to scan")


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("YBX_WORKERS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class SearchConfig:
    m: int = 2
    N: int = 1
    checks: tuple[str, ...] = CHECKS
    max_pairs: int = 9  # cap on |X x X| for the set-theoretic search
    budget: int = 10**6  # cap on the number of linear candidates
    workers: int = field(default_factory=default_workers)

    def __post_init__(self):
        bad = set(self.checks) - set(CHECKS)
        if bad:
            raise ValueError(f"unknown checks: {sorted(bad)}")


def _run(fn, jobs, workers):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*jobs)))


# -- linear search --------------------------------------------------------------


def _mul(x, y, N, m):
    return tuple(sum(x[i * N + k] * y[k * N + j] for k in range(N)) % m
                 for i in range(N) for j in range(N))


def _satisfies_eq13(a, b, N, m):
    ba = _mul(b, a, N, m)
    aba = _mul(a, ba, N, m)
    return _mul(a, b, N, m) == tuple((u + v) % m for u, v in zip(ba, aba))


def _unit_det(flat, N, m) -> bool:
    d = det(Matrix(Ring(m), tuple(flat[i * N:(i + 1) * N] for i in range(N))))
    return _gcd(d, m) == 1


def _gcd(x, y):
    while y:
        x, y = y, x % y
    return x


def _one_minus_square(a, N, m):
    sq = _mul(a, a, N, m)
    return tuple((int(i // N == i % N) - v) % m for i, v in enumerate(sq))


def _linear_chunk(m, N, first):
    """All solutions whose a has leading entry ``first``."""
    out = []
    n2 = N * N
    prime = is_prime(m)
    ring = Ring(m)
    for rest in product(range(m), repeat=n2 - 1):
        a = (first,) + rest
        if not _unit_det(_one_minus_square(a, N, m), N, m):
            continue
        if prime:
            A = Matrix(ring, tuple(a[i * N:(i + 1) * N] for i in range(N)))
            candidates = (B.entries() for B in span(solve_b_space(A), 0 * A))
        else:
            candidates = product(range(m), repeat=n2)
        for b in candidates:
            if _unit_det(b, N, m) and _satisfies_eq13(a, b, N, m):
                out.append((a, b))
    out.sort()
    return out


def enumerate_linear(m: int, N: int, budget: int = 10**6,
                     workers: int | None = None) -> list[tuple[Matrix, Matrix]]:
    """All (a, b) with b and 1 - a^2 invertible and ab = ba + aba, sorted by entries."""
    n2 = N * N
    cost = m**n2 if is_prime(m) else m ** (2 * n2)
    if cost > budget:
        raise BudgetExceeded(f"{cost} candidates for m={m}, N={N} exceed budget {budget}")
    workers = default_workers() if workers is None else workers
    chunks = _run(_linear_chunk, [(m, N, f) for f in range(m)], workers)
    ring = Ring(m)

    def mat(flat):
        return Matrix(ring, tuple(flat[i * N:(i + 1) * N] for i in range(N)))

    return [(mat(a), mat(b)) for chunk in chunks for a, b in chunk]


# -- set-theoretic search ----------------------------------------------------------


def _unitary(t, n):
    # P R P R = 1: if R(x, y) = (u, v) then R(v, u) = (y, x)
    for p, q in enumerate(t):
        u, v = divmod(q, n)
        x, y = divmod(p, n)
        if t[v * n + u] != y * n + x:
            return False
    return True


def _qybe(t, n):
    for x in range(n):
        for y in range(n):
            for z in range(n):
                # R23, R13, R12
                y1, z1 = divmod(t[y * n + z], n)
                x1, z2 = divmod(t[x * n + z1], n)
                lx, ly = divmod(t[x1 * n + y1], n)
                # R12, R13, R23
                x1, y1 = divmod(t[x * n + y], n)
                rx, z1 = divmod(t[x1 * n + z], n)
                ry, rz = divmod(t[y1 * n + z1], n)
                if (lx, ly, z2) != (rx, ry, rz):
                    return False
    return True


def _crossing(t, n):
    # entries of (R21)^t R^t, keyed by (u, w, x, v); must be the identity
    counts = {}
    for x in range(n):
        for tt in range(n):
            s, v = divmod(t[x * n + tt], n)
            for w in range(n):
                t2, u = divmod(t[w * n + s], n)  # R21(s, w) = flip of R(w, s)
                if t2 == tt:
                    key = (u, w, x, v)
                    counts[key] = counts.get(key, 0) + 1
    if len(counts) != n * n:
        return False
    return all(c == 1 and (u, w) == (x, v) for (u, w, x, v), c in counts.items())


_CHECK_FNS = {"unitarity": _unitary, "qybe": _qybe, "crossing": _crossing}


def passes(t, n, checks=CHECKS) -> bool:
    """Hot-loop filter; unitarity runs first since it rejects most candidates."""
    for name in ("unitarity", "qybe", "crossing"):
        if name in checks and not _CHECK_FNS[name](t, n):
            return False
    return True


def _set_chunk(n, checks, first):
    P = n * n
    rest = [i for i in range(P) if i != first]
    return [(first,) + tail for tail in permutations(rest)
            if passes((first,) + tail, n, checks)]


def conjugate_table(t, n, sigma):
    """(sigma x sigma) R (sigma x sigma)^-1 in one-line notation."""
    out = [0] * (n * n)
    for p, q in enumerate(t):
        x, y = divmod(p, n)
        u, v = divmod(q, n)
        out[sigma[x] * n + sigma[y]] = sigma[u] * n + sigma[v]
    return tuple(out)


def canonical_table(t, n):
    """Lexicographically least table over all simultaneous relabelings of X."""
    return min(conjugate_table(t, n, s) for s in permutations(range(n)))


@dataclass
class Census:
    n: int
    checks: tuple[str, ...]
    tables: list[tuple[int, ...]]
    canonical: list[tuple[int, ...]]

    @property
    def count_raw(self) -> int:
        return len(self.tables)

    @property
    def count_canonical(self) -> int:
        return len(self.canonical)


def enumerate_set_theoretic(n: int, checks=CHECKS, max_pairs: int = 9,
                            workers: int | None = None) -> Census:
    """Every permutation of X x X (|X| = n) passing ``checks``, in one-line lex order.

    Tables are tuples over pair indices p = x*n + y.
    """
    if n * n > max_pairs:
        raise CapExceeded(n, max_pairs)
    checks = tuple(c for c in CHECKS if c in checks)
    workers = default_workers() if workers is None else workers
    chunks = _run(_set_chunk, [(n, checks, f) for f in range(n * n)], workers)
    tables = [t for chunk in chunks for t in chunk]
    canonical = sorted({canonical_table(t, n) for t in tables})
    return Census(n, checks, tables, canonical)


@dataclass
class CrossValidation:
    m: int
    N: int
    linear_tables: list[tuple[int, ...]]
    census: Census
    missing: list[tuple[int, ...]]
    residue: list[tuple[int, ...]]

    @property
    def inclusion(self) -> bool:
        return not self.missing

    def to_json(self) -> dict:
        return {
            "mod": self.m, "rank": self.N,
            "count_linear": len(self.linear_tables),
            "count_linear_distinct": len(set(self.linear_tables)),
            "count_set_raw": self.census.count_raw,
            "count_set_canonical": self.census.count_canonical,
            "inclusion": self.inclusion,
            "missing": [list(t) for t in self.missing],
            "residue": [list(t) for t in self.residue],
        }


def cross_validate(m: int, N: int, max_pairs: int = 9, workers: int | None = None,
                   checks=CHECKS) -> CrossValidation:
    """Compare completed linear solutions with the raw permutation census on X = (Z/m)^N."""
    g = GroupSpec(m, N)
    census = enumerate_set_theoretic(g.order, checks, max_pairs, workers)
    linear = [to_permutation(complete_solution(g, a, b)).table
              for a, b in enumerate_linear(m, N, workers=workers)]
    found = set(census.tables)
    image = set(linear)
    return CrossValidation(
        m, N, linear, census,
        missing=sorted(t for t in image if t not in found),
        residue=[t for t in census.tables if t not in image],
    )


def run_config(cfg: SearchConfig):
    """Linear enumeration for cfg.m, cfg.N plus the census on X = (Z/m)^N when it fits the cap."""
    pairs = enumerate_linear(cfg.m, cfg.N, cfg.budget, cfg.workers)
    n = cfg.m**cfg.N
    census = (enumerate_set_theoretic(n, cfg.checks, cfg.max_pairs, cfg.workers)
              if n * n <= cfg.max_pairs else None)
    return pairs, census
