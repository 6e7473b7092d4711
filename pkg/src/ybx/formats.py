"""Serialization: solution JSON, permutation tables, JSON-lines records.

Solution JSON::

    {"group": {"mod": m, "rank": N}, "a": [[...]], "b": [[...]],
     "c": [[...]], "d": [[...]], "z": [...], "t": [...]}

c, d, z and t are optional on input; missing c, d (and t, given z) are
completed on load. Canonical output is sorted-key JSON without whitespace.
"""

from __future__ import annotations

import json
from typing import Sequence

from .kernel import (AffineSolution, LinearSolution, PermutationMap, complete_solution,
                     translation_for)
from .modmat import GroupSpec, Matrix, Ring


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def parse_matrix(literal, ring: Ring) -> Matrix:
    """Accepts nested lists or their JSON text, e.g. ``[[0,1],[0,0]]``."""
    if isinstance(literal, str):
        literal = json.loads(literal)
    if not (isinstance(literal, list) and literal and all(isinstance(r, list) for r in literal)):
        raise ValueError(f"not a matrix literal: {literal!r}")
    if not all(isinstance(x, int) and not isinstance(x, bool) for r in literal for x in r):
        raise ValueError("matrix entries must be integers")
    return Matrix.of(literal, ring)


def parse_vector(literal) -> tuple[int, ...]:
    if isinstance(literal, str):
        literal = json.loads(literal)
    if not (isinstance(literal, list) and all(isinstance(x, int) for x in literal)):
        raise ValueError(f"not a vector literal: {literal!r}")
    return tuple(literal)


def parse_group(obj) -> GroupSpec:
    try:
        return GroupSpec(int(obj["mod"]), int(obj["rank"]))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"bad group spec: {obj!r}") from exc


def solution_from_json(obj: dict) -> LinearSolution | AffineSolution:
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "a" not in obj or "b" not in obj:
        raise ValueError("solution JSON needs 'group', 'a' and 'b'")
    g = parse_group(obj.get("group"))
    ring = g.ring
    a, b = parse_matrix(obj["a"], ring), parse_matrix(obj["b"], ring)
    if "c" in obj and "d" in obj:
        sol = LinearSolution(g, a, b, parse_matrix(obj["c"], ring), parse_matrix(obj["d"], ring))
    else:
        sol = complete_solution(g, a, b)
    if "z" not in obj:
        return sol
    z = parse_vector(obj["z"])
    t = parse_vector(obj["t"]) if "t" in obj else translation_for(sol, z)
    return AffineSolution(sol, z, t)


def solution_to_json(sol: LinearSolution | AffineSolution) -> dict:
    lin = sol.linear if isinstance(sol, AffineSolution) else sol
    out = {"group": lin.group.to_json(),
           **{k: getattr(lin, k).tolist() for k in "abcd"}}
    if isinstance(sol, AffineSolution):
        out["z"] = list(sol.z)
        out["t"] = list(sol.t)
    return out


def pair_to_json(group: GroupSpec, a: Matrix, b: Matrix) -> dict:
    return {"group": group.to_json(), "a": a.tolist(), "b": b.tolist()}


def _fmt(v: Sequence[int]) -> str:
    return ",".join(str(x) for x in v)


def format_table(R: PermutationMap, group: GroupSpec | None = None) -> str:
    """One line per pair, ``x1,..,xN y1,..,yN -> x'1,..,x'N y'1,..,y'N``, sorted."""
    group = group or R.group or GroupSpec(R.n, 1)
    if group.order != R.n:
        raise ValueError(f"group of order {group.order} does not match table on {R.n} elements")
    elems = group.elements()
    lines = []
    for i, x in enumerate(elems):
        for j, y in enumerate(elems):
            u, v = R(i, j)
            lines.append(f"{_fmt(x)} {_fmt(y)} -> {_fmt(elems[u])} {_fmt(elems[v])}")
    return "\n".join(lines) + "\n"


def parse_table(text: str, group: GroupSpec) -> PermutationMap:
    n = group.order
    table = [None] * (n * n)

    def idx(tok):
        v = tuple(int(s) for s in tok.split(","))
        if len(v) != group.N or any(not 0 <= s < group.m for s in v):
            raise ValueError(f"bad element {tok!r} for {group}")
        return group.index(v)

    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        try:
            lhs, rhs = line.split("->")
            x, y = lhs.split()
            u, v = rhs.split()
        except ValueError as exc:
            raise ValueError(f"malformed table line: {line!r}") from exc
        p = idx(x) * n + idx(y)
        if table[p] is not None:
            raise ValueError(f"duplicate entry for {x} {y}")
        table[p] = idx(u) * n + idx(v)
    if any(q is None for q in table):
        raise ValueError("table is not total")
    return PermutationMap.from_table(table, n, group)


def table_record(t: Sequence[int], n: int) -> dict:
    """JSON-lines record for a census permutation over X = Z/n (pair index p = x*n + y)."""
    return {"group": {"mod": n, "rank": 1}, "perm": list(t)}
