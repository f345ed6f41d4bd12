"""Set-family model, constraint predicates, push-to-the-middle, and exact
maximum-family search via branch-and-bound clique search.

Members of a family over the ground set [n] are stored as bit masks with
bit i-1 standing for element i.  The maximum-family search builds the
compatibility graph (admissible subsets as vertices, edges where the
pairwise constraint holds) and runs a deterministic branch-and-bound
maximum clique with greedy-coloring upper bounds on bitset adjacency rows.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from enum import Enum

from .padic import PrimePower

__all__ = [
    "Kind",
    "SetFamily",
    "ConstraintSpec",
    "CheckResult",
    "SearchResult",
    "PushError",
    "satisfies",
    "push_to_middle",
    "push_to_middle_with_map",
    "max_family",
    "parse_family",
    "format_family",
    "DEFAULT_N_LIMIT",
    "NODE_BUDGET_ENV",
]

DEFAULT_N_LIMIT = 12
NODE_BUDGET_ENV = "QSPERNER_NODE_BUDGET"


class Kind(str, Enum):
    DIFF_SPERNER = "diff-sperner"
    CLOSE_SPERNER = "close-sperner"
    INTERSECTING = "intersecting"
    INTERSECTING_UNIFORM = "intersecting-uniform"
    HAMMING = "hamming"
    ANTICHAIN = "antichain"


@dataclass(frozen=True)
class SetFamily:
    """An ordered duplicate-free list of subsets of [n], kept in canonical
    order (ascending numeric bit-mask value)."""

    n: int
    members: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("ground-set size must be non-negative")
        members = tuple(sorted(self.members))
        for m in members:
            if m < 0 or m >> self.n:
                raise ValueError(f"member mask {m:#x} not a subset of [{self.n}]")
        if len(set(members)) != len(members):
            raise ValueError("duplicate members")
        object.__setattr__(self, "members", members)

    def __len__(self):
        return len(self.members)

    @classmethod
    def from_sets(cls, n: int, sets) -> "SetFamily":
        masks = []
        for s in sets:
            mask = 0
            for x in s:
                if not 1 <= x <= n:
                    raise ValueError(f"element {x} outside [1, {n}]")
                mask |= 1 << (x - 1)
            masks.append(mask)
        return cls(n, tuple(masks))

    def sets(self) -> list[frozenset[int]]:
        return [
            frozenset(i + 1 for i in range(self.n) if m >> i & 1)
            for m in self.members
        ]


_LINE_RE = re.compile(r"^\{\s*((?:\d+\s*(?:,\s*\d+\s*)*)?)\}$")


def parse_family(text: str, n: int | None = None) -> SetFamily:
    """Parse the one-set-per-line format: `{1,3,5}` per line, `{}` for the
    empty set; blank lines and lines starting with '#' are ignored."""
    sets = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _LINE_RE.match(line)
        if not m:
            raise ValueError(f"line {lineno}: cannot parse {line!r}")
        body = m.group(1).strip()
        sets.append([int(tok) for tok in body.split(",")] if body else [])
    if n is None:
        n = max((max(s) for s in sets if s), default=0)
    return SetFamily.from_sets(n, sets)


def format_family(fam: SetFamily) -> str:
    lines = []
    for s in fam.sets():
        lines.append("{" + ",".join(str(x) for x in sorted(s)) + "}")
    return "\n".join(lines) + ("\n" if lines else "")


@dataclass(frozen=True)
class ConstraintSpec:
    """Family kind plus the residue set L, optional modulus, and ground-set
    size; the object every predicate, search, and bound rule consumes."""

    kind: Kind
    n: int
    L: frozenset[int] = frozenset()
    modulus: PrimePower | None = None
    uniform_residue: int | None = None

    def __post_init__(self):
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "L", frozenset(self.L))
        if self.n < 0:
            raise ValueError("n must be non-negative")
        q = self.modulus.q if self.modulus is not None else None
        if kind in (Kind.DIFF_SPERNER, Kind.HAMMING):
            if q is not None:
                reduced = frozenset(ell % q for ell in self.L)
                if 0 in reduced:
                    raise ValueError("L may not contain 0 modulo q")
                object.__setattr__(self, "L", reduced)
            elif any(ell < 1 for ell in self.L):
                raise ValueError("L must contain positive integers")
        elif kind is Kind.CLOSE_SPERNER:
            if self.modulus is not None:
                raise ValueError("close-Sperner constraints are non-modular")
            if any(ell < 1 for ell in self.L):
                raise ValueError("L must contain positive integers")
        elif kind is Kind.INTERSECTING:
            if q is not None:
                object.__setattr__(self, "L", frozenset(ell % q for ell in self.L))
            elif any(ell < 0 for ell in self.L):
                raise ValueError("L must contain non-negative integers")
        elif kind is Kind.INTERSECTING_UNIFORM:
            if self.modulus is None or self.uniform_residue is None:
                raise ValueError("uniform kind needs a modulus and a residue")
            object.__setattr__(self, "uniform_residue", self.uniform_residue % q)

    @property
    def q(self) -> int | None:
        return self.modulus.q if self.modulus is not None else None


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    violation: str | None = None

    def __bool__(self):
        return self.ok


def _set_str(mask: int) -> str:
    return "{" + ",".join(str(i + 1) for i in range(mask.bit_length()) if mask >> i & 1) + "}"


def _member_violation(spec: ConstraintSpec, a: int) -> str | None:
    size = a.bit_count()
    if spec.kind is Kind.INTERSECTING:
        if spec.q is not None:
            if size % spec.q in spec.L:
                return f"member {_set_str(a)}: size {size} lies in L (mod {spec.q})"
        elif size in spec.L:
            return f"member {_set_str(a)}: size {size} lies in L"
    elif spec.kind is Kind.INTERSECTING_UNIFORM:
        if size % spec.q != spec.uniform_residue:
            return (
                f"member {_set_str(a)}: size {size} is not congruent to "
                f"{spec.uniform_residue} (mod {spec.q})"
            )
    return None


def _pair_violation(spec: ConstraintSpec, a: int, b: int) -> str | None:
    kind, q, L = spec.kind, spec.q, spec.L
    if kind is Kind.DIFF_SPERNER:
        d1 = (a & ~b).bit_count()
        d2 = (b & ~a).bit_count()
        if q is not None:
            d1 %= q
            d2 %= q
            where = f" (mod {q})"
        else:
            where = ""
        if d1 not in L:
            return f"pair {_set_str(a)}, {_set_str(b)}: |A\\B| = {d1} not in L{where}"
        if d2 not in L:
            return f"pair {_set_str(b)}, {_set_str(a)}: |A\\B| = {d2} not in L{where}"
    elif kind is Kind.CLOSE_SPERNER:
        sd = min((a & ~b).bit_count(), (b & ~a).bit_count())
        if sd not in L:
            return f"pair {_set_str(a)}, {_set_str(b)}: skew distance {sd} not in L"
    elif kind is Kind.INTERSECTING:
        inter = (a & b).bit_count()
        if q is not None:
            if inter % q not in L:
                return (
                    f"pair {_set_str(a)}, {_set_str(b)}: intersection size "
                    f"{inter} not in L (mod {q})"
                )
        elif inter not in L:
            return f"pair {_set_str(a)}, {_set_str(b)}: intersection size {inter} not in L"
    elif kind is Kind.INTERSECTING_UNIFORM:
        inter = (a & b).bit_count()
        if inter % q == spec.uniform_residue:
            return (
                f"pair {_set_str(a)}, {_set_str(b)}: intersection size {inter} is "
                f"congruent to {spec.uniform_residue} (mod {q})"
            )
    elif kind is Kind.HAMMING:
        dist = (a ^ b).bit_count()
        if q is not None:
            if dist % q not in L:
                return (
                    f"pair {_set_str(a)}, {_set_str(b)}: Hamming distance "
                    f"{dist} not in L (mod {q})"
                )
        elif dist not in L:
            return f"pair {_set_str(a)}, {_set_str(b)}: Hamming distance {dist} not in L"
    elif kind is Kind.ANTICHAIN:
        if a & ~b == 0 or b & ~a == 0:
            small, big = (a, b) if a & ~b == 0 else (b, a)
            return f"pair {_set_str(small)} is contained in {_set_str(big)}"
    return None


def satisfies(spec: ConstraintSpec, fam: SetFamily) -> CheckResult:
    """Whether the family meets the constraint; reports the first violation."""
    if spec.n != fam.n:
        raise ValueError(f"spec has n = {spec.n} but family has n = {fam.n}")
    for a in fam.members:
        msg = _member_violation(spec, a)
        if msg:
            return CheckResult(False, msg)
    members = fam.members
    for i, a in enumerate(members):
        for b in members[i + 1 :]:
            msg = _pair_violation(spec, a, b)
            if msg:
                return CheckResult(False, msg)
    return CheckResult(True)


# ---------------------------------------------------------------------------
# push to the middle


class PushError(RuntimeError):
    """Raised when a saturating matching does not exist, which indicates a
    violated precondition (the input was not an antichain with 2s <= n)."""


def _is_antichain(members) -> bool:
    ms = list(members)
    for i, a in enumerate(ms):
        for b in ms[i + 1 :]:
            if a & ~b == 0 or b & ~a == 0:
                return False
    return True


def _maximum_matching(left: list[int], right: list[int]) -> dict[int, int]:
    """Maximum bipartite matching by augmenting paths (Kuhn).  Edges join a
    left mask to each right mask covering it with exactly one extra element."""
    right_index = {m: j for j, m in enumerate(right)}
    universe = max(right, default=0).bit_length()
    adj: list[list[int]] = []
    for a in left:
        nbrs = []
        for x in range(universe):
            if not a >> x & 1:
                j = right_index.get(a | (1 << x))
                if j is not None:
                    nbrs.append(j)
        adj.append(nbrs)
    match_right = [-1] * len(right)

    def try_augment(u: int, seen: list[bool]) -> bool:
        for j in adj[u]:
            if not seen[j]:
                seen[j] = True
                if match_right[j] == -1 or try_augment(match_right[j], seen):
                    match_right[j] = u
                    return True
        return False

    for u in range(len(left)):
        try_augment(u, [False] * len(right))
    return {
        left[u]: right[j] for j, u in enumerate(match_right) if u != -1
    }


def _raise_lowest_level(n: int, current: dict[int, int]) -> None:
    """Replace every minimum-size image by a one-element-larger superset via
    a perfect matching, mutating the original -> current mapping in place."""
    masks = set(current.values())
    k = min(m.bit_count() for m in masks)
    low = sorted(m for m in masks if m.bit_count() == k)
    supers = sorted(
        {m | (1 << x) for m in low for x in range(n) if not m >> x & 1}
    )
    if any(m in masks for m in supers):
        raise PushError("a one-element superset already belongs to the family")
    matched = _maximum_matching(low, supers)
    if len(matched) < len(low):
        raise PushError(
            f"no saturating matching from level {k} into level {k + 1}"
        )
    for orig, image in current.items():
        if image in matched:
            current[orig] = matched[image]


def push_to_middle_with_map(fam: SetFamily, s: int) -> tuple[SetFamily, dict[int, int]]:
    """push_to_middle plus the injection original member -> moved member."""
    n = fam.n
    if s < 0 or 2 * s > n:
        raise ValueError(f"need 0 <= 2s <= n, got s = {s}, n = {n}")
    if not _is_antichain(fam.members):
        raise ValueError("push_to_middle requires an antichain")
    current = {m: m for m in fam.members}
    while current and min(m.bit_count() for m in current.values()) < s:
        _raise_lowest_level(n, current)
    full = (1 << n) - 1
    for orig in current:
        current[orig] ^= full
    while current and min(m.bit_count() for m in current.values()) < s:
        _raise_lowest_level(n, current)
    for orig in current:
        current[orig] ^= full
    return SetFamily(n, tuple(current.values())), current


def push_to_middle(fam: SetFamily, s: int) -> SetFamily:
    """Move every member size into the band [s, n-s] without changing the
    family size, by repeated one-level matchings (low levels raised, high
    levels lowered through complementation)."""
    return push_to_middle_with_map(fam, s)[0]


# ---------------------------------------------------------------------------
# exact maximum-family search


@dataclass
class SearchResult:
    max_size: int
    witness: SetFamily
    nodes_explored: int
    exact: bool


def _pair_predicate(spec: ConstraintSpec):
    kind, q = spec.kind, spec.q
    L = spec.L
    if kind is Kind.DIFF_SPERNER:
        if q is not None:
            Lres = frozenset(L)

            def pred(a, b):
                return (
                    (a & ~b).bit_count() % q in Lres
                    and (b & ~a).bit_count() % q in Lres
                )

        else:

            def pred(a, b):
                return (a & ~b).bit_count() in L and (b & ~a).bit_count() in L

    elif kind is Kind.CLOSE_SPERNER:

        def pred(a, b):
            return min((a & ~b).bit_count(), (b & ~a).bit_count()) in L

    elif kind is Kind.INTERSECTING:
        if q is not None:

            def pred(a, b):
                return (a & b).bit_count() % q in L

        else:

            def pred(a, b):
                return (a & b).bit_count() in L

    elif kind is Kind.INTERSECTING_UNIFORM:
        r = spec.uniform_residue

        def pred(a, b):
            return (a & b).bit_count() % q != r

    elif kind is Kind.HAMMING:
        if q is not None:

            def pred(a, b):
                return (a ^ b).bit_count() % q in L

        else:

            def pred(a, b):
                return (a ^ b).bit_count() in L

    elif kind is Kind.ANTICHAIN:

        def pred(a, b):
            return a & ~b != 0 and b & ~a != 0

    else:  # pragma: no cover
        raise ValueError(f"unknown kind {kind}")
    return pred


def _build_graph(spec: ConstraintSpec) -> tuple[list[int], list[int]]:
    verts = [
        m for m in range(1 << spec.n) if _member_violation(spec, m) is None
    ]
    verts.sort(key=lambda m: (m.bit_count(), m))
    pred = _pair_predicate(spec)
    nv = len(verts)
    adj = [0] * nv
    for i in range(nv):
        a = verts[i]
        row = adj[i]
        for j in range(i + 1, nv):
            if pred(a, verts[j]):
                row |= 1 << j
                adj[j] |= 1 << i
        adj[i] = row
    return verts, adj


def _color_sort(P: int, adj: list[int]) -> tuple[list[int], list[int]]:
    """Greedy coloring of the candidate set; returns vertices in coloring
    order with their color numbers (a clique-size upper bound)."""
    order: list[int] = []
    bounds: list[int] = []
    color = 0
    rest = P
    while rest:
        color += 1
        avail = rest
        while avail:
            v = (avail & -avail).bit_length() - 1
            bit = 1 << v
            avail &= ~adj[v] & ~bit
            rest &= ~bit
            order.append(v)
            bounds.append(color)
    return order, bounds


def _greedy_clique(nv: int, adj: list[int]) -> list[int]:
    best: list[int] = []
    starts = sorted(range(nv), key=lambda v: -adj[v].bit_count())[:3]
    for start in starts:
        clique = [start]
        cand = adj[start]
        while cand:
            pick, pick_deg = -1, -1
            c = cand
            while c:
                u = (c & -c).bit_length() - 1
                c &= c - 1
                deg = (adj[u] & cand).bit_count()
                if deg > pick_deg:
                    pick, pick_deg = u, deg
            clique.append(pick)
            cand &= adj[pick]
        if len(clique) > len(best):
            best = clique
    return best


def _components(nv: int, adj: list[int]) -> list[int]:
    """Connected components of the compatibility graph as vertex bitmasks,
    ordered by smallest contained vertex."""
    seen = 0
    comps = []
    for v in range(nv):
        if seen >> v & 1:
            continue
        comp = 1 << v
        frontier = comp
        while frontier:
            grown = 0
            f = frontier
            while f:
                u = (f & -f).bit_length() - 1
                f &= f - 1
                grown |= adj[u]
            frontier = grown & ~comp
            comp |= grown
        comps.append(comp)
        seen |= comp
    return comps


class _CliqueSearch:
    def __init__(self, adj: list[int], node_budget: int | None):
        self.adj = adj
        self.nadj = [~a for a in adj]
        self.budget = node_budget
        self.nodes = 0
        self.exact = True
        self.best_size = 0
        self.best: list[int] = []

    def run(self, seed: list[int]) -> None:
        if seed:
            self.best_size = len(seed)
            self.best = list(seed)
        # components are independent subproblems; the shared incumbent
        # prunes the later ones
        for comp in _components(len(self.adj), self.adj):
            if comp.bit_count() > self.best_size:
                self._expand([], comp)
            if not self.exact:
                break

    def _expand(self, stack: list[int], P: int) -> bool:
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            self.exact = False
            return True
        adj = self.adj
        nadj = self.nadj
        depth = len(stack)
        order: list[int] = []
        bounds: list[int] = []
        rest = P
        color = 0
        while rest:
            color += 1
            avail = rest
            while avail:
                low = avail & -avail
                v = low.bit_length() - 1
                avail &= nadj[v] & ~low
                rest &= ~low
                order.append(v)
                bounds.append(color)
        for i in range(len(order) - 1, -1, -1):
            if depth + bounds[i] <= self.best_size:
                return False
            v = order[i]
            stack.append(v)
            newP = P & adj[v]
            if newP:
                if self._expand(stack, newP):
                    stack.pop()
                    return True
            elif depth + 1 > self.best_size:
                self.best_size = depth + 1
                self.best = stack.copy()
            stack.pop()
            P &= ~(1 << v)
        return False

    def has_clique(self, P: int, target: int) -> bool:
        """Decision search: does P induce a clique of size >= target?"""
        if target <= 0:
            return True
        if P.bit_count() < target:
            return False
        self.nodes += 1
        order, bounds = _color_sort(P, self.adj)
        if bounds[-1] < target:
            return False
        for i in range(len(order) - 1, -1, -1):
            if bounds[i] < target:
                return False
            v = order[i]
            if self.has_clique(P & self.adj[v], target - 1):
                return True
            P &= ~(1 << v)
        return False


def _lex_smallest_optimum(search: _CliqueSearch, nv: int, omega: int) -> list[int]:
    chosen: list[int] = []
    P = (1 << nv) - 1
    for v in range(nv):
        if len(chosen) == omega:
            break
        if not P >> v & 1:
            continue
        newP = P & search.adj[v]
        if search.has_clique(newP, omega - len(chosen) - 1):
            chosen.append(v)
            P = newP
    if len(chosen) != omega:  # pragma: no cover
        raise AssertionError("lexicographic restoration failed")
    return chosen


def max_family(
    spec: ConstraintSpec,
    node_budget: int | None = None,
    n_limit: int = DEFAULT_N_LIMIT,
) -> SearchResult:
    """Exact maximum family size and a canonical witness.

    Vertices are admissible subsets ordered by (size, numeric value); the
    witness is the lexicographically smallest maximum clique under that
    order.  A node budget (argument or QSPERNER_NODE_BUDGET) truncates the
    search, flagging the result as inexact with the best clique found.
    """
    if spec.n > n_limit:
        raise ValueError(f"n = {spec.n} exceeds the search limit {n_limit}")
    if node_budget is None:
        env = os.environ.get(NODE_BUDGET_ENV)
        node_budget = int(env) if env else None
    verts, adj = _build_graph(spec)
    nv = len(verts)
    if nv == 0:
        return SearchResult(0, SetFamily(spec.n, ()), 0, True)
    search = _CliqueSearch(adj, node_budget)
    search.run(_greedy_clique(nv, adj))
    if search.exact:
        witness_idx = _lex_smallest_optimum(search, nv, search.best_size)
    else:
        witness_idx = search.best
    witness = SetFamily(spec.n, tuple(verts[i] for i in witness_idx))
    return SearchResult(search.best_size, witness, search.nodes, search.exact)
