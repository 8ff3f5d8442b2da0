"""The table algebra Tab(G): schemas, natural join, order, right multiplication
and diagonals over a finite nonempty ground set.

The empty table is the bottom element and carries the symbolic ALL schema;
the one-row table {<>} is the top element.  Tables are immutable and compare
structurally.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .orbital import OrbitalInstance, SampleConfig
from .transforms import ALL, FPTransform, schema_is_all
from .tuples import EMPTY_TUPLE, NTuple, act, atom_key, merge, restrict_tuple


@dataclass(frozen=True)
class Table:
    """A set of named tuples sharing one schema over a ground set."""

    ground: frozenset
    schema: object  # frozenset[int] or ALL
    rows: frozenset

    def __post_init__(self):
        if not self.ground:
            raise ValueError("ground set must be nonempty")
        if schema_is_all(self.schema):
            if self.rows:
                raise ValueError("ALL schema is reserved for the empty table")
            return
        if not self.rows:
            raise ValueError("the empty table must carry the ALL schema")
        for r in self.rows:
            if r.df != self.schema:
                raise ValueError(f"row {r} does not match schema {sorted(self.schema)}")
            if not r.rng <= self.ground:
                raise ValueError(f"row {r} uses atoms outside the ground set")

    @classmethod
    def from_rows(cls, ground, rows) -> "Table":
        ground = frozenset(ground)
        rows = frozenset(rows)
        if not rows:
            return cls(ground, ALL, rows)
        schema = next(iter(rows)).df
        return cls(ground, schema, rows)

    def sorted_rows(self) -> list:
        return sorted(self.rows, key=lambda r: r.sort_key())

    def sort_key(self):
        s = (1,) if schema_is_all(self.schema) else (0, tuple(sorted(self.schema)))
        return s + (tuple(r.sort_key() for r in self.sorted_rows()),)

    def __repr__(self):
        if schema_is_all(self.schema):
            return "Table[ALL]{}"
        body = ", ".join(repr(r) for r in self.sorted_rows())
        return "Table{" + body + "}"


def schema_of(T: Table):
    return T.schema


def bottom(G) -> Table:
    return Table(frozenset(G), ALL, frozenset())


def top(G) -> Table:
    return Table.from_rows(G, {EMPTY_TUPLE})


def _check_same_ground(T1: Table, T2: Table):
    if T1.ground != T2.ground:
        raise ValueError("ground-set mismatch")


def natural_join(T1: Table, T2: Table) -> Table:
    """All tuples over the union schema whose restrictions lie in each operand."""
    _check_same_ground(T1, T2)
    if not T1.rows or not T2.rows:
        return bottom(T1.ground)
    if len(T2.rows) < len(T1.rows):
        T1, T2 = T2, T1
    shared = T1.schema & T2.schema
    buckets = {}
    for r in T2.rows:
        buckets.setdefault(restrict_tuple(r, shared), []).append(r)
    out = set()
    for r1 in T1.rows:
        for r2 in buckets.get(restrict_tuple(r1, shared), ()):
            out.add(merge(r1, r2))
    return Table.from_rows(T1.ground, out)


def leq(T1: Table, T2: Table) -> bool:
    """Projection-subset order; coincides with T1 ⋈ T2 = T1."""
    _check_same_ground(T1, T2)
    if not T1.rows:
        return True
    if not T2.rows:
        return False
    return all(restrict_tuple(r, T2.schema) in T2.rows for r in T1.rows)


def act_table(T: Table, lam: FPTransform) -> Table:
    """Rowwise right multiplication T·lam."""
    if not T.rows:
        return bottom(T.ground)
    return Table.from_rows(T.ground, {act(r, lam) for r in T.rows})


def diagonal(x: int, y: int, G) -> Table:
    """The table of tuples over {x, y} with equal values at x and y."""
    G = frozenset(G)
    rows = {NTuple.of({x: g, y: g}) for g in G}
    return Table.from_rows(G, rows)


def all_rows(G, X):
    """All named tuples with domain of definition X and values in G."""
    cols = sorted(X)
    atoms = sorted(G, key=atom_key)
    for combo in itertools.product(atoms, repeat=len(cols)):
        yield NTuple.of(dict(zip(cols, combo)))


def tables_with_schema(G, X):
    """All tables with schema exactly X (for X = ∅ only the top element)."""
    rows = list(all_rows(G, X))
    for k in range(1, len(rows) + 1):
        for combo in itertools.combinations(rows, k):
            yield Table.from_rows(G, combo)


def enumerate_tables(G, schemas):
    """All distinct tables whose schema is one of the given finite var sets,
    plus the empty table; deterministic order."""
    out = [bottom(G)]
    for X in schemas:
        out.extend(tables_with_schema(G, X))
    out.sort(key=Table.sort_key)
    return out


def subsets(items):
    items = list(items)
    for k in range(len(items) + 1):
        yield from (frozenset(c) for c in itertools.combinations(items, k))


class TableAlgebra(OrbitalInstance):
    """Tab(G) packaged as an orbital-semilattice instance."""

    def __init__(self, ground):
        ground = frozenset(ground)
        if not ground:
            raise ValueError("ground set must be nonempty")
        self.ground = ground

    def __repr__(self):
        atoms = ",".join(str(a) for a in sorted(self.ground, key=atom_key))
        return f"Tab({{{atoms}}})"

    def meet(self, u, v):
        return natural_join(u, v)

    def zero(self):
        return bottom(self.ground)

    def one(self):
        return top(self.ground)

    def act(self, u, lam):
        return act_table(u, lam)

    def diag(self, x, y):
        return diagonal(x, y, self.ground)

    def dom(self, u):
        return u.schema

    def element_pool(self, cfg: SampleConfig, rng: random.Random) -> list:
        # exhaustive over schemas with at most two window variables, sampled
        # random tables beyond
        small = [X for X in subsets(sorted(cfg.window)) if len(X) <= 2]
        pool = enumerate_tables(self.ground, small)
        seen = set(pool)
        window = sorted(cfg.window)
        atoms = sorted(self.ground, key=atom_key)
        for _ in range(cfg.element_budget):
            X = [x for x in window if rng.random() < 0.6]
            if len(X) <= 2:
                continue
            universe = list(all_rows(self.ground, X))
            rows = [r for r in universe if rng.random() < 0.5]
            if not rows:
                continue
            T = Table.from_rows(self.ground, rows)
            if T not in seen:
                seen.add(T)
                pool.append(T)
        return pool

    def elements_with_schema(self, X: frozenset):
        if not X:
            return iter([self.one()])
        return tables_with_schema(self.ground, X)
