"""Deliberately broken table-algebra variants, one per axiom.

Each mutant perturbs exactly one operation so that its targeted axiom checker
must fail with a replayable counterexample.  Because the axioms are
interdependent, a mutant may violate further axioms as well; the regression
contract is only that the targeted checker catches it.
"""

from __future__ import annotations

from .orbital import OrbitalInstance
from .tables import Table, TableAlgebra, all_rows
from .transforms import (
    FPTransform,
    is_partial_identity,
    partial_identity,
    schema_is_all,
)


class MutantAlgebra(OrbitalInstance):
    """Delegating wrapper around a base TableAlgebra."""

    mutant_id = "base"
    target_axiom = None

    def __init__(self, base: TableAlgebra):
        self.base = base
        self.ground = base.ground

    def __repr__(self):
        return f"{self.base!r}[mutant:{self.mutant_id}]"

    def meet(self, u, v):
        return self.base.meet(u, v)

    def zero(self):
        return self.base.zero()

    def one(self):
        return self.base.one()

    def act(self, u, lam):
        return self.base.act(u, lam)

    def diag(self, x, y):
        return self.base.diag(x, y)

    def dom(self, u):
        return self.base.dom(u)

    def element_pool(self, cfg, rng):
        return self.base.element_pool(cfg, rng)

    def elements_with_schema(self, X):
        return self.base.elements_with_schema(X)


class EmptyProjZero(MutantAlgebra):
    """u·π_∅ collapses to 0 instead of 1."""

    mutant_id = "empty-proj-zero"
    target_axiom = "A1"

    def act(self, u, lam):
        if not lam.pairs and u != self.base.zero():
            return self.base.zero()
        return self.base.act(u, lam)


class ZeroActTop(MutantAlgebra):
    """0·λ jumps to the top element."""

    mutant_id = "zero-act-top"
    target_axiom = "A2"

    def act(self, u, lam):
        if u == self.base.zero():
            return self.base.one()
        return self.base.act(u, lam)


class MeetIncomparableZero(MutantAlgebra):
    """Meet of incomparable elements collapses to 0 (breaks distributivity)."""

    mutant_id = "meet-incomparable-zero"
    target_axiom = "A3"

    def meet(self, u, v):
        if self.base.leq(u, v):
            return u
        if self.base.leq(v, u):
            return v
        return self.base.zero()


class ProjDropRow(MutantAlgebra):
    """Projections silently lose a row."""

    mutant_id = "proj-drop-row"
    target_axiom = "A4"

    def act(self, u, lam):
        out = self.base.act(u, lam)
        if is_partial_identity(lam) and lam.pairs and len(out.rows) > 1:
            rows = out.sorted_rows()[:-1]
            return Table.from_rows(out.ground, rows)
        return out


class ActZeroBig(MutantAlgebra):
    """Right multiplication annihilates tables with more than one row."""

    mutant_id = "act-zero-big"
    target_axiom = "A5"

    def act(self, u, lam):
        if len(u.rows) > 1:
            return self.base.zero()
        return self.base.act(u, lam)


class DiagFull(MutantAlgebra):
    """Off-diagonal d_xy inflated to the full two-column table."""

    mutant_id = "diag-full"
    target_axiom = "A6"

    def diag(self, x, y):
        if x == y:
            return self.base.diag(x, y)
        return Table.from_rows(self.ground, all_rows(self.ground, {x, y}))


class ActTrimMap(MutantAlgebra):
    """Transformations with two or more sources lose their smallest source."""

    mutant_id = "act-trim-map"
    target_axiom = "A7"

    def act(self, u, lam):
        if len(lam.pairs) >= 2:
            lam = FPTransform(lam.pairs[1:])
        return self.base.act(u, lam)


class NeutralInflate(MutantAlgebra):
    """u·π_{dom(u)} blows up to the full table over the schema."""

    mutant_id = "neutral-inflate"
    target_axiom = "A8"

    def act(self, u, lam):
        if (
            u.rows
            and not schema_is_all(u.schema)
            and lam == partial_identity(u.schema)
            and u.schema
        ):
            return Table.from_rows(self.ground, all_rows(self.ground, u.schema))
        return self.base.act(u, lam)


class DiagXXEmpty(MutantAlgebra):
    """d_xx degenerates to the empty table."""

    mutant_id = "diag-xx-empty"
    target_axiom = "A9"

    def diag(self, x, y):
        if x == y:
            return self.base.zero()
        return self.base.diag(x, y)


class DiagTop(MutantAlgebra):
    """Off-diagonal d_xy replaced by the top element."""

    mutant_id = "diag-top"
    target_axiom = "A10"

    def diag(self, x, y):
        if x != y:
            return self.base.one()
        return self.base.diag(x, y)


class DomDropMax(MutantAlgebra):
    """dom forgets the largest schema variable."""

    mutant_id = "dom-drop-max"
    target_axiom = "A11"

    def dom(self, u):
        d = self.base.dom(u)
        if not schema_is_all(d) and d:
            return d - {max(d)}
        return d


class DomTopAll(MutantAlgebra):
    """dom(1) pretends to be the infinite variable set."""

    mutant_id = "dom-top-all"
    target_axiom = "A12"

    def dom(self, u):
        from .transforms import ALL

        if u == self.base.one():
            return ALL
        return self.base.dom(u)


class DomExtraVar(MutantAlgebra):
    """dom reports one variable too many."""

    mutant_id = "dom-extra-var"
    target_axiom = "A13"

    def dom(self, u):
        d = self.base.dom(u)
        if schema_is_all(d):
            return d
        extra = 1
        while extra in d:
            extra += 1
        return d | {extra}


_MUTANT_CLASSES = [
    EmptyProjZero, ZeroActTop, MeetIncomparableZero, ProjDropRow, ActZeroBig,
    DiagFull, ActTrimMap, NeutralInflate, DiagXXEmpty, DiagTop, DomDropMax,
    DomTopAll, DomExtraVar,
]

MUTANTS = {cls.mutant_id: cls for cls in _MUTANT_CLASSES}

#: axiom id -> mutant id, for the 13/13 regression sweep
TARGETS = {cls.target_axiom: cls.mutant_id for cls in _MUTANT_CLASSES}


def make_mutant(mutant_id: str, base: TableAlgebra) -> MutantAlgebra:
    if mutant_id not in MUTANTS:
        raise ValueError(f"unknown mutant {mutant_id!r} (known: {sorted(MUTANTS)})")
    return MUTANTS[mutant_id](base)
