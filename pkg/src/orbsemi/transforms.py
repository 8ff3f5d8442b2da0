"""Finite partial transformations on the variable set x1, x2, x3, ...

Variables are positive integer indices (x_i <-> i).  A transformation is a
finite partial self-map of the variables; composition is relational, so no
range-inside-domain requirement is imposed.  All values are immutable and
compare structurally.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping


class AllVars:
    """Symbolic marker for the full (infinite) variable set.

    Used as the schema of the empty table / the domain of the bottom element.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ALL"


ALL = AllVars()

#: A schema is either a finite variable set or the symbolic ALL marker.
Schema = "frozenset[int] | AllVars"


def schema_is_all(s) -> bool:
    return isinstance(s, AllVars)


def schema_subset(a, b) -> bool:
    """Subset test lifted to schemas (ALL is the largest schema)."""
    if schema_is_all(b):
        return True
    if schema_is_all(a):
        return False
    return a <= b


def schema_union(a, b):
    if schema_is_all(a) or schema_is_all(b):
        return ALL
    return a | b


def schema_intersect_window(s, window: frozenset):
    """s intersected with a finite window (ALL ∩ window = window)."""
    if schema_is_all(s):
        return frozenset(window)
    return s & window


def var_name(i: int) -> str:
    return f"x{i}"


def parse_var(text: str) -> int:
    m = re.fullmatch(r"x([1-9][0-9]*)", text.strip())
    if m is None:
        raise ValueError(f"not a variable: {text!r}")
    return int(m.group(1))


@dataclass(frozen=True)
class FPTransform:
    """A finite partial transformation, stored as sorted (source, target) pairs."""

    pairs: tuple

    def __post_init__(self):
        seen = set()
        last = 0
        for s, t in self.pairs:
            if not (isinstance(s, int) and isinstance(t, int) and s >= 1 and t >= 1):
                raise ValueError(f"bad variable pair ({s}, {t})")
            if s in seen or s < last:
                raise ValueError("pairs must be sorted and functional")
            seen.add(s)
            last = s

    @classmethod
    def of(cls, mapping: Mapping[int, int] | Iterable[tuple]) -> "FPTransform":
        items = dict(mapping).items() if isinstance(mapping, Mapping) else dict(mapping).items()
        return cls(tuple(sorted(items)))

    @property
    def mapping(self) -> dict:
        return dict(self.pairs)

    @property
    def df(self) -> frozenset:
        return frozenset(s for s, _ in self.pairs)

    @property
    def rng(self) -> frozenset:
        return frozenset(t for _, t in self.pairs)

    def __call__(self, y: int) -> int:
        for s, t in self.pairs:
            if s == y:
                return t
        raise KeyError(y)

    def get(self, y: int, default=None):
        for s, t in self.pairs:
            if s == y:
                return t
        return default

    def __repr__(self):
        return format_transform(self)


EMPTY = FPTransform(())


def partial_identity(X: Iterable[int]) -> FPTransform:
    """The identity restricted to the finite variable set X."""
    return FPTransform(tuple((x, x) for x in sorted(set(X))))


def compose(mu: FPTransform, lam: FPTransform) -> FPTransform:
    """Relational composition: (mu ∘ lam)(y) = mu(lam(y)) where both steps are defined."""
    out = {}
    mmap = mu.mapping
    for y, z in lam.pairs:
        if z in mmap:
            out[y] = mmap[z]
    return FPTransform.of(out)


def restrict(lam: FPTransform, Z: Iterable[int]) -> FPTransform:
    """lam|_Z = lam ∘ π_Z (keep sources inside Z)."""
    Z = set(Z)
    return FPTransform(tuple(p for p in lam.pairs if p[0] in Z))


def astrict(lam: FPTransform, Z: Iterable[int]) -> FPTransform:
    """lam|^Z = π_Z ∘ lam (keep targets inside Z)."""
    Z = set(Z)
    return FPTransform(tuple(p for p in lam.pairs if p[1] in Z))


def preimage(lam: FPTransform, Z: Iterable[int]) -> frozenset:
    Z = set(Z)
    return frozenset(y for y, z in lam.pairs if z in Z)


def right_inverse(f: FPTransform) -> FPTransform:
    """The right inverse f^{-r}: maps each z in rng(f) to the minimal-index y with f(y)=z."""
    out = {}
    for y, z in f.pairs:  # pairs sorted by source, so first hit is minimal
        if z not in out:
            out[z] = y
    return FPTransform.of(out)


def inverse(f: FPTransform) -> FPTransform:
    """Set-theoretic inverse; f must be injective."""
    if not is_injective(f):
        raise ValueError(f"not injective: {f}")
    return FPTransform.of({z: y for y, z in f.pairs})


def is_injective(f: FPTransform) -> bool:
    return len(f.rng) == len(f.pairs)


def is_partial_identity(f: FPTransform) -> bool:
    return all(s == t for s, t in f.pairs)


def is_folding(f: FPTransform) -> bool:
    """True iff f ∘ f = f."""
    return compose(f, f) == f


def decompose(f: FPTransform):
    """Split f into (delta, sigma, pi): a folding, a bijection and a partial identity
    with f = pi ∘ sigma ∘ delta."""
    r = right_inverse(f)
    delta = compose(r, f)
    sigma = inverse(r)
    pi = partial_identity(f.rng)
    return delta, sigma, pi


def all_transforms(sources: Iterable[int], targets: Iterable[int]) -> Iterator[FPTransform]:
    """Every transformation with df ⊆ sources and rng ⊆ targets."""
    sources = sorted(set(sources))
    targets = sorted(set(targets))
    choices = [None] + targets
    for combo in itertools.product(choices, repeat=len(sources)):
        yield FPTransform(tuple((s, t) for s, t in zip(sources, combo) if t is not None))


def format_varset(X: Iterable[int]) -> str:
    return "{" + ",".join(var_name(x) for x in sorted(set(X))) + "}"


def format_transform(f: FPTransform) -> str:
    if is_partial_identity(f):
        return "pi" + format_varset(f.df)
    return "{" + ", ".join(f"{var_name(s)}->{var_name(t)}" for s, t in f.pairs) + "}"


def parse_transform(text: str) -> FPTransform:
    """Parse the CLI text form, e.g. ``{x1->x3, x2->x3}`` or ``pi{x1,x3}``."""
    text = text.strip()
    if text.startswith("pi"):
        body = text[2:].strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise ValueError(f"bad transform: {text!r}")
        inner = body[1:-1].strip()
        if not inner:
            return EMPTY
        return partial_identity(parse_var(v) for v in inner.split(","))
    if not (text.startswith("{") and text.endswith("}")):
        raise ValueError(f"bad transform: {text!r}")
    inner = text[1:-1].strip()
    if not inner:
        return EMPTY
    out = {}
    for part in inner.split(","):
        if "->" not in part:
            raise ValueError(f"bad mapping {part!r} in {text!r}")
        src, dst = part.split("->", 1)
        s = parse_var(src)
        if s in out:
            raise ValueError(f"duplicate source {src.strip()!r} in {text!r}")
        out[s] = parse_var(dst)
    return FPTransform.of(out)
