"""Abstract orbital-semilattice interface, the (A1)-(A13) axiom checker and the
derived-property suite.

The axioms quantify over infinite sets (all transformations, all finite variable
sets, all variables), so every check is bounded: elements come from the
instance's pool, transformations and variables from a finite window.  Sampling
is sound for refutation; exhaustion of the pool in the first quantifier position
gives small-scope confidence.  Checks are deterministic given the seed; a
failure carries a replayable counterexample.
"""

from __future__ import annotations

import random
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Optional

from .transforms import (
    EMPTY,
    FPTransform,
    all_transforms,
    astrict,
    compose,
    is_folding,
    is_injective,
    partial_identity,
    preimage,
    schema_intersect_window,
    schema_is_all,
    schema_subset,
    schema_union,
)


@dataclass
class SampleConfig:
    """Budgets for a bounded check run."""

    var_window: int = 3
    element_budget: int = 40
    transform_budget: int = 64
    seed: int = 0
    cases: int = 400

    def __post_init__(self):
        if self.var_window < 2:
            raise ValueError("var_window must be >= 2")
        if self.element_budget < 1 or self.transform_budget < 1 or self.cases < 1:
            raise ValueError("budgets must be >= 1")

    @property
    def window(self) -> frozenset:
        return frozenset(range(1, self.var_window + 1))


@dataclass
class CheckReport:
    """Outcome of one axiom/property check."""

    check_id: str
    cases_run: int = 0
    cases_applicable: int = 0
    passed: bool = True
    vacuous: bool = False
    counterexample: Optional[dict] = None
    seed: int = 0
    notes: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        status = "pass" if self.passed else "fail"
        if self.passed and self.vacuous:
            status = "vacuous"
        return {
            "id": self.check_id,
            "cases": self.cases_run,
            "applicable": self.cases_applicable,
            "status": status,
            "seed": self.seed,
            "counterexample": self.counterexample,
            "notes": self.notes,
        }

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        if self.passed and self.vacuous:
            status = "VACUOUS"
        line = f"{self.check_id}: {status} ({self.cases_applicable}/{self.cases_run} applicable cases)"
        if self.counterexample:
            line += f"\n  counterexample: {self.counterexample}"
        return line


class OrbitalInstance(ABC):
    """Interface every orbital-semilattice instance implements.

    Elements are opaque hashable values with structural equality.  ``dom``
    returns either a finite frozenset of variable indices or the ALL marker
    (only for the bottom element).
    """

    @abstractmethod
    def meet(self, u, v): ...

    @abstractmethod
    def zero(self): ...

    @abstractmethod
    def one(self): ...

    @abstractmethod
    def act(self, u, lam: FPTransform): ...

    @abstractmethod
    def diag(self, x: int, y: int): ...

    @abstractmethod
    def dom(self, u): ...

    def leq(self, u, v) -> bool:
        return self.meet(u, v) == u

    @abstractmethod
    def element_pool(self, cfg: SampleConfig, rng: random.Random) -> list:
        """Deterministic element pool: exhaustive core plus sampled extras."""

    def elements_with_schema(self, X: frozenset):
        """Enumerate elements u with dom(u) = X (needed by the representation
        construction); optional for abstract instances."""
        raise NotImplementedError


def e_diag(inst: OrbitalInstance, delta: FPTransform):
    """The delta-diagonal: meet of diag(x, delta(x)) over x in df(delta)."""
    if not is_folding(delta):
        raise ValueError(f"not a folding: {delta}")
    out = inst.one()
    for x, dx in delta.pairs:
        out = inst.meet(out, inst.diag(x, dx))
    return out


# ---------------------------------------------------------------------------
# Case generation


def _random_subset(rng: random.Random, items, p: float = 0.5) -> frozenset:
    return frozenset(i for i in items if rng.random() < p)


def _transform_pool(cfg: SampleConfig, rng: random.Random) -> list:
    window = sorted(cfg.window)
    total = (len(window) + 1) ** len(window)
    if total <= max(cfg.transform_budget, 130):
        return list(all_transforms(window, window))
    pool = [EMPTY, partial_identity(window)]
    while len(pool) < cfg.transform_budget:
        pool.append(_random_transform(rng, window))
    return pool


def _random_transform(rng: random.Random, window) -> FPTransform:
    out = {}
    for x in window:
        if rng.random() < 0.6:
            out[x] = rng.choice(window)
    return FPTransform.of(out)


def _random_folding(rng: random.Random, window) -> FPTransform:
    """A folding on the window: identity on a retract R, everything else in
    df mapped into R."""
    window = sorted(window)
    retract = [x for x in window if rng.random() < 0.5]
    if not retract:
        return EMPTY
    out = {x: x for x in retract}
    for x in window:
        if x not in out and rng.random() < 0.5:
            out[x] = rng.choice(retract)
    return FPTransform.of(out)


def _folding_onto(rng: random.Random, df: frozenset, retract: frozenset) -> FPTransform:
    out = {x: x for x in retract}
    rlist = sorted(retract)
    for x in sorted(df - retract):
        out[x] = rng.choice(rlist)
    return FPTransform.of(out)


def _random_injection(rng: random.Random, window) -> FPTransform:
    window = sorted(window)
    if rng.random() < 0.5:
        srcs = list(window)  # full permutation keeps the range condition easy to hit
    else:
        srcs = [x for x in window if rng.random() < 0.7]
    tgts = rng.sample(window, len(srcs))
    return FPTransform.of(dict(zip(srcs, tgts)))


@dataclass
class _Case:
    """One sampled valuation of the quantified variables."""

    inst: OrbitalInstance
    rng: random.Random
    window: frozenset
    elements: list
    transforms: list
    u: object = None
    v: object = None
    lam: FPTransform = EMPTY
    mu: FPTransform = EMPTY
    x: int = 1
    y: int = 1
    Y: frozenset = frozenset()

    def describe(self, **extra) -> dict:
        d = {
            "u": repr(self.u),
            "v": repr(self.v),
            "lam": repr(self.lam),
            "mu": repr(self.mu),
            "x": self.x,
            "y": self.y,
            "Y": sorted(self.Y),
        }
        d.update({k: repr(v) for k, v in extra.items()})
        return d


def _draw_case(inst, cfg, rng, elements, transforms, index) -> _Case:
    window = sorted(cfg.window)
    c = _Case(inst, rng, cfg.window, elements, transforms)
    c.u = elements[index] if index < len(elements) else rng.choice(elements)
    c.v = rng.choice(elements)
    c.lam = rng.choice(transforms)
    c.mu = rng.choice(transforms)
    c.x = rng.choice(window)
    c.y = rng.choice(window)
    c.Y = _random_subset(rng, window)
    return c


# ---------------------------------------------------------------------------
# Axiom bodies.  Each returns (applicable, ok, extra-detail).


def _ax1(c: _Case):
    inst = c.inst
    if c.u == inst.zero():
        return False, True, {}
    lhs = inst.act(c.u, EMPTY)
    return True, lhs == inst.one(), {"u*pi_empty": lhs}


def _ax2(c: _Case):
    inst = c.inst
    lhs = inst.act(inst.zero(), c.lam)
    return True, lhs == inst.zero(), {"zero*lam": lhs}


def _ax3(c: _Case):
    inst = c.inst
    du = inst.dom(c.u)
    Y = c.Y
    if not schema_is_all(du) and c.rng.random() < 0.5:
        Y = Y | du  # bias toward satisfying the hypothesis
    if not schema_subset(du, Y):
        return False, True, {}
    piY = partial_identity(Y)
    lhs = inst.act(inst.meet(c.u, c.v), piY)
    rhs = inst.meet(c.u, inst.act(c.v, piY))
    return True, lhs == rhs, {"(u^v)*piY": lhs, "u^(v*piY)": rhs, "Y_used": sorted(Y)}


def _ax4(c: _Case):
    inst = c.inst
    proj = inst.act(c.u, partial_identity(c.Y))
    return True, inst.leq(c.u, proj), {"u*piY": proj}


def _ax5(c: _Case):
    inst = c.inst
    u = inst.meet(c.u, c.v)  # guarantees u <= v
    lhs = inst.act(u, c.lam)
    rhs = inst.act(c.v, c.lam)
    return True, inst.leq(lhs, rhs), {"u_used": u, "u*lam": lhs, "v*lam": rhs}


def _ax6(c: _Case):
    inst = c.inst
    if c.x == c.y:
        return False, True, {}
    u = inst.meet(c.u, inst.diag(c.x, c.y))  # guarantees u <= d_xy
    if u == inst.zero():
        return False, True, {}
    du = inst.dom(u)
    pi = partial_identity(du - {c.y})
    rhs = inst.meet(inst.act(u, pi), inst.diag(c.x, c.y))
    return True, u == rhs, {"u_used": u, "rhs": rhs}


def _ax7(c: _Case):
    inst = c.inst
    lhs = inst.act(inst.act(c.u, c.lam), c.mu)
    rhs = inst.act(c.u, compose(c.lam, c.mu))
    return True, lhs == rhs, {"(u*lam)*mu": lhs, "u*(lam.mu)": rhs}


def _ax8(c: _Case):
    inst = c.inst
    du = inst.dom(c.u)
    if schema_is_all(du):
        return False, True, {}  # pi_var is not a finite transformation
    rhs = inst.act(c.u, partial_identity(du))
    return True, rhs == c.u, {"u*pi_dom": rhs}


def _ax9(c: _Case):
    inst = c.inst
    d = inst.diag(c.x, c.x)
    return True, d != inst.zero(), {"d_xx": d}


def _ax10(c: _Case):
    inst = c.inst
    lhs = inst.diag(c.x, c.y)
    rhs = inst.act(inst.diag(c.x, c.x), FPTransform.of({c.x: c.x, c.y: c.x}))
    return True, lhs == rhs, {"d_xy": lhs, "d_xx*(xx/xy)": rhs}


def _ax11(c: _Case):
    inst = c.inst
    if c.u == inst.zero():
        return False, True, {}
    lhs = inst.dom(inst.act(c.u, c.lam))
    rhs = preimage(c.lam, inst.dom(c.u))
    return True, lhs == rhs, {"dom(u*lam)": lhs, "lam^-1(dom u)": sorted(rhs)}


def _ax12(c: _Case):
    inst = c.inst
    if c.u == inst.zero():
        return False, True, {}
    return True, not schema_is_all(inst.dom(c.u)), {"dom(u)": inst.dom(c.u)}


def _ax13(c: _Case):
    # two-sided inclusion; the right side ranges over all of var, so the
    # reverse direction is intersected with the window
    inst = c.inst
    du = inst.dom(c.u)
    fwd_vars = c.window if schema_is_all(du) else du
    fwd = all(inst.leq(c.u, inst.diag(x, x)) for x in fwd_vars)
    below = frozenset(x for x in c.window if inst.leq(c.u, inst.diag(x, x)))
    rev = below <= schema_intersect_window(du, c.window)
    return True, fwd and rev, {"dom(u)": du, "{x in window: u<=d_xx}": sorted(below)}


_AXIOMS = {
    "A1": _ax1, "A2": _ax2, "A3": _ax3, "A4": _ax4, "A5": _ax5, "A6": _ax6,
    "A7": _ax7, "A8": _ax8, "A9": _ax9, "A10": _ax10, "A11": _ax11,
    "A12": _ax12, "A13": _ax13,
}

AXIOM_IDS = tuple(_AXIOMS)


# ---------------------------------------------------------------------------
# Derived properties: consequences of the axioms, checked so that concrete
# instances and mutants can be probed at the same scale.


def _drv_dom_antitone(c: _Case):
    inst = c.inst
    u = inst.meet(c.u, c.v)
    if not inst.leq(u, c.v):
        return False, True, {}
    ok = schema_subset(inst.dom(c.v), inst.dom(u))
    return True, ok, {"u_used": u, "dom(u)": inst.dom(u), "dom(v)": inst.dom(c.v)}


def _drv_diag_dom(c: _Case):
    inst = c.inst
    d = inst.dom(inst.diag(c.x, c.y))
    return True, d == frozenset({c.x, c.y}), {"dom(d_xy)": d}


def _drv_zero_dom_all(c: _Case):
    inst = c.inst
    return True, schema_is_all(inst.dom(inst.zero())), {"dom(0)": inst.dom(inst.zero())}


def _drv_nonzero_iff_finite_dom(c: _Case):
    inst = c.inst
    finite = not schema_is_all(inst.dom(c.u))
    return True, (c.u != inst.zero()) == finite, {"dom(u)": inst.dom(c.u)}


def _drv_one_iff_empty_dom(c: _Case):
    inst = c.inst
    empty_dom = inst.dom(c.u) == frozenset()
    return True, (c.u == inst.one()) == empty_dom, {"dom(u)": inst.dom(c.u)}


def _drv_zero_neq_one(c: _Case):
    inst = c.inst
    return True, inst.zero() != inst.one(), {}


def _drv_one_absorbs_act(c: _Case):
    inst = c.inst
    lhs = inst.act(inst.one(), c.lam)
    return True, lhs == inst.one(), {"one*lam": lhs}


def _drv_act_astrict_dom(c: _Case):
    inst = c.inst
    du = inst.dom(c.u)
    lam2 = c.lam if schema_is_all(du) else astrict(c.lam, du)
    lhs = inst.act(c.u, c.lam)
    rhs = inst.act(c.u, lam2)
    return True, lhs == rhs, {"u*lam": lhs, "u*lam|^dom": rhs}


def _drv_meet_dom_union(c: _Case):
    inst = c.inst
    w = inst.meet(c.u, c.v)
    if w == inst.zero():
        return False, True, {}
    lhs = inst.dom(w)
    rhs = schema_union(inst.dom(c.u), inst.dom(c.v))
    return True, lhs == rhs, {"dom(u^v)": lhs, "dom(u)|dom(v)": rhs}


def _drv_order_via_dom_projection(c: _Case):
    inst = c.inst
    if c.v == inst.zero():
        return False, True, {}  # pi_{dom(0)} is not finite
    pi = partial_identity(inst.dom(c.v))
    lhs = inst.leq(c.u, c.v)
    rhs = inst.leq(inst.act(c.u, pi), c.v)
    return True, lhs == rhs, {"u<=v": lhs, "u*pi_dom(v)<=v": rhs}


def _drv_injective_act_meet(c: _Case):
    inst = c.inst
    lam = _random_injection(c.rng, sorted(c.window))
    if not is_injective(lam):
        return False, True, {}
    n = c.rng.randrange(0, 4)
    vs = [c.rng.choice(c.elements) for _ in range(n)]
    doms = frozenset()
    for v in vs:
        doms = schema_union(doms, inst.dom(v))
    if not schema_subset(doms, lam.rng):
        return False, True, {}
    lhs = inst.one()
    for v in vs:
        lhs = inst.meet(lhs, v)
    lhs = inst.act(lhs, lam)
    rhs = inst.one()
    for v in vs:
        rhs = inst.meet(rhs, inst.act(v, lam))
    return True, lhs == rhs, {"vs": [repr(v) for v in vs], "lam_used": lam,
                              "(meet)*lam": lhs, "meet(*lam)": rhs}


def _drv_diag_rename_single(c: _Case):
    inst = c.inst
    lhs = inst.act(inst.diag(c.x, c.x), FPTransform.of({c.y: c.x}))
    rhs = inst.diag(c.y, c.y)
    return True, lhs == rhs, {"d_yy*(y/z)": lhs, "d_zz": rhs}


def _drv_diag_rename_pair(c: _Case):
    inst = c.inst
    window = sorted(c.window)
    z1, z2 = c.rng.sample(window, 2)
    y1, y2 = c.rng.sample(window, 2)
    lam = FPTransform.of({y1: z1, y2: z2})
    lhs = inst.act(inst.diag(z1, z2), lam)
    rhs = inst.diag(y1, y2)
    return True, lhs == rhs, {"z1": z1, "z2": z2, "y1": y1, "y2": y2,
                              "d_z1z2*lam": lhs, "d_y1y2": rhs}


def _drv_diag_symmetric(c: _Case):
    inst = c.inst
    return True, inst.diag(c.x, c.y) == inst.diag(c.y, c.x), {}


def _drv_folding_below_diagonal(c: _Case):
    inst = c.inst
    dv = inst.dom(c.v)
    if schema_is_all(dv):
        delta = _random_folding(c.rng, sorted(c.window))
    else:
        retract = frozenset(x for x in dv if c.rng.random() < 0.7)
        df = retract | _random_subset(c.rng, sorted(c.window))
        if not retract:
            delta = EMPTY
        else:
            delta = _folding_onto(c.rng, df, retract)
    if not schema_subset(delta.rng, dv):
        return False, True, {}
    lhs = inst.act(c.v, delta)
    e = e_diag(inst, delta)
    return True, inst.leq(lhs, e), {"delta": delta, "v*delta": lhs, "e_delta": e}


def _duplication_setup(c: _Case):
    """Common hypothesis generator for the duplication properties: a folding
    delta and v != 0 with df(delta) = dom(v) and v <= e_delta."""
    inst = c.inst
    du = inst.dom(c.u)
    if schema_is_all(du) or not du:
        return None
    retract = frozenset(x for x in du if c.rng.random() < 0.6) or frozenset({min(du)})
    delta = _folding_onto(c.rng, du, retract)
    e = e_diag(inst, delta)
    v = e if c.rng.random() < 0.3 else inst.meet(c.u, e)
    if v == inst.zero() or inst.dom(v) != delta.df:
        return None
    return delta, e, v


def _drv_duplication_meet(c: _Case):
    inst = c.inst
    setup = _duplication_setup(c)
    if setup is None:
        return False, True, {}
    delta, e, v = setup
    rhs = inst.meet(inst.act(v, partial_identity(delta.rng)), e)
    return True, v == rhs, {"delta": delta, "v_used": v, "rhs": rhs}


def _drv_duplication_fixed(c: _Case):
    inst = c.inst
    setup = _duplication_setup(c)
    if setup is None:
        return False, True, {}
    delta, _, v = setup
    rhs = inst.act(v, delta)
    return True, v == rhs, {"delta": delta, "v_used": v, "v*delta": rhs}


_DERIVED = {
    "dom-antitone": _drv_dom_antitone,
    "diag-dom": _drv_diag_dom,
    "zero-dom-all": _drv_zero_dom_all,
    "nonzero-iff-finite-dom": _drv_nonzero_iff_finite_dom,
    "one-iff-empty-dom": _drv_one_iff_empty_dom,
    "zero-neq-one": _drv_zero_neq_one,
    "one-absorbs-act": _drv_one_absorbs_act,
    "act-astrict-dom": _drv_act_astrict_dom,
    "meet-dom-union": _drv_meet_dom_union,
    "order-via-dom-projection": _drv_order_via_dom_projection,
    "injective-act-meet": _drv_injective_act_meet,
    "diag-rename-single": _drv_diag_rename_single,
    "diag-rename-pair": _drv_diag_rename_pair,
    "diag-symmetric": _drv_diag_symmetric,
    "folding-below-diagonal": _drv_folding_below_diagonal,
    "duplication-meet": _drv_duplication_meet,
    "duplication-fixed": _drv_duplication_fixed,
}

DERIVED_IDS = tuple(_DERIVED)


def _run_check(inst, check_id, body, cfg: SampleConfig) -> CheckReport:
    rng = random.Random(cfg.seed)
    elements = inst.element_pool(cfg, rng)
    transforms = _transform_pool(cfg, rng)
    report = CheckReport(check_id=check_id, seed=cfg.seed)
    cases = max(cfg.cases, len(elements))
    for i in range(cases):
        case = _draw_case(inst, cfg, rng, elements, transforms, i)
        applicable, ok, extra = body(case)
        report.cases_run += 1
        if not applicable:
            continue
        report.cases_applicable += 1
        if not ok:
            report.passed = False
            report.counterexample = dict(case.describe(**extra), case_index=i)
            break
    report.vacuous = report.cases_applicable == 0
    return report


def check_axiom(inst: OrbitalInstance, axiom_id: str, cfg: SampleConfig) -> CheckReport:
    """Check one of (A1)-(A13) on sampled cases from the window."""
    if axiom_id not in _AXIOMS:
        raise ValueError(f"unknown axiom id {axiom_id!r}")
    return _run_check(inst, axiom_id, _AXIOMS[axiom_id], cfg)


def check_derived(inst: OrbitalInstance, prop_id: str, cfg: SampleConfig) -> CheckReport:
    """Check one of the derived properties (see DERIVED_IDS)."""
    if prop_id not in _DERIVED:
        raise ValueError(f"unknown property id {prop_id!r}")
    return _run_check(inst, prop_id, _DERIVED[prop_id], cfg)


def check_all_axioms(inst: OrbitalInstance, cfg: SampleConfig) -> list:
    return [check_axiom(inst, a, cfg) for a in AXIOM_IDS]


def check_all_derived(inst: OrbitalInstance, cfg: SampleConfig) -> list:
    return [check_derived(inst, p, cfg) for p in DERIVED_IDS]
