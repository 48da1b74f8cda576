"""Equivariant blowups as rewriting rules on fixed-locus configurations.

A blowup center is described only by the data the rules read: which fixed
component it touches, genera, degrees and local weights.  Each rule returns
the new configuration, including the atoms the exceptional divisor adds to the
ledger, and a case label naming the branch it took.

Weights are characters mod ``p``; ``-a`` below means ``(-a) % p``.
"""

from __future__ import annotations

import dataclasses
import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from . import atoms as at
from .invariants import InvariantKind, InvariantMismatch, evaluate, integer_kinds
from .locus import (
    P1_TIMES_CURVE,
    PLANE,
    Configuration,
    CurveComponent,
    PointComponent,
    SurfaceComponent,
    validate,
)

GENUS_RANGE = range(0, 4)
SPLIT_RANGE = range(-2, 3)
SELF_INT_RANGE = range(-3, 4)
NORMAL_DEG_RANGE = range(-1, 2)
COUNT_RANGE = range(1, 4)

CENTER_KINDS = (
    "free_orbit_point",
    "free_orbit_curve",
    "isolated_fixed_point",
    "invariant_curve_nonfixed",
    "point_on_fixed_curve",
    "fixed_curve",
    "curve_transverse_to_fixed_curve",
    "point_on_fixed_surface",
    "curve_transverse_to_fixed_surface",
    "curve_in_fixed_surface",
)


class InadmissibleCenter(ValueError):
    pass


@dataclass(frozen=True)
class BlowupCenter:
    """A symbolic blowup center.

    ``index`` points into the component list the kind refers to (points,
    curves or surfaces).  ``slot`` selects which normal weight of a fixed
    curve the transverse curve is tangent to.  ``incidences`` lists
    ``(point index, tangent slot)`` pairs where a non-fixed invariant curve
    passes through isolated fixed points.  ``split`` is the degree of the
    line subbundle of weight ``weights[0]`` when a fixed curve with distinct
    weights is blown up.
    """

    kind: str
    index: int | None = None
    genus: int | None = None
    split: int | None = None
    self_int: int | None = None
    normal_deg: int | None = None
    count: int | None = None
    slot: int | None = None
    incidences: tuple[tuple[int, int], ...] = ()
    label: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in CENTER_KINDS:
            raise InadmissibleCenter(f"unknown center kind {self.kind!r}")
        object.__setattr__(self, "incidences", tuple(tuple(x) for x in self.incidences))

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if f.name == "kind" or v is None or v == ():
                continue
            out[f.name] = [list(x) for x in v] if f.name == "incidences" else v
        return out

    @classmethod
    def from_json(cls, data: dict) -> "BlowupCenter":
        known = {f.name for f in dataclasses.fields(cls)}
        extra = set(data) - known
        if extra:
            raise InadmissibleCenter(f"unknown center fields {sorted(extra)}")
        if "kind" not in data:
            raise InadmissibleCenter("center needs a 'kind'")
        kw = dict(data)
        if "incidences" in kw:
            kw["incidences"] = tuple(tuple(int(v) for v in x) for x in kw["incidences"])
        return cls(**kw)


@dataclass(frozen=True)
class BlowupReport:
    before: Configuration
    after: Configuration
    center: BlowupCenter
    case_label: str
    deltas: dict[str, int] = field(compare=False)
    subcases: tuple[str, ...] = ()

    @property
    def is_invariant(self) -> bool:
        return not any(self.deltas.values())


RuleResult = tuple[Configuration, str, tuple[str, ...]]
Rule = Callable[[Configuration, BlowupCenter], RuleResult]


def _neg(a: int, p: int) -> int:
    return (-a) % p


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise InadmissibleCenter(msg)


def _component(seq: tuple, index: int | None, what: str):
    _need(index is not None, f"{what} index is required")
    _need(0 <= index < len(seq), f"{what} index {index} out of range (have {len(seq)})")
    return seq[index]


def _without(seq: tuple, i: int) -> tuple:
    return seq[:i] + seq[i + 1:]


def _replace_at(seq: tuple, i: int, item) -> tuple:
    return seq[:i] + (item,) + seq[i + 1:]


def _genus(center: BlowupCenter) -> int:
    _need(center.genus is not None, "genus is required")
    _need(center.genus >= 0, f"genus must be nonnegative, got {center.genus}")
    return center.genus


def _points(k: int) -> tuple[at.AtomRecord, ...]:
    return tuple(at.trivial_point() for _ in range(k))


def _require_dim(c: Configuration, dim: int, kind: str) -> None:
    _need(c.dim == dim, f"{kind} centers need dim={dim}, configuration has dim={c.dim}")


# -- rules shared by surfaces and threefolds ---------------------------------


def rule_free_orbit_point(c: Configuration, center: BlowupCenter) -> RuleResult:
    # an orbit of p points adds dim-1 free orbit atoms, one per new class
    added = tuple(at.free_orbit_point(c.p) for _ in range(c.dim - 1))
    return c.replace(atoms=c.atoms + added), "Bl0-a", ()


def rule_isolated_fixed_point(c: Configuration, center: BlowupCenter) -> RuleResult:
    pt = _component(c.points, center.index, "point")
    p = c.p
    rest = _without(c.points, center.index)
    if c.dim == 2:
        a, b = pt.weights
        if a == b:
            new = CurveComponent(0, (a,), -1)
            cfg = c.replace(points=rest, curves=c.curves + (new,), atoms=c.atoms + _points(1))
            return cfg, "surface point, a=b", ()
        pts = (PointComponent((a, (b - a) % p)), PointComponent((b, (a - b) % p)))
        return c.replace(points=rest + pts, atoms=c.atoms + _points(1)), "surface point, a≠b", ()

    ws = pt.weights
    atoms = c.atoms + _points(2)
    distinct = sorted(set(ws))
    if len(distinct) == 3:
        a, b, cc = ws
        pts = (
            PointComponent((a, (b - a) % p, (cc - a) % p)),
            PointComponent((b, (a - b) % p, (cc - b) % p)),
            PointComponent((cc, (a - cc) % p, (b - cc) % p)),
        )
        return c.replace(points=rest + pts, atoms=atoms), "Bl0-b, a≠b≠c", ()
    if len(distinct) == 2:
        a = next(w for w in ws if ws.count(w) == 2)
        cc = next(w for w in ws if ws.count(w) == 1)
        line = CurveComponent(0, (a, (cc - a) % p), 0)
        point = PointComponent((cc, (a - cc) % p, (a - cc) % p))
        cfg = c.replace(points=rest + (point,), curves=c.curves + (line,), atoms=atoms)
        return cfg, "Bl0-b, a=b≠c", ()
    a = ws[0]
    plane = SurfaceComponent(a, 0, 3, PLANE)
    return c.replace(points=rest, surfaces=c.surfaces + (plane,), atoms=atoms), "Bl0-b, a=b=c", ()


def rule_point_on_fixed_curve(c: Configuration, center: BlowupCenter) -> RuleResult:
    cv = _component(c.curves, center.index, "curve")
    p = c.p
    if c.dim == 2:
        (a,) = cv.weights
        moved = dataclasses.replace(cv, d=cv.d - 1)
        cfg = c.replace(
            points=c.points + (PointComponent((a, _neg(a, p))),),
            curves=_replace_at(c.curves, center.index, moved),
            atoms=c.atoms + _points(1),
        )
        return cfg, "surface point on fixed curve", ()
    a, b = cv.weights
    moved = dataclasses.replace(cv, d=cv.d - 2)
    curves = _replace_at(c.curves, center.index, moved)
    atoms = c.atoms + _points(2)
    if a != b:
        pts = (
            PointComponent((a, _neg(a, p), (b - a) % p)),
            PointComponent((b, _neg(b, p), (a - b) % p)),
        )
        return c.replace(points=c.points + pts, curves=curves, atoms=atoms), "point on fixed curve, a≠b", ()
    line = CurveComponent(0, (a, _neg(a, p)), 0)
    return c.replace(curves=curves + (line,), atoms=atoms), "point on fixed curve, a=b", ()


# -- threefold-only rules ----------------------------------------------------


def rule_free_orbit_curve(c: Configuration, center: BlowupCenter) -> RuleResult:
    _require_dim(c, 3, center.kind)
    g = _genus(center)
    if g == 0:
        added = (at.free_orbit_point(c.p), at.free_orbit_point(c.p))
        return c.replace(atoms=c.atoms + added), "Bl3-a, g=0", ()
    return c.replace(atoms=c.atoms + (at.free_orbit_curve(c.p, g),)), "Bl3-a, g≥1", ()


def _nonfixed_curve_atoms(c: Configuration, g: int) -> tuple[at.AtomRecord, ...]:
    return _points(2) if g == 0 else (at.nontrivial_curve(g),)


def rule_invariant_curve_nonfixed(c: Configuration, center: BlowupCenter) -> RuleResult:
    _require_dim(c, 3, center.kind)
    g = _genus(center)
    _need(len(center.incidences) > 0, "an invariant non-fixed curve needs at least one fixed-point incidence")
    idx = [i for i, _ in center.incidences]
    _need(len(set(idx)) == len(idx), "each fixed point can be passed through once")
    p = c.p
    new_points: list[PointComponent] = []
    new_curves: list[CurveComponent] = []
    subcases: list[str] = []
    for i, slot in center.incidences:
        pt = _component(c.points, i, "point")
        _need(slot in (0, 1, 2), f"tangent slot {slot} must be 0, 1 or 2")
        ws = list(pt.weights)
        a = ws.pop(slot)
        b, cc = ws
        if b == cc:
            new_curves.append(CurveComponent(0, (a, b), -1))
            subcases.append("b=c≠0")
        else:
            new_points.append(PointComponent((a, b, (cc - b) % p)))
            new_points.append(PointComponent((a, cc, (b - cc) % p)))
            subcases.append("0≠b≠c≠0")
    keep = tuple(pt for i, pt in enumerate(c.points) if i not in set(idx))
    cfg = c.replace(
        points=keep + tuple(new_points),
        curves=c.curves + tuple(new_curves),
        atoms=c.atoms + _nonfixed_curve_atoms(c, g),
    )
    label = "Bl3-b, " + "; ".join(sorted(set(subcases)))
    return cfg, label, tuple(subcases)


def rule_fixed_curve(c: Configuration, center: BlowupCenter) -> RuleResult:
    _require_dim(c, 3, center.kind)
    cv = _component(c.curves, center.index, "curve")
    a, b = cv.weights
    g = cv.genus
    rest = _without(c.curves, center.index)
    added = _points(2) if g == 0 else (at.trivial_curve(g, cv.isogeny_label),)
    atoms = c.atoms + added
    head = "Bl1-0" if g == 0 else "Bl1-1"
    if a != b:
        _need(center.split is not None, "blowing up a curve with distinct weights needs 'split'")
        d1 = center.split
        d2 = cv.d - d1
        c1 = CurveComponent(g, (a, (b - a) % c.p), d2, cv.isogeny_label)
        c2 = CurveComponent(g, (b, (a - b) % c.p), d1, cv.isogeny_label)
        return c.replace(curves=rest + (c1, c2), atoms=atoms), f"{head}, a≠b", ()
    _need(center.split is None, "'split' only applies to curves with distinct weights")
    surf = SurfaceComponent(a, g, 2 - 2 * g - cv.d, P1_TIMES_CURVE, cv.isogeny_label)
    return c.replace(curves=rest, surfaces=c.surfaces + (surf,), atoms=atoms), f"{head}, a=b", ()


def rule_curve_transverse_to_fixed_curve(c: Configuration, center: BlowupCenter) -> RuleResult:
    _require_dim(c, 3, center.kind)
    cv = _component(c.curves, center.index, "curve")
    g = _genus(center)
    _need(center.slot in (0, 1), f"normal slot must be 0 or 1, got {center.slot}")
    n = 1 if center.count is None else center.count
    _need(n >= 1, "intersection count must be positive")
    a = cv.weights[center.slot]
    b = cv.weights[1 - center.slot]
    pts = tuple(PointComponent((a, b, _neg(b, c.p))) for _ in range(n))
    moved = dataclasses.replace(cv, d=cv.d - n)
    cfg = c.replace(
        points=c.points + pts,
        curves=_replace_at(c.curves, center.index, moved),
        atoms=c.atoms + _nonfixed_curve_atoms(c, g),
    )
    return cfg, "Bl3-b, b=0, c≠0", ("b=0, c≠0",) * n


def rule_point_on_fixed_surface(c: Configuration, center: BlowupCenter) -> RuleResult:
    _require_dim(c, 3, center.kind)
    sf = _component(c.surfaces, center.index, "surface")
    a = sf.weight
    moved = dataclasses.replace(sf, k_dot_n=sf.k_dot_n + 1)
    cfg = c.replace(
        points=c.points + (PointComponent((a, _neg(a, c.p), _neg(a, c.p))),),
        surfaces=_replace_at(c.surfaces, center.index, moved),
        atoms=c.atoms + _points(2),
    )
    return cfg, "point on fixed surface", ()


def rule_curve_transverse_to_fixed_surface(c: Configuration, center: BlowupCenter) -> RuleResult:
    _require_dim(c, 3, center.kind)
    _component(c.surfaces, center.index, "surface")
    g = _genus(center)
    n = 1 if center.count is None else center.count
    _need(n >= 1, "intersection count must be positive")
    cfg = c.replace(atoms=c.atoms + _nonfixed_curve_atoms(c, g))
    return cfg, "Bl3-b, b=c=0", ("b=c=0",) * n


def rule_curve_in_fixed_surface(c: Configuration, center: BlowupCenter) -> RuleResult:
    _require_dim(c, 3, center.kind)
    sf = _component(c.surfaces, center.index, "surface")
    h = _genus(center)
    _need(center.self_int is not None, "curve_in_fixed_surface needs 'self_int'")
    _need(center.label is None or h >= 1, "isogeny label on a rational curve")
    s = center.self_int
    a = sf.weight
    # adjunction on S: K_S.C = 2h - 2 - C.C, and the new K.N is K_S.(N - C)
    moved = dataclasses.replace(sf, k_dot_n=sf.k_dot_n - (2 * h - 2 - s))
    new = CurveComponent(h, (a, _neg(a, c.p)), s, center.label)
    added = _points(2) if h == 0 else (at.trivial_curve(h, center.label),)
    cfg = c.replace(
        curves=c.curves + (new,),
        surfaces=_replace_at(c.surfaces, center.index, moved),
        atoms=c.atoms + added,
    )
    return cfg, "Bl2-0" if h == 0 else "Bl2-1", ()


RULES: dict[str, Rule] = {
    "free_orbit_point": rule_free_orbit_point,
    "free_orbit_curve": rule_free_orbit_curve,
    "isolated_fixed_point": rule_isolated_fixed_point,
    "invariant_curve_nonfixed": rule_invariant_curve_nonfixed,
    "point_on_fixed_curve": rule_point_on_fixed_curve,
    "fixed_curve": rule_fixed_curve,
    "curve_transverse_to_fixed_curve": rule_curve_transverse_to_fixed_curve,
    "point_on_fixed_surface": rule_point_on_fixed_surface,
    "curve_transverse_to_fixed_surface": rule_curve_transverse_to_fixed_surface,
    "curve_in_fixed_surface": rule_curve_in_fixed_surface,
}


def _distinct_slots(ws: tuple[int, ...]) -> list[int]:
    seen: dict[int, int] = {}
    for i, w in enumerate(ws):
        seen.setdefault(w, i)
    return sorted(seen.values())


def admissible_kinds(c: Configuration) -> list[str]:
    """Center kinds with at least one admissible center on ``c``."""
    if c.dim == 2:
        kinds = ["free_orbit_point"]
        kinds += ["isolated_fixed_point"] if c.points else []
        kinds += ["point_on_fixed_curve"] if c.curves else []
        return kinds
    have = {
        "free_orbit_point": True,
        "free_orbit_curve": True,
        "isolated_fixed_point": bool(c.points),
        "invariant_curve_nonfixed": bool(c.points),
        "point_on_fixed_curve": bool(c.curves),
        "fixed_curve": bool(c.curves),
        "curve_transverse_to_fixed_curve": bool(c.curves),
        "point_on_fixed_surface": bool(c.surfaces),
        "curve_transverse_to_fixed_surface": bool(c.surfaces),
        "curve_in_fixed_surface": bool(c.surfaces),
    }
    return [k for k in CENTER_KINDS if have[k]]


def centers_of_kind(c: Configuration, kind: str, max_incidences: int = 1) -> Iterator[BlowupCenter]:
    B = BlowupCenter
    if kind == "free_orbit_point":
        yield B(kind)
    elif kind == "free_orbit_curve":
        yield from (B(kind, genus=g) for g in GENUS_RANGE)
    elif kind == "isolated_fixed_point":
        yield from (B(kind, index=i) for i in range(len(c.points)))
    elif kind == "invariant_curve_nonfixed":
        singles = [(i, s) for i, pt in enumerate(c.points) for s in _distinct_slots(pt.weights)]
        for k in range(1, max_incidences + 1):
            for combo in itertools.combinations(singles, k):
                if len({i for i, _ in combo}) == k:
                    yield from (B(kind, genus=g, incidences=combo) for g in GENUS_RANGE)
    elif kind == "point_on_fixed_curve":
        yield from (B(kind, index=j) for j in range(len(c.curves)))
    elif kind == "fixed_curve":
        for j, cv in enumerate(c.curves):
            if cv.weights[0] != cv.weights[1]:
                yield from (B(kind, index=j, split=d1) for d1 in SPLIT_RANGE)
            else:
                yield B(kind, index=j)
    elif kind == "curve_transverse_to_fixed_curve":
        for j, cv in enumerate(c.curves):
            for s in _distinct_slots(cv.weights):
                for g in GENUS_RANGE:
                    yield from (B(kind, index=j, slot=s, genus=g, count=n) for n in COUNT_RANGE)
    elif kind == "point_on_fixed_surface":
        yield from (B(kind, index=k) for k in range(len(c.surfaces)))
    elif kind == "curve_transverse_to_fixed_surface":
        for k in range(len(c.surfaces)):
            for g in GENUS_RANGE:
                yield from (B(kind, index=k, genus=g, count=n) for n in COUNT_RANGE)
    elif kind == "curve_in_fixed_surface":
        for k, sf in enumerate(c.surfaces):
            for h in GENUS_RANGE:
                labels = [None]
                if sf.isogeny_label is not None and h == sf.ruling_genus:
                    labels.append(sf.isogeny_label)
                for lab in labels:
                    for s in SELF_INT_RANGE:
                        yield from (
                            B(kind, index=k, genus=h, self_int=s, normal_deg=nd, label=lab)
                            for nd in NORMAL_DEG_RANGE
                        )
    else:
        raise InadmissibleCenter(f"unknown center kind {kind!r}")


def admissible_centers(c: Configuration, max_incidences: int = 1) -> list[BlowupCenter]:
    """Every applicable center with small parameter values, grouped by kind.

    Slots whose weights coincide give the same outcome, so only the first of
    each is listed.  Non-fixed invariant curves through several isolated
    points are listed up to ``max_incidences`` points.
    """
    return [ctr for kind in admissible_kinds(c) for ctr in centers_of_kind(c, kind, max_incidences)]


def blowup(c: Configuration, center: BlowupCenter) -> BlowupReport:
    problems = validate(c)
    if problems:
        raise InadmissibleCenter("configuration is invalid: " + "; ".join(problems))
    if c.dim == 2 and center.kind not in ("free_orbit_point", "isolated_fixed_point", "point_on_fixed_curve"):
        raise InadmissibleCenter(f"{center.kind} centers need dim=3, configuration has dim=2")
    after, label, subcases = RULES[center.kind](c, center)
    return BlowupReport(c, after, center, label, invariant_deltas(c, after), subcases)


def invariant_deltas(before: Configuration, after: Configuration) -> dict[str, int]:
    kinds = {str(k): k for k in integer_kinds(before) + integer_kinds(after)}
    return {name: evaluate(after, k) - evaluate(before, k) for name, k in sorted(kinds.items())}


# -- fuzzing -----------------------------------------------------------------


@dataclass(frozen=True)
class Drift:
    step: int
    kind: str
    expected: object
    found: object
    report: BlowupReport


@dataclass
class FuzzReport:
    seed: int
    steps: int
    checks: tuple[str, ...]
    initial: dict[str, object]
    histogram: Counter = field(default_factory=Counter)
    values: list[dict[str, object]] = field(default_factory=list)
    drift: Drift | None = None
    final: Configuration | None = None

    @property
    def ok(self) -> bool:
        return self.drift is None

    @property
    def steps_done(self) -> int:
        return len(self.values)


def _check_values(c: Configuration, checks: Iterable[str], beta_pres) -> dict[str, object]:
    from .symbols import beta

    out: dict[str, object] = {}
    for name in checks:
        if name == "beta":
            out[name] = beta(c, beta_pres)
        else:
            out[name] = evaluate(c, name)
    return out


def pick_center(c: Configuration, rng: random.Random, max_incidences: int = 1) -> BlowupCenter:
    """Choose a center kind uniformly, then a parameter set uniformly within it.

    Drawing the kind first keeps the rarer geometric cases from being drowned
    out by the kinds that carry many parameter combinations.
    """
    kind = rng.choice(admissible_kinds(c))
    return rng.choice(list(centers_of_kind(c, kind, max_incidences)))


def fuzz_sequence(
    c: Configuration,
    steps: int,
    seed: int,
    checks: Iterable[str | InvariantKind],
    max_incidences: int = 1,
) -> FuzzReport:
    """Apply ``steps`` random blowups and watch the checked invariants.

    Randomness comes from ``random.Random(seed)`` (Mersenne Twister), so a
    seed reproduces the whole run.  Stops at the first step where a checked
    value moves or the output fails validation.
    """
    problems = validate(c)
    if problems:
        raise ValueError("configuration is invalid: " + "; ".join(problems))
    names = tuple(str(k) for k in checks)
    beta_pres = None
    for name in names:
        kind = InvariantKind.parse(name)
        if kind.name == "beta":
            from .symbols import DualGroup, build_presentation

            beta_pres = build_presentation(DualGroup.cyclic(c.p), c.dim)
        elif not kind.applies_to(c):
            raise InvariantMismatch(f"{name} does not apply to dim={c.dim}, p={c.p}")
    rng = random.Random(seed)
    start = _check_values(c, names, beta_pres)
    rep = FuzzReport(seed, steps, names, start, final=c)
    cur = c
    for step in range(1, steps + 1):
        center = pick_center(cur, rng, max_incidences)
        report = blowup(cur, center)
        rep.histogram[report.case_label] += 1
        problems = validate(report.after)
        if problems:
            rep.drift = Drift(step, "validate", [], problems, report)
            break
        now = _check_values(report.after, names, beta_pres)
        rep.values.append(now)
        bad = next((k for k in names if now[k] != start[k]), None)
        if bad is not None:
            rep.drift = Drift(step, bad, start[bad], now[bad], report)
            break
        cur = report.after
    rep.final = cur
    return rep
