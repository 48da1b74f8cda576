"""Symbolic fixed loci of ``Z/p``-actions on surfaces and threefolds.

Nothing here computes geometry.  Genera, normal degrees and intersection
numbers are declared by the caller; the blowup rules and invariants only ever
read these numbers.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from sympy import isprime

from .atoms import AtomRecord, trivial_point

P1_TIMES_CURVE = "C×P1"
PLANE = "P2"


@dataclass(frozen=True)
class GroupSpec:
    p: int


@dataclass(frozen=True)
class PointComponent:
    weights: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", tuple(sorted(self.weights)))


@dataclass(frozen=True)
class CurveComponent:
    """A fixed curve.  In a surface ``weights`` has one entry and ``d`` is the
    normal degree; in a threefold it has two and ``d`` is ``deg ∧²N``."""

    genus: int
    weights: tuple[int, ...]
    d: int
    isogeny_label: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", tuple(sorted(self.weights)))


@dataclass(frozen=True)
class SurfaceComponent:
    weight: int
    ruling_genus: int
    k_dot_n: int
    tag: str
    isogeny_label: str | None = None


@dataclass(frozen=True)
class Configuration:
    group: GroupSpec
    dim: int
    points: tuple[PointComponent, ...] = ()
    curves: tuple[CurveComponent, ...] = ()
    surfaces: tuple[SurfaceComponent, ...] = ()
    atoms: tuple[AtomRecord, ...] = ()

    def __post_init__(self) -> None:
        for name in ("points", "curves", "surfaces", "atoms"):
            object.__setattr__(self, name, tuple(getattr(self, name)))

    @property
    def p(self) -> int:
        return self.group.p

    def replace(self, **changes) -> "Configuration":
        return dataclasses.replace(self, **changes)

    def union(self, other: "Configuration") -> "Configuration":
        """Disjoint union of fixed-locus data and atom ledgers."""
        if (self.p, self.dim) != (other.p, other.dim):
            raise ValueError("cannot combine configurations of different group or dimension")
        return self.replace(
            points=self.points + other.points,
            curves=self.curves + other.curves,
            surfaces=self.surfaces + other.surfaces,
            atoms=self.atoms + other.atoms,
        )


def validate(c: Configuration) -> list[str]:
    """Return the list of violated constraints; empty means valid."""
    out: list[str] = []
    p = c.group.p
    if not isinstance(p, int) or p < 2 or not isprime(p):
        out.append(f"group order {p} is not prime")
    if c.dim not in (2, 3):
        out.append(f"dimension {c.dim} is not 2 or 3")

    def check_weights(where: str, ws: tuple[int, ...], expected: int) -> None:
        if len(ws) != expected:
            out.append(f"{where}: {len(ws)} normal weights, codimension is {expected}")
        for w in ws:
            if p >= 2 and w % p == 0:
                out.append(f"{where}: zero normal weight")
            elif not 0 < w < p:
                out.append(f"{where}: weight {w} is not reduced mod {p}")

    for i, pt in enumerate(c.points):
        check_weights(f"point {i}", pt.weights, c.dim)
    for i, cv in enumerate(c.curves):
        check_weights(f"curve {i}", cv.weights, c.dim - 1)
        if cv.genus < 0:
            out.append(f"curve {i}: negative genus")
        if cv.isogeny_label is not None and cv.genus < 1:
            out.append(f"curve {i}: isogeny label on a rational curve")
    if c.dim == 2 and c.surfaces:
        out.append("surface component in a two-dimensional configuration")
    for i, sf in enumerate(c.surfaces):
        check_weights(f"surface {i}", (sf.weight,), 1)
        if sf.ruling_genus < 0:
            out.append(f"surface {i}: negative ruling genus")
        if sf.isogeny_label is not None and sf.ruling_genus < 1:
            out.append(f"surface {i}: isogeny label on a rational ruling")
    seen: dict = {}
    for i, atom in enumerate(c.atoms):
        if atom not in seen:
            seen[atom] = atom.violations()
        out.extend(f"atom {i}: {msg}" for msg in seen[atom])
    return out


def euler_characteristic_fixed_locus(c: Configuration) -> int:
    if c.surfaces:
        raise ValueError("Euler characteristic is only tracked for point and curve components")
    return len(c.points) + sum(2 - 2 * cv.genus for cv in c.curves)


def genus_cyclic_cover(k: int) -> int:
    """Genus of the smooth model of ``x^3 = P(t)``, ``P`` monic of degree ``3k``
    with simple roots: fully ramified over the ``3k`` roots, unramified at
    infinity, so ``2g - 2 = -6 + 6k``."""
    if k < 1:
        raise ValueError("k must be positive")
    return 3 * k - 2


def _linear_atoms(n: int) -> tuple[AtomRecord, ...]:
    # projective n-space: n+1 one-dimensional Hodge atoms
    return tuple(trivial_point() for _ in range(n + 1))


def trigonal_threefold(k: int) -> Configuration:
    """Compactified ``x1 x2 x3 = P(x4)`` with ``Z/3`` permuting ``x1, x2, x3``.

    The only fixed component is the trigonal curve ``x^3 = P(t)`` with normal
    weights ``(1, 2)``.  Its contribution ``2 - 2g + d`` equals ``-K_X.C = 6``,
    which pins ``d = 6k``.
    """
    if k < 2:
        raise ValueError("the trigonal family needs k >= 2")
    g = genus_cyclic_cover(k)
    d = 6 - 2 + 2 * g
    return Configuration(
        GroupSpec(3), 3, curves=(CurveComponent(g, (1, 2), d, f"Jac(C_k{k})"),)
    )


def surface_times_line(g: int, p: int = 2, line_action: str = "trivial", self_intersection: int = 0,
                       weight: int = 1) -> Configuration:
    """``S x P^1`` with the diagonal action, where the fixed curve ``C ⊂ S`` of
    genus ``g`` has the given normal weight and self-intersection.

    Only components coming from ``C`` are modelled.  With the trivial action on
    the line, ``C x P^1`` is a fixed surface with ``K.N = -2 C.C``; otherwise
    ``C x {0}`` and ``C x {inf}`` are fixed curves.
    """
    if g < 2:
        raise ValueError("the fixed curve must have genus >= 2")
    label = f"Jac(C_g{g})"
    if line_action == "trivial":
        surf = SurfaceComponent(weight % p, g, -2 * self_intersection, P1_TIMES_CURVE, label)
        return Configuration(GroupSpec(p), 3, surfaces=(surf,))
    if line_action == "nontrivial":
        curves = (
            CurveComponent(g, (weight % p, 1), self_intersection, label),
            CurveComponent(g, (weight % p, p - 1), self_intersection, label),
        )
        return Configuration(GroupSpec(p), 3, curves=curves)
    raise ValueError(f"line_action must be 'trivial' or 'nontrivial', got {line_action!r}")


def linear_projective(p: int, chars: tuple[int, ...]) -> Configuration:
    """Fixed locus of ``diag(ζ^chars)`` on ``P^{n}``, ``n = len(chars) - 1``.

    Each eigenspace ``V_χ`` gives a fixed ``P(V_χ)`` with normal weights
    ``χ' - χ`` (one per other eigenvector).  Lines in ``P^3`` have ``d = 2``,
    lines in ``P^2`` normal degree 1, planes in ``P^3`` have ``K.N = -3``.
    """
    n = len(chars) - 1
    points, curves, surfaces = [], [], []
    for chi in sorted(set(chars)):
        mult = chars.count(chi)
        normals = tuple((x - chi) % p for x in chars if x != chi)
        if mult == 1:
            points.append(PointComponent(normals))
        elif mult == 2:
            curves.append(CurveComponent(0, normals, 1 if n == 2 else 2))
        elif mult == 3 and n == 3:
            surfaces.append(SurfaceComponent(normals[0], 0, -3, PLANE))
        else:
            raise ValueError("trivial action")
    return Configuration(GroupSpec(p), n, tuple(points), tuple(curves), tuple(surfaces), _linear_atoms(n))


P3_Z2_VARIANTS = {"point_plane": (0, 0, 0, 1), "two_lines": (0, 0, 1, 1)}
P3_Z3_VARIANTS = {
    "point_plane": (0, 0, 0, 1),
    "two_lines": (0, 0, 1, 1),
    "line_two_points": (0, 0, 1, 2),
}

EXAMPLE_FAMILIES = (
    "trigonal_threefold",
    "surface_times_line",
    "p2_linear_z2",
    "p3_linear_z2",
    "p3_linear_z3",
)


def build_example(family: str, **params) -> Configuration:
    if family == "trigonal_threefold":
        return trigonal_threefold(int(params.get("k", 2)))
    if family == "surface_times_line":
        return surface_times_line(**{"g": 2, **params})
    if family == "p2_linear_z2":
        return linear_projective(2, (0, 0, 1))
    if family == "p3_linear_z2":
        variant = params.get("variant", "point_plane")
        if variant not in P3_Z2_VARIANTS:
            raise ValueError(f"unknown variant {variant!r}; choose from {sorted(P3_Z2_VARIANTS)}")
        return linear_projective(2, P3_Z2_VARIANTS[variant])
    if family == "p3_linear_z3":
        variant = params.get("variant", "point_plane")
        if variant not in P3_Z3_VARIANTS:
            raise ValueError(f"unknown variant {variant!r}; choose from {sorted(P3_Z3_VARIANTS)}")
        return linear_projective(3, P3_Z3_VARIANTS[variant])
    raise ValueError(f"unknown example family {family!r}")
