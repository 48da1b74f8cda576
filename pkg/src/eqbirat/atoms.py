"""Atom records, low-dimensional catalogs and the feasibility search.

An atom is represented only by the numbers the invariants consume: its Hodge
polynomial, the Hodge rank ``rho``, the invariant Hodge rank ``rho_g``, whether
the group acts trivially on it, and an optional Mumford-Tate (isogeny) label.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .laurent import LaurentPoly


@dataclass(frozen=True)
class AtomRecord:
    hodge_poly: LaurentPoly
    rho: int
    rho_g: int
    g_action_trivial: bool
    mt_label: str | None = None
    kind: str | None = None

    def violations(self) -> list[str]:
        out = []
        if any(c < 0 for c in self.hodge_poly.terms().values()):
            out.append("negative Hodge coefficient")
        total = sum(c for c in self.hodge_poly.terms().values())
        if not 0 <= self.rho_g <= self.rho <= total:
            out.append(f"need 0 <= rho_g <= rho <= {total}, got rho_g={self.rho_g}, rho={self.rho}")
        return out

    @property
    def rank_vector(self) -> tuple[int, int]:
        return (self.rho, self.rho_g)


def trivial_point() -> AtomRecord:
    return AtomRecord(LaurentPoly.constant(1), 1, 1, True, kind="point")


def free_orbit_point(p: int) -> AtomRecord:
    # p points permuted: all classes Hodge, one invariant combination
    return AtomRecord(LaurentPoly.constant(p), p, 1, False, kind="free_orbit_point")


def trivial_curve(genus: int, label: str | None = None) -> AtomRecord:
    if genus < 1:
        raise ValueError("a rational curve splits into two point atoms")
    return AtomRecord(LaurentPoly.curve(genus), 2, 2, True, label, kind="trivial_curve")


def nontrivial_curve(genus: int, label: str | None = None) -> AtomRecord:
    if genus < 1:
        raise ValueError("a rational curve splits into two point atoms")
    return AtomRecord(LaurentPoly.curve(genus), 2, 2, False, label, kind="nontrivial_curve")


def free_orbit_curve(p: int, genus: int) -> AtomRecord:
    if genus < 1:
        raise ValueError("a rational curve orbit splits into two free point orbits")
    return AtomRecord(LaurentPoly.curve(genus).scale(p), 2 * p, 2, False, kind="free_orbit_curve")


@dataclass(frozen=True)
class AtomCatalog:
    entries: tuple[tuple[str, AtomRecord], ...]

    def __post_init__(self) -> None:
        names = [n for n, _ in self.entries]
        if len(set(names)) != len(names):
            raise ValueError("catalog entries must have distinct names")

    def __getitem__(self, name: str) -> AtomRecord:
        for n, rec in self.entries:
            if n == name:
                return rec
        raise KeyError(name)

    def names(self) -> list[str]:
        return [n for n, _ in self.entries]

    def point_atoms(self) -> list[tuple[str, AtomRecord]]:
        """Entries supported in dimension zero (constant Hodge polynomial)."""
        return [(n, r) for n, r in self.entries if all(k == 0 for k in r.hodge_poly.terms())]


def catalog_low_dim(p: int, max_genus: int = 3) -> AtomCatalog:
    """Generators of equivariant atoms of points and curves for ``Z/p``.

    Curve entries are listed for genus ``1..max_genus``; the genus is a free
    parameter, so the list is a finite window onto an infinite family.
    """
    entries: list[tuple[str, AtomRecord]] = [
        ("point", trivial_point()),
        ("free_orbit_point", free_orbit_point(p)),
    ]
    for g in range(1, max_genus + 1):
        entries.append((f"trivial_curve_g{g}", trivial_curve(g)))
    for g in range(1, max_genus + 1):
        entries.append((f"nontrivial_curve_g{g}", nontrivial_curve(g)))
    for g in range(1, max_genus + 1):
        entries.append((f"free_orbit_curve_g{g}", free_orbit_curve(p, g)))
    return AtomCatalog(tuple(entries))


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    witness: tuple[int, ...] | None = None
    certificate: str | None = None
    bounds: tuple[int, ...] = ()

    @property
    def verdict(self) -> str:
        return "feasible" if self.feasible else "infeasible"


def _check_vectors(target: Sequence[int], basis: Sequence[Sequence[int]]) -> None:
    if not basis:
        raise ValueError("basis must be nonempty")
    n = len(target)
    for i, b in enumerate(basis):
        if len(b) != n:
            raise ValueError(f"basis vector {i} has length {len(b)}, target has {n}")
        if any(x < 0 for x in b):
            raise ValueError(f"basis vector {i} has a negative entry; the search only handles nonnegative vectors")
        if not any(b):
            raise ValueError(f"basis vector {i} is zero, so its coefficient is unbounded")


def feasibility(
    target: Sequence[int],
    basis: Sequence[Sequence[int]],
    forced: Iterable[tuple[int, int]] = (),
) -> FeasibilityResult:
    """Decide ``target = Σ x_i basis_i`` over integers ``x_i >= forced_i >= 0``.

    The search is exhaustive within ``x_i <= min_j target_j // basis_ij``
    (over components with ``basis_ij > 0``) and returns the lexicographically
    smallest witness.
    """
    target = [int(x) for x in target]
    basis = [[int(x) for x in b] for b in basis]
    _check_vectors(target, basis)
    mins = [0] * len(basis)
    for idx, m in forced:
        if not 0 <= idx < len(basis):
            raise ValueError(f"forced index {idx} out of range")
        if m < 0:
            raise ValueError("forced minimum must be nonnegative")
        mins[idx] = max(mins[idx], m)

    rest = [t - sum(m * b[j] for m, b in zip(mins, basis)) for j, t in enumerate(target)]
    bounds = tuple(
        max(0, min(r // x for r, x in zip(rest, b) if x > 0)) if all(r >= 0 for r in rest) else 0
        for b in basis
    )
    if any(r < 0 for r in rest):
        return FeasibilityResult(
            False,
            certificate=f"forced minima {mins} already exceed the target {target}",
            bounds=bounds,
        )

    k = len(basis)
    x = [0] * k

    def search(i: int, residual: list[int]) -> bool:
        if i == k:
            return not any(residual)
        b = basis[i]
        cap = min((r // v for r, v in zip(residual, b) if v > 0))
        for c in range(cap + 1):
            x[i] = c
            nxt = [r - c * v for r, v in zip(residual, b)]
            if search(i + 1, nxt):
                return True
        x[i] = 0
        return False

    if search(0, rest):
        return FeasibilityResult(True, witness=tuple(m + c for m, c in zip(mins, x)), bounds=bounds)
    box = ", ".join(f"x{i} in [{m}, {m + u}]" for i, (m, u) in enumerate(zip(mins, bounds)))
    return FeasibilityResult(
        False,
        certificate=f"no combination reaches {tuple(target)}; exhausted {box}",
        bounds=bounds,
    )


@dataclass(frozen=True)
class AtomVerdict:
    name: str
    remainder: tuple[int, ...]
    result: FeasibilityResult

    @property
    def obstructed(self) -> bool:
        return not self.result.feasible


@dataclass(frozen=True)
class ObstructionReport:
    basis_names: tuple[str, ...]
    verdicts: tuple[AtomVerdict, ...]
    narrative: str = field(compare=False)

    @property
    def obstructed(self) -> bool:
        return any(v.obstructed for v in self.verdicts)


class InconsistentForcing(ValueError):
    pass


def obstruction_report(
    variety_atoms: Sequence[tuple[str, AtomRecord]],
    catalog: AtomCatalog,
    forced_atoms: Sequence[tuple[str, AtomRecord]] = (),
) -> ObstructionReport:
    """Test each atom's ``(rho, rho_g)`` against combinations of point atoms.

    ``forced_atoms`` pairs a variety-atom name with an atom that must occur in
    its decomposition; its rank vector is removed before the search.
    """
    points = catalog.point_atoms()
    basis = [r.rank_vector for _, r in points]
    names = tuple(n for n, _ in points)
    lines = []
    verdicts = []
    known = {n for n, _ in variety_atoms}
    for owner, _ in forced_atoms:
        if owner not in known:
            raise KeyError(f"forced atom refers to unknown atom {owner!r}")
    for name, atom in variety_atoms:
        vec = list(atom.rank_vector)
        removed = []
        for owner, f in forced_atoms:
            if owner == name:
                vec = [a - b for a, b in zip(vec, f.rank_vector)]
                removed.append(f.rank_vector)
        if any(v < 0 for v in vec):
            raise InconsistentForcing(
                f"atom {name}: forced atoms {removed} exceed its rank vector {atom.rank_vector}"
            )
        res = feasibility(vec, basis)
        verdicts.append(AtomVerdict(name, tuple(vec), res))
        head = f"atom {name} {atom.rank_vector}"
        if removed:
            head += " minus forced " + " + ".join(map(str, removed)) + f" = {tuple(vec)}"
        if res.feasible:
            combo = " + ".join(f"{c}*{n}" for c, n in zip(res.witness, names) if c) or "nothing"
            lines.append(f"{head}: unobstructed, {combo}")
        else:
            terms = " + ".join(f"x{i}*{b}" for i, b in enumerate(basis))
            lines.append(f"{head}: obstructed, {tuple(vec)} != {terms}; {res.certificate}")
    return ObstructionReport(names, tuple(verdicts), "\n".join(lines))
