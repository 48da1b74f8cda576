"""Closed-form birational invariants of fixed-locus configurations.

Each invariant is a sum of per-component terms.  :func:`breakdown` returns the
terms with a short description of the component they come from, and
:func:`evaluate` adds them up.  Kinds are named by strings: ``"I"``, ``"J"``,
``"K"``, ``"combined:<g>"``, ``"fine:<label>"``; ``"beta"`` is handled by
:mod:`eqbirat.symbols` because its value is a group element.
"""

from __future__ import annotations

from dataclasses import dataclass

from .laurent import LaurentPoly
from .locus import P1_TIMES_CURVE, Configuration, euler_characteristic_fixed_locus


class InvariantMismatch(ValueError):
    """The invariant is not defined for this group order or dimension."""


@dataclass(frozen=True)
class InvariantKind:
    name: str
    param: int | str | None = None

    @classmethod
    def parse(cls, text: str) -> "InvariantKind":
        name, _, arg = text.partition(":")
        name = name.strip()
        if name in ("I", "J", "K", "beta"):
            if arg:
                raise ValueError(f"invariant {name} takes no parameter")
            return cls(name)
        if name == "combined":
            if not arg:
                raise ValueError("combined needs a genus, e.g. combined:4")
            return cls(name, int(arg))
        if name == "fine":
            if not arg:
                raise ValueError("fine needs an isogeny label, e.g. fine:Jac(C_k2)")
            return cls(name, arg)
        raise ValueError(f"unknown invariant kind {text!r}")

    def __str__(self) -> str:
        return self.name if self.param is None else f"{self.name}:{self.param}"

    def applies_to(self, c: Configuration) -> bool:
        try:
            _require(self, c)
        except InvariantMismatch:
            return False
        return True


def _require(kind: InvariantKind, c: Configuration) -> None:
    need = {"I": (2, 2), "J": (3, 3), "K": (3, 2)}.get(kind.name)
    if need is not None:
        dim, p = need
        if (c.dim, c.p) != (dim, p):
            raise InvariantMismatch(
                f"{kind.name} needs dim={dim}, p={p}; configuration has dim={c.dim}, p={c.p}"
            )
    elif kind.name in ("combined", "fine"):
        if c.dim != 3:
            raise InvariantMismatch(f"{kind.name} needs a threefold; configuration has dim={c.dim}")
        if kind.name == "combined" and int(kind.param) < 2:
            raise InvariantMismatch(f"combined needs genus >= 2, got {kind.param}")


Term = tuple[str, int]


def _terms_I(c: Configuration) -> list[Term]:
    out: list[Term] = [(f"point {pt.weights}", 1) for pt in c.points]
    for cv in c.curves:
        out.append((f"curve g={cv.genus} deg={cv.d}", 2 - 2 * cv.genus + cv.d))
    return out


def _j_point_term(weights: tuple[int, ...]) -> int:
    # mixed-sign points count once, homogeneous ones not at all
    return 0 if len(set(weights)) == 1 else 1


def _terms_J(c: Configuration) -> list[Term]:
    out: list[Term] = [(f"point {pt.weights}", _j_point_term(pt.weights)) for pt in c.points]
    for cv in c.curves:
        a, b = cv.weights
        if a == b:
            out.append((f"curve g={cv.genus} {cv.weights} d={cv.d}", 1 - cv.genus + cv.d))
        else:
            out.append((f"curve g={cv.genus} {cv.weights} d={cv.d}", 2 - 2 * cv.genus + cv.d))
    for sf in c.surfaces:
        out.append((f"surface {sf.tag} g={sf.ruling_genus} K.N={sf.k_dot_n}", 3 - 3 * sf.ruling_genus - sf.k_dot_n))
    return out


def _terms_K(c: Configuration) -> list[Term]:
    out: list[Term] = [(f"point {pt.weights}", 1) for pt in c.points]
    for cv in c.curves:
        out.append((f"curve g={cv.genus} d={cv.d}", 2 - 2 * cv.genus + cv.d))
    for sf in c.surfaces:
        out.append((f"surface {sf.tag} g={sf.ruling_genus} K.N={sf.k_dot_n}", 4 - 4 * sf.ruling_genus - sf.k_dot_n))
    return out


def _terms_combined(c: Configuration, g: int) -> list[Term]:
    out: list[Term] = []
    out += [(f"curve g={g}", -1) for cv in c.curves if cv.genus == g]
    out += [
        (f"surface {P1_TIMES_CURVE} g={g}", -2)
        for sf in c.surfaces
        if sf.tag == P1_TIMES_CURVE and sf.ruling_genus == g
    ]
    target = LaurentPoly.curve(g)
    out += [
        (f"trivial atom P={target}", 1)
        for a in c.atoms
        if a.g_action_trivial and a.hodge_poly == target
    ]
    return out


def _terms_fine(c: Configuration, label: str) -> list[Term]:
    out: list[Term] = []
    out += [(f"curve {label}", -1) for cv in c.curves if cv.isogeny_label == label]
    out += [
        (f"surface {P1_TIMES_CURVE} {label}", -2)
        for sf in c.surfaces
        if sf.tag == P1_TIMES_CURVE and sf.isogeny_label == label
    ]
    out += [(f"trivial atom {label}", 1) for a in c.atoms if a.g_action_trivial and a.mt_label == label]
    return out


def breakdown(c: Configuration, kind: InvariantKind | str) -> list[Term]:
    if isinstance(kind, str):
        kind = InvariantKind.parse(kind)
    if kind.name == "beta":
        raise ValueError("beta is a group element; use eqbirat.symbols.beta")
    _require(kind, c)
    if kind.name == "I":
        return _terms_I(c)
    if kind.name == "J":
        return _terms_J(c)
    if kind.name == "K":
        return _terms_K(c)
    if kind.name == "combined":
        return _terms_combined(c, int(kind.param))
    return _terms_fine(c, str(kind.param))


def evaluate(c: Configuration, kind: InvariantKind | str) -> int:
    return sum(v for _, v in breakdown(c, kind))


def invariant_I(c: Configuration) -> int:
    value = evaluate(c, InvariantKind("I"))
    # the point/curve sum is χ plus the curve degrees; keep the two in step
    assert value == euler_characteristic_fixed_locus(c) + sum(cv.d for cv in c.curves)
    return value


def invariant_J(c: Configuration) -> int:
    return evaluate(c, InvariantKind("J"))


def invariant_K(c: Configuration) -> int:
    return evaluate(c, InvariantKind("K"))


def combined_invariant(c: Configuration, g: int) -> int:
    if g < 2:
        raise ValueError(f"combined invariant needs genus >= 2, got {g}")
    return evaluate(c, InvariantKind("combined", g))


def fine_invariant(c: Configuration, label: str) -> int:
    return evaluate(c, InvariantKind("fine", label))


def integer_kinds(c: Configuration) -> list[InvariantKind]:
    """Integer invariants that are defined and can be nonzero on ``c``."""
    kinds = [InvariantKind(n) for n in ("I", "J", "K")]
    kinds = [k for k in kinds if k.applies_to(c)]
    if c.dim == 3:
        genera = {cv.genus for cv in c.curves} | {sf.ruling_genus for sf in c.surfaces}
        genera |= {a.hodge_poly.coeff(1) for a in c.atoms if a.g_action_trivial}
        kinds += [InvariantKind("combined", g) for g in sorted(x for x in genera if x >= 2)]
        labels = {cv.isogeny_label for cv in c.curves} | {sf.isogeny_label for sf in c.surfaces}
        labels |= {a.mt_label for a in c.atoms}
        kinds += [InvariantKind("fine", lab) for lab in sorted(x for x in labels if x)]
    return kinds


def hodge_coeff_obstruction(p_total: LaurentPoly, p_fixed: LaurentPoly, d: int) -> bool:
    """True when the fixed locus has more ``t^(d-2)`` Hodge classes than the
    whole variety, which rules out a birational map to projective space with
    a linear action."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    return p_fixed.coeff(d - 2) > p_total.coeff(d - 2)
