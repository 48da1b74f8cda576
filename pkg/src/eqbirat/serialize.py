"""JSON encoding of configurations, centers and reports.

Integers beyond ``2**53`` are written as decimal strings so that consumers
parsing numbers as doubles do not lose precision; the readers accept either
form.
"""

from __future__ import annotations

import json
from typing import Any

from .atoms import AtomRecord
from .laurent import LaurentPoly
from .locus import Configuration, CurveComponent, GroupSpec, PointComponent, SurfaceComponent

FORMAT_VERSION = 1
SAFE_INT = 2**53


class FormatError(ValueError):
    pass


def _int_out(x: int) -> int | str:
    return str(x) if abs(x) > SAFE_INT else x


def _int_in(x: Any, where: str) -> int:
    if isinstance(x, bool):
        raise FormatError(f"{where}: expected an integer, got a boolean")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x)
        except ValueError:
            pass
    raise FormatError(f"{where}: expected an integer, got {x!r}")


def jsonable(obj: Any) -> Any:
    """Recursively apply the large-integer rule."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, float)):
        return obj
    if isinstance(obj, int):
        return _int_out(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), indent=2, ensure_ascii=False) + "\n"


def atom_to_json(a: AtomRecord) -> dict:
    out: dict[str, Any] = {
        "hodge_poly": a.hodge_poly.to_json(),
        "rho": a.rho,
        "rho_g": a.rho_g,
        "g_action_trivial": a.g_action_trivial,
    }
    if a.mt_label is not None:
        out["mt_label"] = a.mt_label
    if a.kind is not None:
        out["kind"] = a.kind
    return out


def atom_from_json(d: dict, where: str = "atom") -> AtomRecord:
    try:
        poly = LaurentPoly({_int_in(k, where): _int_in(v, where) for k, v in d["hodge_poly"].items()})
        return AtomRecord(
            poly,
            _int_in(d["rho"], where),
            _int_in(d["rho_g"], where),
            bool(d["g_action_trivial"]),
            d.get("mt_label"),
            d.get("kind"),
        )
    except KeyError as e:
        raise FormatError(f"{where}: missing field {e.args[0]!r}") from None


def config_to_json(c: Configuration) -> dict:
    def curve(cv: CurveComponent) -> dict:
        out = {"genus": cv.genus, "weights": list(cv.weights), "d": cv.d}
        if cv.isogeny_label is not None:
            out["isogeny_label"] = cv.isogeny_label
        return out

    def surface(sf: SurfaceComponent) -> dict:
        out = {"weight": sf.weight, "ruling_genus": sf.ruling_genus, "k_dot_n": sf.k_dot_n, "tag": sf.tag}
        if sf.isogeny_label is not None:
            out["isogeny_label"] = sf.isogeny_label
        return out

    return {
        "format_version": FORMAT_VERSION,
        "group": {"p": c.p},
        "dim": c.dim,
        "points": [{"weights": list(pt.weights)} for pt in c.points],
        "curves": [curve(cv) for cv in c.curves],
        "surfaces": [surface(sf) for sf in c.surfaces],
        "atoms": [atom_to_json(a) for a in c.atoms],
    }


def config_from_json(d: dict) -> Configuration:
    if not isinstance(d, dict):
        raise FormatError("configuration must be a JSON object")
    version = d.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported format_version {version}")
    try:
        p = _int_in(d["group"]["p"], "group.p")
        dim = _int_in(d["dim"], "dim")
    except (KeyError, TypeError):
        raise FormatError("configuration needs group.p and dim") from None

    def ints(xs, where):
        return tuple(_int_in(x, where) for x in xs)

    try:
        points = [PointComponent(ints(pt["weights"], f"points[{i}]")) for i, pt in enumerate(d.get("points", []))]
        curves = [
            CurveComponent(
                _int_in(cv["genus"], f"curves[{i}].genus"),
                ints(cv["weights"], f"curves[{i}].weights"),
                _int_in(cv["d"], f"curves[{i}].d"),
                cv.get("isogeny_label"),
            )
            for i, cv in enumerate(d.get("curves", []))
        ]
        surfaces = [
            SurfaceComponent(
                _int_in(sf["weight"], f"surfaces[{i}].weight"),
                _int_in(sf["ruling_genus"], f"surfaces[{i}].ruling_genus"),
                _int_in(sf["k_dot_n"], f"surfaces[{i}].k_dot_n"),
                sf.get("tag", sf.get("birational_tag", "")),
                sf.get("isogeny_label"),
            )
            for i, sf in enumerate(d.get("surfaces", []))
        ]
    except KeyError as e:
        raise FormatError(f"missing field {e.args[0]!r}") from None
    atoms = [atom_from_json(a, f"atoms[{i}]") for i, a in enumerate(d.get("atoms", []))]
    return Configuration(GroupSpec(p), dim, points, curves, surfaces, atoms)


def load_config(path: str) -> Configuration:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise FormatError(f"{path}: {e}") from None
    return config_from_json(data)
