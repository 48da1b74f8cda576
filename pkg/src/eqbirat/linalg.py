"""Exact integer linear algebra.

Matrices are plain lists of rows of Python ints, so entries never overflow.
The central routine is :func:`snf`, which returns unimodular transforms along
with the Smith normal form; :func:`present_quotient` builds on it to describe
``Z^n / (row span of R)`` in invariant-factor form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

IntMatrix = list[list[int]]


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> IntMatrix:
    return [[0] * cols for _ in range(rows)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    if not a:
        return []
    inner = len(b)
    if any(len(row) != inner for row in a):
        raise ValueError("matrix shapes do not align")
    cols = len(b[0]) if b else 0
    bt = [[b[k][j] for k in range(inner)] for j in range(cols)]
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def vecmat(v: Sequence[int], m: Sequence[Sequence[int]]) -> list[int]:
    """Row vector times matrix."""
    if len(v) != len(m):
        raise ValueError(f"vector of length {len(v)} against {len(m)} rows")
    cols = len(m[0]) if m else 0
    out = [0] * cols
    for x, row in zip(v, m):
        if x:
            for j, y in enumerate(row):
                out[j] += x * y
    return out


def det(m: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
        prev = pivot
    return sign * a[n - 1][n - 1]


def _smallest_nonzero(a: IntMatrix, t: int) -> tuple[int, int] | None:
    best = None
    best_abs = 0
    for i in range(t, len(a)):
        row = a[i]
        for j in range(t, len(row)):
            x = row[j]
            if x and (best is None or abs(x) < best_abs):
                best, best_abs = (i, j), abs(x)
                if best_abs == 1:
                    return best
    return best


def snf(m: Sequence[Sequence[int]], *, with_u: bool = True) -> tuple[IntMatrix | None, IntMatrix, IntMatrix]:
    """Smith normal form with transforms.

    Returns ``(u, s, v)`` such that ``u @ m @ v == s``, with ``u`` and ``v``
    unimodular and ``s`` diagonal, nonnegative, each diagonal entry dividing
    the next.  Pivots are chosen by smallest absolute value to limit growth.
    Pass ``with_u=False`` to skip accumulating ``u`` (returned as ``None``);
    this matters for tall relation matrices where only ``v`` is needed.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if any(len(r) != cols for r in m):
        raise ValueError("ragged matrix")
    a = [list(map(int, r)) for r in m]
    u = identity(rows) if with_u else None
    v = identity(cols)

    def swap_rows(i: int, j: int) -> None:
        if i != j:
            a[i], a[j] = a[j], a[i]
            if u is not None:
                u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        if i != j:
            for mat in (a, v):
                for row in mat:
                    row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, q: int) -> None:
        # row[dst] += q * row[src]
        rs, rd = a[src], a[dst]
        for k, x in enumerate(rs):
            if x:
                rd[k] += q * x
        if u is not None:
            us, ud = u[src], u[dst]
            for k, x in enumerate(us):
                if x:
                    ud[k] += q * x

    def add_col(dst: int, src: int, q: int) -> None:
        for mat in (a, v):
            for row in mat:
                x = row[src]
                if x:
                    row[dst] += q * x

    for t in range(min(rows, cols)):
        pos = _smallest_nonzero(a, t)
        if pos is None:
            break
        swap_rows(t, pos[0])
        swap_cols(t, pos[1])
        while True:
            p = a[t][t]
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
            # leftover remainders are smaller than |p|: promote one to pivot
            best = None
            for i in range(t + 1, rows):
                x = a[i][t]
                if x and (best is None or abs(x) < abs(best[2])):
                    best = ("r", i, x)
            for j in range(t + 1, cols):
                x = a[t][j]
                if x and (best is None or abs(x) < abs(best[2])):
                    best = ("c", j, x)
            if best is not None:
                if best[0] == "r":
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[1])
                continue
            # row and column are clear; enforce divisibility of the rest
            bad = next(
                (i for i in range(t + 1, rows) if any(x % p for x in a[i][t + 1:])),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if u is not None:
                u[t] = [-x for x in u[t]]
    return u, a, v


def diagonal(s: Sequence[Sequence[int]]) -> list[int]:
    return [s[i][i] for i in range(min(len(s), len(s[0]) if s else 0))]


@dataclass(frozen=True)
class AbGroupStructure:
    """``Z^free_rank ⊕ Z/torsion[0] ⊕ ...`` with the coordinate change that
    realises it.

    ``projection`` is a unimodular ``n x n`` matrix ``V``: a generator
    coordinate row vector ``x`` maps to ``y = x V``.  The first ``n_trivial``
    entries of ``y`` are discarded (invariant factor 1), the next
    ``len(torsion)`` are read modulo the torsion orders, and the remaining
    ``free_rank`` are free coordinates.
    """

    num_generators: int
    free_rank: int
    torsion: tuple[int, ...]
    projection: tuple[tuple[int, ...], ...]
    n_trivial: int

    def __post_init__(self) -> None:
        for d, e in zip(self.torsion, self.torsion[1:]):
            if e % d:
                raise ValueError(f"torsion {self.torsion} breaks the divisibility chain")
        if any(d < 2 for d in self.torsion):
            raise ValueError("torsion orders must be at least 2")
        if self.n_trivial + len(self.torsion) + self.free_rank != self.num_generators:
            raise ValueError("coordinate split does not add up")

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        return format_structure(self.free_rank, self.torsion)


@dataclass(frozen=True)
class GroupElementClass:
    free_part: tuple[int, ...]
    torsion_part: tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        return not any(self.free_part) and not any(self.torsion_part)

    def to_json(self) -> dict:
        return {"free": list(self.free_part), "torsion": list(self.torsion_part)}


def format_structure(free_rank: int, torsion: Sequence[int]) -> str:
    """Render as e.g. ``Z^4 ⊕ (Z/2)^2 ⊕ Z/6``; the trivial group is ``0``."""
    parts = []
    if free_rank == 1:
        parts.append("Z")
    elif free_rank > 1:
        parts.append(f"Z^{free_rank}")
    i = 0
    while i < len(torsion):
        d = torsion[i]
        k = 1
        while i + k < len(torsion) and torsion[i + k] == d:
            k += 1
        parts.append(f"Z/{d}" if k == 1 else f"(Z/{d})^{k}")
        i += k
    return " ⊕ ".join(parts) if parts else "0"


def present_quotient(num_generators: int, relations: Sequence[Sequence[int]]) -> AbGroupStructure:
    """Invariant-factor decomposition of ``Z^n`` modulo the row span of ``relations``."""
    n = num_generators
    rows = []
    seen = set()
    for r in relations:
        if len(r) != n:
            raise ValueError(f"relation has {len(r)} entries, expected {n}")
        key = tuple(int(x) for x in r)
        if any(key) and key not in seen:
            seen.add(key)
            rows.append(list(key))
    if rows:
        _, s, v = snf(rows, with_u=False)
        diag = diagonal(s)
    else:
        v, diag = identity(n), []
    diag = diag + [0] * (n - len(diag))
    n_trivial = sum(1 for d in diag if d == 1)
    torsion = tuple(d for d in diag if d > 1)
    free_rank = sum(1 for d in diag if d == 0)
    return AbGroupStructure(
        num_generators=n,
        free_rank=free_rank,
        torsion=torsion,
        projection=tuple(tuple(row) for row in v),
        n_trivial=n_trivial,
    )


def reduce_element(g: AbGroupStructure, coords: Sequence[int]) -> GroupElementClass:
    if len(coords) != g.num_generators:
        raise ValueError(
            f"coordinate vector has length {len(coords)}, presentation has {g.num_generators} generators"
        )
    y = vecmat(coords, g.projection)
    k = g.n_trivial
    t = len(g.torsion)
    torsion_part = tuple(y[k + i] % d for i, d in enumerate(g.torsion))
    free_part = tuple(y[k + t:])
    return GroupElementClass(free_part=free_part, torsion_part=torsion_part)


def inverse_unimodular(m: Sequence[Sequence[int]]) -> IntMatrix:
    """Integer inverse of a matrix with determinant ±1."""
    from fractions import Fraction

    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    out = [[x for x in row[n:]] for row in a]
    if any(x.denominator != 1 for row in out for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in out]


def lift_class(g: AbGroupStructure, cls: GroupElementClass) -> list[int]:
    """Generator coordinates whose reduction is ``cls``."""
    y = [0] * g.n_trivial + list(cls.torsion_part) + list(cls.free_part)
    return vecmat(y, inverse_unimodular(g.projection))
