"""Symbol modules ``B_n(G)`` for finite abelian ``G``.

Characters of ``G^∨ = Z/m_1 x ... x Z/m_k`` are integer tuples reduced
componentwise.  A symbol is a sorted tuple of ``n`` characters that together
generate ``G^∨``; keeping symbols sorted makes the reordering relation hold by
construction, so only the blowup relation has to be imposed explicitly.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import TYPE_CHECKING, Iterable, Iterator, Mapping, Sequence

from .linalg import AbGroupStructure, GroupElementClass, present_quotient, reduce_element

if TYPE_CHECKING:
    from .locus import Configuration

DEFAULT_BUDGET = 20_000

Character = tuple[int, ...]
Symbol = tuple[Character, ...]


class BudgetExceeded(RuntimeError):
    pass


class UnknownSymbol(KeyError):
    pass


def default_budget() -> int:
    raw = os.environ.get("EI_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


@dataclass(frozen=True)
class DualGroup:
    orders: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.orders:
            raise ValueError("a dual group needs at least one cyclic factor")
        if any(m < 2 for m in self.orders):
            raise ValueError(f"cyclic orders must be >= 2, got {self.orders}")

    @classmethod
    def cyclic(cls, m: int) -> "DualGroup":
        return cls((m,))

    @property
    def is_cyclic(self) -> bool:
        # Z/a x Z/b is cyclic iff the orders are pairwise coprime
        return all(math.gcd(a, b) == 1 for a, b in itertools.combinations(self.orders, 2))

    @property
    def size(self) -> int:
        return math.prod(self.orders)

    def character(self, value: int | Sequence[int]) -> Character:
        comps = (value,) if isinstance(value, int) else tuple(value)
        if len(comps) != len(self.orders):
            raise ValueError(f"character {comps} has {len(comps)} components, group has {len(self.orders)}")
        return tuple(int(x) % m for x, m in zip(comps, self.orders))

    def characters(self) -> list[Character]:
        return [tuple(c) for c in itertools.product(*(range(m) for m in self.orders))]

    def sub(self, a: Character, b: Character) -> Character:
        return tuple((x - y) % m for x, y, m in zip(a, b, self.orders))

    def __str__(self) -> str:
        return " x ".join(f"Z/{m}" for m in self.orders)


def make_symbol(entries: Iterable[int | Sequence[int]], g: DualGroup) -> Symbol:
    return tuple(sorted(g.character(e) for e in entries))


def format_symbol(s: Symbol) -> str:
    def one(c: Character) -> str:
        return str(c[0]) if len(c) == 1 else "(" + ",".join(map(str, c)) + ")"

    return "[" + ",".join(one(c) for c in s) + "]"


def generation_condition(chars: Sequence[int | Sequence[int]], g: DualGroup) -> bool:
    """True iff the characters generate all of ``G^∨``."""
    cs = [g.character(c) for c in chars]
    if len(g.orders) == 1:
        m = g.orders[0]
        return math.gcd(m, *(c[0] for c in cs)) == 1
    k = len(g.orders)
    rows = [list(c) for c in cs]
    rows += [[m if i == j else 0 for j in range(k)] for i, m in enumerate(g.orders)]
    return present_quotient(k, rows).is_trivial


class SymbolSum:
    """Formal integer combination of symbols, zero terms dropped."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Symbol, int] | Iterable[tuple[Symbol, int]] = ()) -> None:
        self._terms: dict[Symbol, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for s, c in items:
            self._add(s, c)

    def _add(self, s: Symbol, c: int) -> None:
        v = self._terms.get(s, 0) + c
        if v:
            self._terms[s] = v
        else:
            self._terms.pop(s, None)

    def __add__(self, other: "SymbolSum") -> "SymbolSum":
        out = SymbolSum(self._terms)
        for s, c in other._terms.items():
            out._add(s, c)
        return out

    def __sub__(self, other: "SymbolSum") -> "SymbolSum":
        return self + other.scale(-1)

    def scale(self, k: int) -> "SymbolSum":
        return SymbolSum({s: k * c for s, c in self._terms.items()})

    def items(self) -> Iterator[tuple[Symbol, int]]:
        return iter(sorted(self._terms.items()))

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SymbolSum) and self._terms == other._terms

    def __repr__(self) -> str:
        inner = " + ".join(f"{c}*{format_symbol(s)}" for s, c in self.items())
        return f"SymbolSum({inner or '0'})"


def _multiset_count(n_chars: int, n: int) -> int:
    return math.comb(n_chars + n - 1, n)


def enumerate_generators(g: DualGroup, n: int, budget: int | None = None) -> list[Symbol]:
    """All sorted symbols of length ``n`` generating ``G^∨``, in lexicographic order."""
    if n < 1:
        raise ValueError("symbol length must be at least 1")
    budget = default_budget() if budget is None else budget
    chars = g.characters()
    if len(g.orders) > 1 or n > 1:
        # a loose pre-check so hopeless requests fail before enumeration
        if _multiset_count(len(chars), n) > 50 * budget:
            raise BudgetExceeded(
                f"B_{n}({g}) would need to scan {_multiset_count(len(chars), n)} tuples; budget is {budget}"
            )
    out = [s for s in itertools.combinations_with_replacement(chars, n) if generation_condition(s, g)]
    if len(out) > budget:
        raise BudgetExceeded(f"B_{n}({g}) has {len(out)} generators; budget is {budget}")
    return out


def relation_b_expand(s: Symbol, block: Sequence[int], g: DualGroup) -> SymbolSum:
    """Right-hand side of the blowup relation for the entries of ``s`` at ``block``.

    Each distinct character ``v`` in the block contributes one symbol in which
    ``v`` is kept, the other block entries are shifted by ``-v``, and the
    entries outside the block are untouched.
    """
    n = len(s)
    pos = list(block)
    if len(set(pos)) != len(pos) or not 2 <= len(pos) <= n or any(not 0 <= i < n for i in pos):
        raise ValueError(f"invalid block {block!r} for a symbol of length {n}")
    rest = [s[j] for j in range(n) if j not in set(pos)]
    out = SymbolSum()
    seen: set[Character] = set()
    for i in pos:
        v = s[i]
        if v in seen:
            continue
        seen.add(v)
        entries = [v if j == i else g.sub(s[j], v) for j in pos] + rest
        term = tuple(sorted(entries))
        if not generation_condition(term, g):
            raise AssertionError(f"blowup relation produced non-generating symbol {format_symbol(term)}")
        out = out + SymbolSum({term: 1})
    return out


def relation_blocks(n: int) -> Iterator[tuple[int, ...]]:
    for k in range(2, n + 1):
        yield from itertools.combinations(range(n), k)


@dataclass(frozen=True)
class Presentation:
    group: DualGroup
    n: int
    symbols: tuple[Symbol, ...]
    structure: AbGroupStructure
    n_relations: int
    index: Mapping[Symbol, int] = field(repr=False, compare=False)

    def coords(self, total: SymbolSum) -> list[int]:
        v = [0] * len(self.symbols)
        for s, c in total.items():
            try:
                v[self.index[s]] += c
            except KeyError:
                raise UnknownSymbol(f"{format_symbol(s)} is not a generator of B_{self.n}({self.group})") from None
        return v


def relations(g: DualGroup, n: int, symbols: Sequence[Symbol], index: Mapping[Symbol, int]) -> list[list[int]]:
    rows = []
    for s in symbols:
        for block in relation_blocks(n):
            row = [0] * len(symbols)
            row[index[s]] += 1
            for t, c in relation_b_expand(s, block, g).items():
                row[index[t]] -= c
            if any(row):
                rows.append(row)
    return rows


@lru_cache(maxsize=64)
def _build(orders: tuple[int, ...], n: int, budget: int) -> Presentation:
    g = DualGroup(orders)
    symbols = enumerate_generators(g, n, budget)
    index = {s: i for i, s in enumerate(symbols)}
    rows = relations(g, n, symbols, index)
    if len(rows) > 20 * budget:
        raise BudgetExceeded(f"B_{n}({g}) needs {len(rows)} relations; budget is {budget}")
    return Presentation(g, n, tuple(symbols), present_quotient(len(symbols), rows), len(rows), index)


def build_presentation(g: DualGroup, n: int, budget: int | None = None) -> Presentation:
    return _build(g.orders, n, default_budget() if budget is None else budget)


def class_of(total: SymbolSum, pres: Presentation) -> GroupElementClass:
    return reduce_element(pres.structure, pres.coords(total))


def symbol_sum_of(config: "Configuration") -> SymbolSum:
    """Fixed-locus symbol sum: each component's nonzero normal weights padded
    with as many zero characters as its dimension."""
    g = DualGroup.cyclic(config.group.p)
    comps: list[tuple[int, ...]] = [pt.weights for pt in config.points]
    comps += [cv.weights + (0,) for cv in config.curves]
    comps += [(sf.weight, 0, 0) for sf in config.surfaces]
    return SymbolSum((make_symbol(w, g), 1) for w in comps)


def beta(config: "Configuration", pres: Presentation) -> GroupElementClass:
    if pres.group.orders != (config.group.p,):
        raise ValueError(f"configuration group Z/{config.group.p} does not match presentation over {pres.group}")
    if pres.n != config.dim:
        raise ValueError(f"configuration has dimension {config.dim}, presentation is B_{pres.n}")
    return class_of(symbol_sum_of(config), pres)
