"""Patterns, subshifts of finite type, finite configurations and the shift action.

Occurrence convention: a pattern P occurs in x at g when x(g.h) = P(h) for
every h in Supp(P).  Quantifying over all g this is the same set of
constraints as testing (g.x)_h = x_{g^-1 h}.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

from .errors import AlphabetMismatch, GroupMismatch, SupportOutOfDomain
from .groups import FREE_ABELIAN, GroupDescriptor, GroupElement, ball, free_abelian, inverse, multiply
from .lattice import Lattice


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple[str, ...]

    def __post_init__(self):
        syms = tuple(str(s) for s in self.symbols)
        if not syms:
            raise ValueError("alphabet must be nonempty")
        if len(set(syms)) != len(syms):
            raise ValueError("alphabet symbols must be distinct")
        object.__setattr__(self, "symbols", syms)

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __getitem__(self, i: int) -> str:
        return self.symbols[i]

    def index(self, symbol: str) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise AlphabetMismatch(f"symbol {symbol!r} not in alphabet") from None


@dataclass(frozen=True)
class Pattern:
    """Finite partial map group element -> symbol index, entries sorted by element."""

    group: GroupDescriptor
    entries: tuple[tuple[GroupElement, int], ...]

    def __post_init__(self):
        entries = tuple(sorted(((g, int(s)) for g, s in self.entries), key=lambda e: e[0].coords))
        if not entries:
            raise ValueError("pattern support must be nonempty")
        for g, _ in entries:
            if g.group != self.group:
                raise GroupMismatch(f"pattern entry {g} outside {self.group}")
        if len({g.coords for g, _ in entries}) != len(entries):
            raise ValueError("pattern support has a repeated element")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_dict(cls, group: GroupDescriptor, mapping: Mapping[GroupElement, int]) -> Pattern:
        return cls(group, tuple(mapping.items()))

    @property
    def support(self) -> tuple[GroupElement, ...]:
        return tuple(g for g, _ in self.entries)

    @property
    def symbols(self) -> tuple[int, ...]:
        return tuple(s for _, s in self.entries)

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class Sft:
    """X_P: alphabet plus a finite list of forbidden patterns over one group.

    ``meta`` carries JSON-able annotations (construction provenance, projection
    maps) and round-trips through serialization.
    """

    group: GroupDescriptor
    alphabet: Alphabet
    forbidden: tuple[Pattern, ...] = ()
    meta: dict = field(default_factory=dict, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "forbidden", tuple(self.forbidden))
        k = len(self.alphabet)
        for p in self.forbidden:
            if p.group != self.group:
                raise GroupMismatch("forbidden pattern over a different group")
            if any(not 0 <= s < k for s in p.symbols):
                raise AlphabetMismatch("forbidden pattern symbol outside the alphabet")

    @cached_property
    def by_support(self) -> dict[tuple, tuple[tuple[GroupElement, ...], dict[tuple[int, ...], Pattern]]]:
        """Forbidden patterns grouped by support: coords key -> (support, symbols -> pattern)."""
        out: dict = {}
        for p in self.forbidden:
            key = tuple(g.coords for g in p.support)
            out.setdefault(key, (p.support, {}))[1].setdefault(p.symbols, p)
        return out

    def support_radius(self) -> int:
        from .groups import word_length

        return max((word_length(g) for p in self.forbidden for g in p.support), default=0)


class Domain:
    """Finite set of cells a configuration lives on.

    ``ball``: an explicit list of elements (a Cayley ball, or any translate or
    sub-window of one).  ``torus``: Z^n / L with residues in the HNF box.
    """

    __slots__ = ("group", "kind", "cells", "lattice", "radius", "_pos", "_fits")

    def __init__(self, group: GroupDescriptor, kind: str, cells: Sequence[GroupElement],
                 lattice: Lattice | None = None, radius: int | None = None):
        self.group = group
        self.kind = kind
        self.cells = tuple(sorted(cells, key=lambda g: g.coords))
        self.lattice = lattice
        self.radius = radius
        self._pos = {g.coords: i for i, g in enumerate(self.cells)}
        self._fits: dict[tuple, list] = {}
        if len(self._pos) != len(self.cells):
            raise ValueError("domain cells must be distinct")

    @classmethod
    def ball(cls, group: GroupDescriptor, r: int) -> Domain:
        return cls(group, "ball", ball(group, r), radius=r)

    @classmethod
    def window(cls, group: GroupDescriptor, cells: Iterable[GroupElement]) -> Domain:
        return cls(group, "ball", list(cells))

    @classmethod
    def torus(cls, group: GroupDescriptor | int, lattice: Lattice) -> Domain:
        if isinstance(group, int):
            group = free_abelian(group)
        if group.family != FREE_ABELIAN:
            raise GroupMismatch("torus domains need a free abelian group")
        if lattice.n != group.rank:
            raise GroupMismatch("lattice dimension differs from the group rank")
        cells = [GroupElement(group, r) for r in lattice.residues()]
        return cls(group, "torus", cells, lattice=lattice)

    @property
    def is_torus(self) -> bool:
        return self.kind == "torus"

    def __len__(self):
        return len(self.cells)

    def __eq__(self, other):
        if not isinstance(other, Domain):
            return NotImplemented
        return (self.group == other.group and self.kind == other.kind
                and self.cells == other.cells and self.lattice == other.lattice)

    def __hash__(self):
        return hash((self.kind, self.cells, self.lattice))

    def __repr__(self):
        if self.is_torus:
            return f"Domain(torus {self.lattice})"
        return f"Domain(ball r={self.radius}, {len(self.cells)} cells)"

    def position(self, g: GroupElement) -> int | None:
        """Index of the cell holding g (its residue on a torus), None if absent."""
        if self.lattice is not None:
            return self._pos[self.lattice.reduce(g.coords)]
        return self._pos.get(g.coords)

    def placements(self, pattern: Pattern) -> Iterator[tuple[GroupElement, tuple[int, ...]]]:
        """(g, cell positions of g.Supp(P)) for every translate fitting the domain."""
        return iter(self.fits(pattern.support))

    def fits(self, support: Sequence[GroupElement]) -> list[tuple[GroupElement, tuple[int, ...]]]:
        """Placements of a support, memoized since many patterns share one."""
        key = tuple(h.coords for h in support)
        hit = self._fits.get(key)
        if hit is not None:
            return hit
        out = []
        if self.is_torus:
            for g in self.cells:
                out.append((g, tuple(self.position(multiply(g, h)) for h in support)))
        else:
            h0_inv = inverse(support[0])
            for d in self.cells:
                g = multiply(d, h0_inv)
                pos = []
                for h in support:
                    p = self._pos.get(multiply(g, h).coords)
                    if p is None:
                        break
                    pos.append(p)
                else:
                    out.append((g, tuple(pos)))
        self._fits[key] = out
        return out

    def translate(self, g: GroupElement) -> Domain:
        if self.is_torus:
            return self
        radius = self.radius if g.is_identity() else None
        return Domain(self.group, "ball", [multiply(g, d) for d in self.cells], radius=radius)


@dataclass(frozen=True)
class Configuration:
    """Total coloring (symbol indices) of a finite domain."""

    domain: Domain
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if len(self.values) != len(self.domain):
            raise ValueError("configuration needs exactly one value per cell")

    @classmethod
    def from_function(cls, domain: Domain, fn) -> Configuration:
        return cls(domain, tuple(fn(g) for g in domain.cells))

    @property
    def group(self) -> GroupDescriptor:
        return self.domain.group

    def __getitem__(self, g: GroupElement) -> int:
        p = self.domain.position(g)
        if p is None:
            raise SupportOutOfDomain(f"{g} is outside the configuration domain")
        return self.values[p]

    def items(self) -> Iterator[tuple[GroupElement, int]]:
        return zip(self.domain.cells, self.values)

    def as_dict(self) -> dict[tuple[int, ...], int]:
        return {g.coords: v for g, v in self.items()}


def translate(g: GroupElement, c: Configuration) -> Configuration:
    """(g.c)(h) = c(g^-1 h)."""
    if g.group != c.group:
        raise GroupMismatch(f"{g} does not act on configurations over {c.group}")
    dom = c.domain
    if dom.is_torus:
        g_inv = inverse(g)
        return Configuration(dom, tuple(c[multiply(g_inv, h)] for h in dom.cells))
    new_dom = dom.translate(g)
    lookup = {multiply(g, d).coords: v for d, v in c.items()}
    return Configuration(new_dom, tuple(lookup[h.coords] for h in new_dom.cells))


def occurs(p: Pattern, c: Configuration, g: GroupElement) -> bool:
    """True iff c(g.h) = P(h) for all h in Supp(P)."""
    if p.group != c.group or g.group != c.group:
        raise GroupMismatch("pattern, configuration and translate must share a group")
    positions = []
    for h, _ in p.entries:
        pos = c.domain.position(multiply(g, h))
        if pos is None:
            raise SupportOutOfDomain(f"{g} . Supp(P) leaves the domain")
        positions.append(pos)
    return all(c.values[pos] == s for pos, (_, s) in zip(positions, p.entries))


def is_locally_admissible(x: Sft, c: Configuration) -> bool:
    """No forbidden pattern occurs at any translate fitting inside the domain."""
    if x.group != c.group:
        raise GroupMismatch(f"SFT over {x.group}, configuration over {c.group}")
    if any(not 0 <= v < len(x.alphabet) for v in c.values):
        raise AlphabetMismatch("configuration uses symbols outside the SFT alphabet")
    return first_violation(x, c) is None


def first_violation(x: Sft, c: Configuration) -> tuple[Pattern, GroupElement] | None:
    vals = c.values
    for support, table in x.by_support.values():
        for g, pos in c.domain.fits(support):
            p = table.get(tuple(vals[i] for i in pos))
            if p is not None:
                return p, g
    return None


class WangTile(NamedTuple):
    north: str
    east: str
    south: str
    west: str


@dataclass(frozen=True)
class WangTileSet:
    tiles: tuple[WangTile, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        tiles = tuple(WangTile(*map(str, t)) for t in self.tiles)
        if not tiles:
            raise ValueError("a Wang tile set needs at least one tile")
        object.__setattr__(self, "tiles", tiles)
        names = tuple(self.names) or tuple(f"t{i}" for i in range(len(tiles)))
        if len(names) != len(tiles):
            raise ValueError("one name per tile")
        object.__setattr__(self, "names", names)

    def __len__(self):
        return len(self.tiles)


def wang_to_sft(t: WangTileSet) -> Sft:
    """Forbid every horizontal (east/west) and vertical (north/south) mismatch."""
    z2 = free_abelian(2)
    o, e1, e2 = z2.identity(), z2.element(1, 0), z2.element(0, 1)
    forbidden = []
    for i, a in enumerate(t.tiles):
        for j, b in enumerate(t.tiles):
            if a.east != b.west:
                forbidden.append(Pattern(z2, ((o, i), (e1, j))))
    for i, a in enumerate(t.tiles):
        for j, b in enumerate(t.tiles):
            if a.north != b.south:
                forbidden.append(Pattern(z2, ((o, i), (e2, j))))
    return Sft(z2, Alphabet(t.names), tuple(forbidden), {"construction": "wang", "tiles": len(t)})
