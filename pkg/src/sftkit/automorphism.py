"""GL(n, Z) acting on configurations of Z^n, shears, and Div(x, X) window checks.

Row-vector convention throughout: the matrix M sends g to g @ M, and
phi(x)_g = x_{g @ M}.  Composition is therefore
apply_automorphism(M1 @ M2, c) == apply_automorphism(M1, apply_automorphism(M2, c)).
"""

from __future__ import annotations

import enum
from collections.abc import Sequence
from dataclasses import dataclass

from . import linalg
from .constructions import split_symbol
from .errors import (
    DomainTooSmall,
    GroupMismatch,
    LatticeNotPreserved,
    NotOrthogonal,
    NotUnimodular,
    ZeroDirection,
)
from .groups import FREE_ABELIAN, GroupElement
from .lattice import Lattice
from .sft import Configuration, Domain, Sft, is_locally_admissible


@dataclass(frozen=True)
class AutMatrix:
    entries: linalg.Matrix

    def __post_init__(self):
        m = linalg.as_matrix(self.entries)
        if not m or len(m) != len(m[0]):
            raise ValueError("automorphism matrix must be square")
        if abs(linalg.det(m)) != 1:
            raise NotUnimodular(f"det {linalg.det(m)} is not +-1")
        object.__setattr__(self, "entries", m)

    @classmethod
    def identity(cls, n: int) -> AutMatrix:
        return cls(linalg.identity(n))

    @classmethod
    def negation(cls, n: int) -> AutMatrix:
        return cls(tuple(tuple(-int(i == j) for j in range(n)) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def det(self) -> int:
        return linalg.det(self.entries)

    def __matmul__(self, other: AutMatrix) -> AutMatrix:
        return AutMatrix(linalg.matmul(self.entries, other.entries))

    def inverse(self) -> AutMatrix:
        return AutMatrix(linalg.inverse_unimodular(self.entries))

    def act(self, g: Sequence[int]) -> tuple[int, ...]:
        """g @ M."""
        return linalg.vecmat(g, self.entries)


def shear(u: Sequence[int], v: Sequence[int]) -> AutMatrix:
    """phi(g) = g + (g . v) u, i.e. M = I + v^T u; needs u . v = 0 and v != 0."""
    u, v = tuple(map(int, u)), tuple(map(int, v))
    if len(u) != len(v):
        raise ValueError("u and v must have the same length")
    if not any(v):
        raise ZeroDirection("v must be nonzero")
    if sum(a * b for a, b in zip(u, v)):
        raise NotOrthogonal("u . v must vanish")
    n = len(u)
    return AutMatrix(tuple(tuple(int(i == j) + v[i] * u[j] for j in range(n)) for i in range(n)))


def apply_automorphism(m: AutMatrix, c: Configuration) -> Configuration:
    """phi(c)(g) = c(g @ M).

    Tori must be mapped onto themselves (L @ M spans L).  On finite windows
    the result lives on the cells g with g @ M still inside the window.
    """
    g = c.group
    if g.family != FREE_ABELIAN or g.rank != m.n:
        raise GroupMismatch(f"a {m.n}x{m.n} matrix does not act on {g}")
    dom = c.domain
    if dom.is_torus:
        image = Lattice.from_generators([m.act(row) for row in dom.lattice.basis], m.n)
        if image != dom.lattice:
            raise LatticeNotPreserved(f"M does not preserve the lattice {dom.lattice}")
        return Configuration(dom, tuple(c[GroupElement(g, m.act(h.coords))] for h in dom.cells))
    kept = []
    vals = []
    for h in dom.cells:
        pos = dom.position(GroupElement(g, m.act(h.coords)))
        if pos is not None:
            kept.append(h)
            vals.append(c.values[pos])
    if not kept:
        raise DomainTooSmall("no cell of the window stays inside it under M")
    return Configuration(Domain.window(g, kept), tuple(vals))


class DivVerdict(str, enum.Enum):
    CONSISTENT = "consistent"
    REFUTED = "refuted"


def div_witness_check(x: Sft, c: Configuration, m: AutMatrix) -> DivVerdict:
    """One-sided test of M in Div(x, X) for any point x extending c.

    REFUTED certifies that phi(x) has a forbidden pattern; CONSISTENT only
    means the window shows no obstruction.
    """
    if not is_locally_admissible(x, c):
        raise ValueError("the configuration itself is not admissible for X")
    image = apply_automorphism(m, c)
    return DivVerdict.CONSISTENT if is_locally_admissible(x, image) else DivVerdict.REFUTED


def projection_lines_monochromatic(x: Sft, c: Configuration) -> list[bool]:
    """For each base factor of an automorphism_free_product, whether pi of that
    factor is constant along every axis except the factor's first plane axis
    (the columns-monochromatic property, checked on adjacent cells of c).
    """
    meta = x.meta
    if meta.get("construction") != "automorphism_free_product":
        raise ValueError("SFT was not built by automorphism_free_product")
    sizes = meta["factor_sizes"]
    proj = meta["projection"]
    planes = meta["planes"]
    g = c.group
    dom = c.domain
    base_symbols = meta["base_alphabet"]
    out = []
    for i, (free_axis, _) in enumerate(planes):
        ok = True
        for h, v in c.items():
            pi_here = proj[base_symbols[split_symbol(v, sizes)[i]]]
            for axis in range(g.rank):
                if axis == free_axis:
                    continue
                step = list(h.coords)
                step[axis] += 1
                pos = dom.position(GroupElement(g, tuple(step)))
                if pos is None:
                    continue
                w = c.values[pos]
                if proj[base_symbols[split_symbol(w, sizes)[i]]] != pi_here:
                    ok = False
                    break
            if not ok:
                break
        out.append(ok)
    return out
