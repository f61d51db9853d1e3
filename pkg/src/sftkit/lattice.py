"""Full-rank sublattices of Z^n in row Hermite normal form.

A lattice is given by basis rows.  The canonical form is upper triangular with
positive pivots and every entry above a pivot reduced into [0, pivot).  With
that shape the box ``0 <= p_i < H[i][i]`` is a fundamental domain, which is
what tori use as their residue set.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from itertools import product

from . import linalg


def hermite_normal_form(rows: Sequence[Sequence[int]], n: int | None = None) -> linalg.Matrix:
    """Row HNF of the lattice generated by ``rows`` (any number of rows).

    Raises ValueError if the rows do not span a rank-n lattice.
    """
    m = [list(map(int, r)) for r in rows]
    if n is None:
        n = len(m[0]) if m else 0
    pivot_row = 0
    for col in range(n):
        # gcd-reduce the column below pivot_row onto a single row
        while True:
            nz = [i for i in range(pivot_row, len(m)) if m[i][col] != 0]
            if not nz:
                raise ValueError("rows do not span a full-rank lattice")
            best = min(nz, key=lambda i: abs(m[i][col]))
            m[pivot_row], m[best] = m[best], m[pivot_row]
            p = m[pivot_row][col]
            done = True
            for i in range(pivot_row + 1, len(m)):
                if m[i][col]:
                    q = m[i][col] // p
                    m[i] = [a - q * b for a, b in zip(m[i], m[pivot_row])]
                    if m[i][col]:
                        done = False
            if done:
                break
        if m[pivot_row][col] < 0:
            m[pivot_row] = [-a for a in m[pivot_row]]
        p = m[pivot_row][col]
        for i in range(pivot_row):
            q = m[i][col] // p
            if q:
                m[i] = [a - q * b for a, b in zip(m[i], m[pivot_row])]
        pivot_row += 1
    if any(any(r) for r in m[n:]):
        raise AssertionError("HNF left a nonzero surplus row")
    return tuple(tuple(r) for r in m[:n])


@dataclass(frozen=True)
class Lattice:
    """A finite-index subgroup of Z^n, stored in row Hermite normal form."""

    basis: linalg.Matrix

    def __post_init__(self):
        b = linalg.as_matrix(self.basis)
        if not b or len(b) != len(b[0]):
            raise ValueError("lattice basis must be a square matrix")
        if linalg.det(b) == 0:
            raise ValueError("lattice basis must have nonzero determinant")
        object.__setattr__(self, "basis", hermite_normal_form(b))

    @classmethod
    def from_generators(cls, rows: Sequence[Sequence[int]], n: int) -> Lattice:
        return cls(hermite_normal_form(rows, n))

    @classmethod
    def diagonal(cls, *d: int) -> Lattice:
        return cls(tuple(tuple(v if i == j else 0 for j in range(len(d))) for i, v in enumerate(d)))

    @classmethod
    def parse(cls, text: str) -> Lattice:
        """Row-major basis "a,b;c,d"."""
        try:
            rows = [[int(v) for v in row.split(",")] for row in text.strip().split(";")]
        except ValueError as exc:
            raise ValueError(f"bad lattice syntax {text!r}") from exc
        return cls(rows)

    @property
    def n(self) -> int:
        return len(self.basis)

    @property
    def index(self) -> int:
        return abs(linalg.det(self.basis))

    def reduce(self, v: Sequence[int]) -> tuple[int, ...]:
        """Canonical residue of v in the box fundamental domain."""
        v = list(v)
        for i, row in enumerate(self.basis):
            q = v[i] // row[i]
            if q:
                for j in range(i, len(v)):
                    v[j] -= q * row[j]
        return tuple(v)

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def contains_lattice(self, other: Lattice) -> bool:
        return all(self.contains(row) for row in other.basis)

    def residues(self) -> list[tuple[int, ...]]:
        """All residues, sorted lexicographically."""
        return list(product(*(range(self.basis[i][i]) for i in range(self.n))))

    def to_text(self) -> str:
        return ";".join(",".join(str(v) for v in row) for row in self.basis)

    def __str__(self):
        return self.to_text()


def enumerate_hnf(n: int, index: int) -> Iterator[Lattice]:
    """All sublattices of Z^n with the given index, each once, in a fixed order."""
    for diag in _factorizations(index, n):
        free = [(i, j) for i in range(n) for j in range(i + 1, n)]
        for vals in product(*(range(diag[j]) for _, j in free)):
            m = [[0] * n for _ in range(n)]
            for i in range(n):
                m[i][i] = diag[i]
            for (i, j), v in zip(free, vals):
                m[i][j] = v
            yield Lattice(tuple(tuple(r) for r in m))


def lattices_up_to(n: int, max_index: int) -> Iterator[Lattice]:
    for k in range(1, max_index + 1):
        yield from enumerate_hnf(n, k)


def _factorizations(m: int, n: int) -> Iterator[tuple[int, ...]]:
    if n == 1:
        yield (m,)
        return
    for d in range(1, m + 1):
        if m % d == 0:
            for rest in _factorizations(m // d, n - 1):
                yield (d,) + rest
