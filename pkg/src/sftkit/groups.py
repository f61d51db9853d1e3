"""Exact arithmetic for the supported finitely generated groups.

Three families are supported, each with a trivially exact normal form:

* ``free_abelian`` -- Z^n, coordinates are the vector itself.
* ``heisenberg3`` -- integer upper unitriangular 3x3 matrices, stored as
  (x, y, z) for [[1, x, z], [0, 1, y], [0, 0, 1]].  Generators a, b, c.
* ``semidirect`` -- Z^n x|_M Z with (v1, t1)(v2, t2) = (v1 + M^t1 v2, t1 + t2),
  stored flat as (v_1, ..., v_n, t).  Generators e_1..e_n, t.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import InitVar, dataclass, field
from functools import lru_cache
from itertools import combinations

from . import linalg
from .errors import GroupMismatch, RelationViolation

FREE_ABELIAN = "free_abelian"
HEISENBERG3 = "heisenberg3"
SEMIDIRECT = "semidirect"
FAMILIES = (FREE_ABELIAN, HEISENBERG3, SEMIDIRECT)

QUOTIENT = "quotient"
EMBEDDING = "embedding"
GENERAL = "general"
HOM_KINDS = (QUOTIENT, EMBEDDING, GENERAL)


@dataclass(frozen=True)
class GroupDescriptor:
    family: str
    rank: int = 0
    matrix: linalg.Matrix | None = None
    generator_names: tuple[str, ...] = ()
    declared_hirsch: int = -1

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown group family {self.family!r}")
        if self.family == HEISENBERG3:
            object.__setattr__(self, "rank", 3)
        if self.rank < 1:
            raise ValueError("rank must be >= 1")
        if self.family == SEMIDIRECT:
            if self.matrix is None:
                raise ValueError("semidirect family needs a matrix")
            m = linalg.as_matrix(self.matrix)
            if len(m) != self.rank or any(len(r) != self.rank for r in m):
                raise ValueError("matrix must be rank x rank")
            if abs(linalg.det(m)) != 1:
                raise ValueError("semidirect matrix must have determinant +-1")
            object.__setattr__(self, "matrix", m)
        elif self.matrix is not None:
            raise ValueError(f"{self.family} takes no matrix")
        if not self.generator_names:
            object.__setattr__(self, "generator_names", _default_names(self.family, self.rank))
        else:
            object.__setattr__(self, "generator_names", tuple(self.generator_names))
        if len(self.generator_names) != self.num_generators:
            raise ValueError(f"expected {self.num_generators} generator names")
        natural = self.rank + 1 if self.family == SEMIDIRECT else self.rank
        if self.declared_hirsch < 0:
            object.__setattr__(self, "declared_hirsch", natural)
        if self.family == FREE_ABELIAN and self.declared_hirsch != self.rank:
            raise ValueError("Hirsch number of Z^n is n")

    @property
    def num_generators(self) -> int:
        return self.rank + 1 if self.family == SEMIDIRECT else self.rank

    @property
    def dim(self) -> int:
        """Length of the coordinate vector."""
        return self.num_generators

    def identity(self) -> GroupElement:
        return GroupElement(self, (0,) * self.dim)

    def element(self, *coords: int) -> GroupElement:
        if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
            coords = tuple(coords[0])
        return GroupElement(self, tuple(int(c) for c in coords))

    def generators(self) -> list[GroupElement]:
        gens = []
        for i in range(self.num_generators):
            c = [0] * self.dim
            c[i] = 1
            gens.append(GroupElement(self, tuple(c)))
        return gens

    def __str__(self):
        if self.family == FREE_ABELIAN:
            return f"Z^{self.rank}"
        if self.family == HEISENBERG3:
            return "H3(Z)"
        return f"Z^{self.rank} x| Z {list(map(list, self.matrix))}"


def _default_names(family: str, rank: int) -> tuple[str, ...]:
    if family == HEISENBERG3:
        return ("a", "b", "c")
    names = tuple(f"e{i + 1}" for i in range(rank))
    return names + ("t",) if family == SEMIDIRECT else names


def free_abelian(n: int) -> GroupDescriptor:
    return GroupDescriptor(FREE_ABELIAN, n)


def heisenberg3() -> GroupDescriptor:
    return GroupDescriptor(HEISENBERG3, 3)


def semidirect(matrix: Sequence[Sequence[int]]) -> GroupDescriptor:
    m = linalg.as_matrix(matrix)
    return GroupDescriptor(SEMIDIRECT, len(m), m)


@dataclass(frozen=True, eq=False)
class GroupElement:
    group: GroupDescriptor
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.group.dim:
            raise ValueError(f"{self.group} elements have {self.group.dim} coordinates")

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.coords == other.coords and (self.group is other.group or self.group == other.group)

    def __hash__(self):
        return hash(self.coords)

    def __lt__(self, other: GroupElement) -> bool:
        return self.coords < other.coords

    def __mul__(self, other: GroupElement) -> GroupElement:
        return multiply(self, other)

    def __repr__(self):
        return f"<{self.group} {self.coords}>"

    def is_identity(self) -> bool:
        return not any(self.coords)


@lru_cache(maxsize=None)
def _matrix_power(m: linalg.Matrix, k: int) -> linalg.Matrix:
    return linalg.matpow(m, k)


def _mul(g: GroupDescriptor, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    fam = g.family
    if fam == FREE_ABELIAN:
        return tuple(x + y for x, y in zip(a, b))
    if fam == HEISENBERG3:
        return (a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[0] * b[1])
    n = g.rank
    t1 = a[n]
    mv = linalg.matvec(_matrix_power(g.matrix, t1), b[:n]) if t1 else b[:n]
    return tuple(x + y for x, y in zip(a[:n], mv)) + (t1 + b[n],)


def _inv(g: GroupDescriptor, a: tuple[int, ...]) -> tuple[int, ...]:
    fam = g.family
    if fam == FREE_ABELIAN:
        return tuple(-x for x in a)
    if fam == HEISENBERG3:
        x, y, z = a
        return (-x, -y, x * y - z)
    n = g.rank
    t = a[n]
    # (v, t)^-1 = (-M^-t v, -t)
    mv = linalg.matvec(_matrix_power(g.matrix, -t), a[:n]) if t else a[:n]
    return tuple(-x for x in mv) + (-t,)


def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    if a.group is not b.group and a.group != b.group:
        raise GroupMismatch(f"cannot multiply elements of {a.group} and {b.group}")
    return GroupElement(a.group, _mul(a.group, a.coords, b.coords))


def inverse(a: GroupElement) -> GroupElement:
    return GroupElement(a.group, _inv(a.group, a.coords))


def power(a: GroupElement, k: int) -> GroupElement:
    if k < 0:
        a, k = inverse(a), -k
    result = a.group.identity()
    base = a
    while k:
        if k & 1:
            result = multiply(result, base)
        base = multiply(base, base)
        k >>= 1
    return result


def commutator(a: GroupElement, b: GroupElement) -> GroupElement:
    """[a, b] = a b a^-1 b^-1, so that [a, b] = c in the Heisenberg group."""
    return multiply(multiply(a, b), multiply(inverse(a), inverse(b)))


def canonical_word(a: GroupElement) -> list[tuple[int, int]]:
    """(generator index, exponent) pairs whose product is ``a``.

    Heisenberg: (x, y, z) = a^x b^y c^(z - xy).  Semidirect: (v, t) = e^v t^t.
    """
    c = a.coords
    if a.group.family == HEISENBERG3:
        x, y, z = c
        return [(0, x), (1, y), (2, z - x * y)]
    return list(enumerate(c))


def _ball_step(g: GroupDescriptor, frontier, seen):
    steps = []
    for gen in g.generators():
        steps.append(gen.coords)
        steps.append(_inv(g, gen.coords))
    nxt = []
    for a in frontier:
        for s in steps:
            b = _mul(g, a, s)
            if b not in seen:
                seen.add(b)
                nxt.append(b)
    return nxt


@lru_cache(maxsize=None)
def _ball_coords(g: GroupDescriptor, r: int) -> tuple[frozenset, tuple]:
    """(all coords within distance r, coords at distance exactly r)."""
    if r == 0:
        e = (0,) * g.dim
        return frozenset([e]), (e,)
    inner, sphere = _ball_coords(g, r - 1)
    seen = set(inner)
    nxt = _ball_step(g, sphere, seen)
    return frozenset(seen), tuple(nxt)


def ball(g: GroupDescriptor, r: int) -> list[GroupElement]:
    """Elements of word length <= r in the standard generators, sorted by coords."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    coords, _ = _ball_coords(g, r)
    return [GroupElement(g, c) for c in sorted(coords)]


def word_length(a: GroupElement, cap: int = 64) -> int:
    """Word length of ``a``; raises ValueError beyond ``cap``."""
    for r in range(cap + 1):
        if a.coords in _ball_coords(a.group, r)[0]:
            return r
    raise ValueError(f"{a} is farther than {cap} from the identity")


@dataclass(frozen=True)
class Homomorphism:
    """A map defined by the images of the source's standard generators.

    ``kind`` is ``quotient`` (kernel_generators generate the kernel H and the
    map realises G -> G/H), ``embedding`` (inclusion of a subgroup) or
    ``general``.  Relations are verified unless ``validate=False``.
    """

    source: GroupDescriptor
    target: GroupDescriptor
    images: tuple[GroupElement, ...]
    kind: str = GENERAL
    kernel_generators: tuple[GroupElement, ...] = ()
    validate: InitVar[bool] = True
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self, validate):
        object.__setattr__(self, "images", tuple(self.images))
        object.__setattr__(self, "kernel_generators", tuple(self.kernel_generators))
        if self.kind not in HOM_KINDS:
            raise ValueError(f"unknown homomorphism kind {self.kind!r}")
        if len(self.images) != self.source.num_generators:
            raise ValueError(f"need {self.source.num_generators} generator images")
        for im in self.images:
            if im.group != self.target:
                raise GroupMismatch("generator image outside the target group")
        for k in self.kernel_generators:
            if k.group != self.source:
                raise GroupMismatch("kernel generator outside the source group")
        if self.kind == QUOTIENT and not self.kernel_generators:
            raise ValueError("a quotient needs kernel generators")
        if validate:
            if not check_hom(self):
                raise RelationViolation("generator images violate the source relations")
            for k in self.kernel_generators:
                if not apply_hom(self, k).is_identity():
                    raise RelationViolation(f"kernel generator {k.coords} does not map to the identity")

    def __hash__(self):
        return hash((self.source, self.target, self.images, self.kind, self.kernel_generators))

    def __call__(self, a: GroupElement) -> GroupElement:
        return apply_hom(self, a)


def apply_hom(h: Homomorphism, a: GroupElement) -> GroupElement:
    if a.group != h.source:
        raise GroupMismatch(f"{a} is not in {h.source}")
    cached = h._cache.get(a.coords)
    if cached is not None:
        return cached
    result = h.target.identity()
    for idx, exp in canonical_word(a):
        if exp:
            result = multiply(result, power(h.images[idx], exp))
    h._cache[a.coords] = result
    return result


def check_hom(h: Homomorphism) -> bool:
    """True iff the generator images satisfy every defining relation of the source."""
    src = h.source
    im = h.images

    def commute(x, y):
        return multiply(x, y) == multiply(y, x)

    if src.family == FREE_ABELIAN:
        return all(commute(x, y) for x, y in combinations(im, 2))
    if src.family == HEISENBERG3:
        a, b, c = im
        return commutator(a, b) == c and commute(a, c) and commute(b, c)
    n = src.rank
    base, t = im[:n], im[n]
    if not all(commute(x, y) for x, y in combinations(base, 2)):
        return False
    t_inv = inverse(t)
    for i in range(n):
        conj = multiply(multiply(t, base[i]), t_inv)
        expected = h.target.identity()
        for j in range(n):
            expected = multiply(expected, power(base[j], src.matrix[j][i]))
        if conj != expected:
            return False
    return True


def identity_hom(g: GroupDescriptor) -> Homomorphism:
    return Homomorphism(g, g, tuple(g.generators()))


def heisenberg_abelianization() -> Homomorphism:
    """H3 -> Z^2 with a, b -> e1, e2 and the central c in the kernel."""
    h, z2 = heisenberg3(), free_abelian(2)
    e1, e2 = z2.generators()
    return Homomorphism(h, z2, (e1, e2, z2.identity()), QUOTIENT, (h.element(0, 0, 1),))


def coordinate_projection(n: int, keep: Sequence[int]) -> Homomorphism:
    """Z^n -> Z^k keeping the listed axes; the dropped axes form the kernel."""
    keep = list(keep)
    src, tgt = free_abelian(n), free_abelian(len(keep))
    tgens = tgt.generators()
    images = [tgens[keep.index(i)] if i in keep else tgt.identity() for i in range(n)]
    kernel = [g for i, g in enumerate(src.generators()) if i not in keep]
    kind = QUOTIENT if kernel else GENERAL
    return Homomorphism(src, tgt, tuple(images), kind, tuple(kernel))


def embedding(source: GroupDescriptor, target: GroupDescriptor, images: Sequence[GroupElement]) -> Homomorphism:
    return Homomorphism(source, target, tuple(images), EMBEDDING)
