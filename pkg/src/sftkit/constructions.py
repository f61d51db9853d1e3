"""SFT-building operations: lifts through quotients, induction from subgroups,
products, and the mod-3 / periodic-extension pieces of the automorphism-free
construction on Z^n.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from itertools import product as cartesian

from .errors import (
    ChainTypeMismatch,
    GroupMismatch,
    NonInjectiveOnSupport,
    NotAnEmbedding,
    NotAQuotient,
    ProjectionIncomplete,
    RelationViolation,
    WrongBaseGroup,
)
from .groups import (
    EMBEDDING,
    FREE_ABELIAN,
    QUOTIENT,
    GroupDescriptor,
    GroupElement,
    Homomorphism,
    apply_hom,
    ball,
    canonical_word,
    check_hom,
    free_abelian,
    multiply,
    power,
)
from .sft import Alphabet, Configuration, Pattern, Sft, WangTileSet, wang_to_sft

SECTION_SEARCH_RADIUS = 4


def full_shift(group: GroupDescriptor, symbols: Sequence[str] = ("a", "b")) -> Sft:
    return Sft(group, Alphabet(tuple(symbols)), (), {"construction": "full_shift"})


def column_base() -> Sft:
    """Two symbols on Z^2, constant along e2; the identity is its projection.

    A periodic stand-in for an aperiodic base: every column is monochromatic,
    rows are unconstrained.
    """
    z2 = free_abelian(2)
    o, e2 = z2.identity(), z2.element(0, 1)
    forbidden = tuple(Pattern(z2, ((o, a), (e2, b))) for a in range(2) for b in range(2) if a != b)
    return Sft(z2, Alphabet(("0", "1")), forbidden, {"construction": "column_base"})


def _generator_preimages(phi: Homomorphism) -> list[GroupElement]:
    pre = []
    for gen in phi.target.generators():
        for r in range(SECTION_SEARCH_RADIUS + 1):
            hit = next((g for g in ball(phi.source, r) if apply_hom(phi, g) == gen), None)
            if hit is not None:
                pre.append(hit)
                break
        else:
            raise NotAQuotient(f"no preimage of generator {gen.coords} within radius {SECTION_SEARCH_RADIUS}")
    return pre


def section(phi: Homomorphism):
    """Deterministic set-theoretic section of a surjection.

    Each target generator gets its lexicographically first preimage of least
    word length; an element is lifted along its canonical word.  For a
    coordinate projection Z^n -> Z^k this appends zeros.
    """
    pre = _generator_preimages(phi)

    def lift(q: GroupElement) -> GroupElement:
        out = phi.source.identity()
        for idx, exp in canonical_word(q):
            if exp:
                out = multiply(out, power(pre[idx], exp))
        return out

    return lift


def quotient_lift(x: Sft, phi: Homomorphism) -> Sft:
    """SFT on G whose points are y_g = x_phi(g) for x in X, with X an SFT on G/H."""
    if phi.kind != QUOTIENT:
        raise NotAQuotient(f"homomorphism kind is {phi.kind!r}")
    if x.group != phi.target:
        raise GroupMismatch(f"SFT lives on {x.group}, quotient map lands in {phi.target}")
    if not check_hom(phi):
        raise RelationViolation("quotient map violates the source relations")
    lift = section(phi)
    src = phi.source
    forbidden = [Pattern(src, tuple((lift(q), s) for q, s in p.entries)) for p in x.forbidden]
    e = src.identity()
    k = len(x.alphabet)
    for kern in phi.kernel_generators:
        for a in range(k):
            for b in range(k):
                if a != b:
                    forbidden.append(Pattern(src, ((e, a), (kern, b))))
    return Sft(src, x.alphabet, tuple(forbidden), {"construction": "quotient_lift"})


def subgroup_induce(x: Sft, emb: Homomorphism) -> Sft:
    """The same forbidden patterns, read in a larger group through an embedding."""
    if emb.kind != EMBEDDING:
        raise NotAnEmbedding(f"homomorphism kind is {emb.kind!r}")
    if x.group != emb.source:
        raise GroupMismatch(f"SFT lives on {x.group}, embedding starts at {emb.source}")
    seen: dict[tuple, tuple] = {}
    for g in ball(emb.source, x.support_radius()):
        img = apply_hom(emb, g).coords
        if seen.setdefault(img, g.coords) != g.coords:
            raise NonInjectiveOnSupport(f"{g.coords} and {seen[img]} have the same image")
    forbidden = []
    for p in x.forbidden:
        entries = tuple((apply_hom(emb, g), s) for g, s in p.entries)
        if len({g.coords for g, _ in entries}) != len(entries):
            raise NonInjectiveOnSupport("two support elements collide under the embedding")
        forbidden.append(Pattern(emb.target, entries))
    return Sft(emb.target, x.alphabet, tuple(forbidden), {"construction": "subgroup_induce"})


def _mixed_radix(digits: Sequence[int], sizes: Sequence[int]) -> int:
    idx = 0
    for d, k in zip(digits, sizes):
        idx = idx * k + d
    return idx


def split_symbol(index: int, sizes: Sequence[int]) -> tuple[int, ...]:
    """Component symbol indices of a product-alphabet index."""
    out = []
    for k in reversed(sizes):
        index, d = divmod(index, k)
        out.append(d)
    return tuple(reversed(out))


def product(*factors: Sft) -> Sft:
    """Cartesian product X_1 x ... x X_m over one group.

    Product symbols are ordered lexicographically on component indices; each
    component's forbidden pattern is repeated for every choice of the other
    components on its support.
    """
    if len(factors) < 2:
        raise ValueError("product needs at least two factors")
    group = factors[0].group
    for f in factors[1:]:
        if f.group != group:
            raise GroupMismatch(f"cannot multiply SFTs over {group} and {f.group}")
    sizes = [len(f.alphabet) for f in factors]
    symbols = tuple("(" + ",".join(f.alphabet[i] for f, i in zip(factors, combo)) + ")"
                    for combo in cartesian(*(range(k) for k in sizes)))
    forbidden = []
    for i, f in enumerate(factors):
        others = [range(k) for j, k in enumerate(sizes) if j != i]
        other_choices = list(cartesian(*others))
        for p in f.forbidden:
            support = p.support
            syms = p.symbols
            for fill in cartesian(other_choices, repeat=len(support)):
                entries = []
                for g, s, rest in zip(support, syms, fill):
                    digits = list(rest[:i]) + [s] + list(rest[i:])
                    entries.append((g, _mixed_radix(digits, sizes)))
                forbidden.append(Pattern(group, tuple(entries)))
    meta = {"construction": "product", "factor_sizes": sizes}
    return Sft(group, Alphabet(symbols), tuple(forbidden), meta)


def project(c: Configuration, sizes: Sequence[int], i: int) -> Configuration:
    """Component i of a configuration over a product alphabet."""
    return Configuration(c.domain, tuple(split_symbol(v, sizes)[i] for v in c.values))


def mod3_marker(n: int) -> Sft:
    """Alphabet {0,1,2}^n; stepping along e_i adds 1 mod 3 to digit i and nothing else.

    Its points are exactly the translates of z_p = (p_1 mod 3, ..., p_n mod 3).
    """
    if n < 1:
        raise ValueError("dimension must be >= 1")
    g = free_abelian(n)
    digits = list(cartesian(range(3), repeat=n))
    index = {d: i for i, d in enumerate(digits)}
    o = g.identity()
    forbidden = []
    for axis, e in enumerate(g.generators()):
        for a in digits:
            succ = list(a)
            succ[axis] = (succ[axis] + 1) % 3
            allowed = index[tuple(succ)]
            for j in range(len(digits)):
                if j != allowed:
                    forbidden.append(Pattern(g, ((o, index[a]), (e, j))))
    symbols = tuple("".join(map(str, d)) for d in digits)
    return Sft(g, Alphabet(symbols), tuple(forbidden), {"construction": "mod3_marker", "n": n})


def mod3_point(domain) -> Configuration:
    """The canonical point z restricted to a domain (symbol index of p mod 3)."""
    n = domain.group.rank

    def value(g):
        return _mixed_radix([c % 3 for c in g.coords], [3] * n)

    return Configuration.from_function(domain, value)


def _embed_pattern(p: Pattern, group: GroupDescriptor, axes: Sequence[int]) -> Pattern:
    """Send base coordinate k to coordinate axes[k] of ``group``."""
    entries = []
    for g, s in p.entries:
        coords = [0] * group.rank
        for k, c in enumerate(g.coords):
            coords[axes[k]] = c
        entries.append((GroupElement(group, tuple(coords)), s))
    return Pattern(group, tuple(entries))


def _require_z2(y: Sft):
    if y.group.family != FREE_ABELIAN or y.group.rank != 2:
        raise WrongBaseGroup(f"base SFT must live on Z^2, not {y.group}")


def extend_periodic(y: Sft, n: int, axes: tuple[int, int] = (0, 1)) -> Sft:
    """Z^2 SFT placed on the plane spanned by ``axes`` of Z^n, constant along the rest."""
    _require_z2(y)
    if n < 2:
        raise ValueError("n must be >= 2")
    if n == 2 and tuple(axes) == (0, 1):
        return y
    g = free_abelian(n)
    forbidden = [_embed_pattern(p, g, axes) for p in y.forbidden]
    o = g.identity()
    k = len(y.alphabet)
    for axis, e in enumerate(g.generators()):
        if axis in axes:
            continue
        for a in range(k):
            for b in range(k):
                if a != b:
                    forbidden.append(Pattern(g, ((o, a), (e, b))))
    meta = {"construction": "extend_periodic", "plane": list(axes)}
    return Sft(g, y.alphabet, tuple(forbidden), meta)


def factor_plane(i: int, n: int) -> tuple[int, int]:
    """0-based axes carrying the base for factor i (1-based): e_i and e_{i mod n + 1}."""
    return (i - 1, i % n)


def automorphism_free_product(base: Sft, projection: Mapping[str, int], n: int) -> Sft:
    """X_1 x ... x X_n x Z with X_i the base on the (e_i, e_{i mod n+1}) plane.

    The projection map is kept in ``meta`` for window diagnostics.  Whether
    the result has trivial Div depends entirely on the base SFT supplied.
    """
    _require_z2(base)
    if n < 2:
        raise ValueError("n must be >= 2")
    missing = [s for s in base.alphabet if s not in projection]
    if missing:
        raise ProjectionIncomplete(f"projection undefined on {missing}")
    proj = {s: int(projection[s]) for s in base.alphabet}
    if any(v not in (0, 1) for v in proj.values()):
        raise ProjectionIncomplete("projection values must be 0 or 1")
    factors = [extend_periodic(base, n, factor_plane(i, n)) for i in range(1, n + 1)]
    out = product(*factors, mod3_marker(n))
    meta = {
        "construction": "automorphism_free_product",
        "n": n,
        "factor_sizes": [len(f.alphabet) for f in factors] + [3**n],
        "planes": [list(factor_plane(i, n)) for i in range(1, n + 1)],
        "projection": proj,
        "base_alphabet": list(base.alphabet),
    }
    return Sft(out.group, out.alphabet, out.forbidden, meta)


def reduce_to_group(t: WangTileSet, chain: Sequence[Homomorphism]) -> Sft:
    """Carry a Wang tile set on Z^2 along quotient lifts and subgroup inductions."""
    current = wang_to_sft(t)
    for step, hom in enumerate(chain):
        if hom.kind == QUOTIENT:
            if hom.target != current.group:
                raise ChainTypeMismatch(f"step {step}: quotient lands in {hom.target}, SFT is on {current.group}")
            current = quotient_lift(current, hom)
        elif hom.kind == EMBEDDING:
            if hom.source != current.group:
                raise ChainTypeMismatch(f"step {step}: embedding starts at {hom.source}, SFT is on {current.group}")
            current = subgroup_induce(current, hom)
        else:
            raise ChainTypeMismatch(f"step {step}: {hom.kind!r} maps cannot be used in a reduction")
    return current
