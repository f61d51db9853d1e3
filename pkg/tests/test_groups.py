import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sftkit.errors import GroupMismatch, RelationViolation
from sftkit.groups import (
    EMBEDDING,
    GroupDescriptor,
    Homomorphism,
    apply_hom,
    ball,
    canonical_word,
    check_hom,
    commutator,
    coordinate_projection,
    embedding,
    free_abelian,
    heisenberg3,
    heisenberg_abelianization,
    identity_hom,
    inverse,
    multiply,
    power,
    semidirect,
    word_length,
)

from oracles import heis_coords, heis_matrix, mul_oracle, word_ball

GROUPS = [free_abelian(1), free_abelian(2), free_abelian(3), heisenberg3(), semidirect([[2, 1], [1, 1]]),
          semidirect([[0, 1], [1, 0]])]


def test_descriptor_invariants():
    with pytest.raises(ValueError):
        semidirect([[2, 0], [0, 1]])
    with pytest.raises(ValueError):
        GroupDescriptor("free_abelian", 2, declared_hirsch=3)
    with pytest.raises(ValueError):
        GroupDescriptor("free_abelian", 2, generator_names=("x",))
    assert free_abelian(4).declared_hirsch == 4
    assert heisenberg3().generator_names == ("a", "b", "c")
    assert semidirect([[2, 1], [1, 1]]).generator_names == ("e1", "e2", "t")
    assert semidirect([[2, 1], [1, 1]]).num_generators == 3


def test_multiply_examples():
    z2, h = free_abelian(2), heisenberg3()
    assert multiply(z2.element(1, 2), z2.element(-1, 3)) == z2.element(0, 5)
    assert multiply(h.identity(), h.element(5, -2, 7)) == h.element(5, -2, 7)
    assert multiply(h.element(1, 0, 0), h.element(0, 1, 0)) == h.element(1, 1, 1)
    assert heis_coords(heis_matrix((1, 0, 0)).dot(heis_matrix((0, 1, 0)))) == (1, 1, 1)


def test_semidirect_law():
    g = semidirect([[2, 1], [1, 1]])
    # (v1, t1)(v2, t2) = (v1 + M^t1 v2, t1 + t2); M e1 = (2, 1)
    assert multiply(g.element(0, 0, 1), g.element(1, 0, 0)) == g.element(2, 1, 1)
    # M^-1 = [[1, -1], [-1, 2]]
    assert multiply(g.element(0, 0, -1), g.element(1, 0, 0)) == g.element(1, -1, -1)


def test_group_mismatch():
    with pytest.raises(GroupMismatch):
        multiply(free_abelian(2).element(1, 0), free_abelian(3).element(1, 0, 0))


def test_inverse_examples():
    z3, h = free_abelian(3), heisenberg3()
    assert inverse(z3.element(1, -2, 0)) == z3.element(-1, 2, 0)
    assert inverse(h.element(1, 1, 1)) == h.element(-1, -1, 0)
    # matrix-inverse oracle
    assert heis_coords(heis_matrix((1, 1, 1)).dot(heis_matrix((-1, -1, 0)))) == (0, 0, 0)
    for g in GROUPS:
        assert inverse(g.identity()) == g.identity()


@pytest.mark.parametrize("g", GROUPS, ids=str)
def test_multiply_matches_matrix_oracle(g):
    elems = ball(g, 2)
    rng = random.Random(1)
    for _ in range(300):
        a, b = rng.choice(elems), rng.choice(elems)
        assert multiply(a, b).coords == mul_oracle(g, a.coords, b.coords)


def test_ball_examples():
    z1 = free_abelian(1)
    assert [e.coords for e in ball(z1, 1)] == [(-1,), (0,), (1,)]
    assert len(ball(free_abelian(2), 1)) == 5
    # golden value from literal word expansion (oracles.word_ball)
    assert len(ball(heisenberg3(), 2)) == 29


@pytest.mark.parametrize("g", GROUPS, ids=str)
@pytest.mark.parametrize("r", [0, 1, 2, 3])
def test_ball_matches_word_expansion(g, r):
    assert {e.coords for e in ball(g, r)} == word_ball(g, r)


@pytest.mark.parametrize("g", GROUPS, ids=str)
def test_ball_sorted_monotone_symmetric(g):
    for r in range(3):
        b = ball(g, r)
        assert [e.coords for e in b] == sorted(e.coords for e in b)
        inner = set(b)
        outer = set(ball(g, r + 1))
        assert inner <= outer
        assert {inverse(e) for e in inner} == inner


def test_word_length():
    h = heisenberg3()
    assert word_length(h.identity()) == 0
    assert word_length(h.element(0, 0, 1)) == 1
    assert word_length(h.element(1, 1, 1)) == 2
    assert word_length(free_abelian(3).element(1, -2, 3)) == 6


@pytest.mark.parametrize("g", GROUPS, ids=str)
def test_canonical_word_reconstructs(g):
    gens = g.generators()
    for a in ball(g, 3):
        acc = g.identity()
        for idx, exp in canonical_word(a):
            acc = multiply(acc, power(gens[idx], exp))
        assert acc == a


def test_apply_hom_examples():
    h = heisenberg3()
    ab = heisenberg_abelianization()
    assert apply_hom(ab, h.element(2, 3, 7)) == free_abelian(2).element(2, 3)
    z2 = free_abelian(2)
    assert apply_hom(identity_hom(z2), z2.element(4, -1)) == z2.element(4, -1)
    z1 = free_abelian(1)
    emb = embedding(z1, z2, [z2.element(1, 0)])
    assert emb.kind == EMBEDDING
    assert apply_hom(emb, z1.element(5)) == z2.element(5, 0)


def test_abelianization_drops_z_on_random_elements():
    h = heisenberg3()
    ab = heisenberg_abelianization()
    rng = random.Random(7)
    a, b, c = h.generators()
    for _ in range(100):
        # expand a random word letter by letter, independent of canonical_word
        acc = h.identity()
        for _ in range(rng.randint(0, 12)):
            gen = rng.choice([a, b, c, inverse(a), inverse(b), inverse(c)])
            acc = multiply(acc, gen)
        assert apply_hom(ab, acc).coords == acc.coords[:2]


def test_apply_hom_group_mismatch():
    with pytest.raises(GroupMismatch):
        apply_hom(heisenberg_abelianization(), free_abelian(3).element(1, 2, 3))


def test_check_hom_examples():
    assert check_hom(heisenberg_abelianization())
    h, z2 = heisenberg3(), free_abelian(2)
    a, b, _ = h.generators()
    bad = Homomorphism(z2, h, (a, b), validate=False)
    assert commutator(a, b) == h.element(0, 0, 1)
    assert not check_hom(bad)
    with pytest.raises(RelationViolation):
        Homomorphism(z2, h, (a, b))
    for g in GROUPS:
        assert check_hom(identity_hom(g))


def test_check_hom_semidirect_relations():
    g = semidirect([[2, 1], [1, 1]])
    # abelianization-like map killing the normal Z^2 onto Z (t -> 1)
    z1 = free_abelian(1)
    to_z = Homomorphism(g, z1, (z1.identity(), z1.identity(), z1.element(1)), "quotient",
                        (g.element(1, 0, 0), g.element(0, 1, 0)))
    assert check_hom(to_z)
    # sending e1 -> 1, t -> 0 in Z breaks t e1 t^-1 = e1^2 e2
    bad = Homomorphism(g, z1, (z1.element(1), z1.identity(), z1.identity()), validate=False)
    assert not check_hom(bad)


def test_quotient_kernel_must_die():
    h, z2 = heisenberg3(), free_abelian(2)
    e1, e2 = z2.generators()
    with pytest.raises(RelationViolation):
        Homomorphism(h, z2, (e1, e2, z2.identity()), "quotient", (h.element(1, 0, 0),))
    with pytest.raises(ValueError):
        Homomorphism(h, z2, (e1, e2, z2.identity()), "quotient", ())


def test_coordinate_projection():
    p = coordinate_projection(3, [0, 1])
    assert p.kind == "quotient"
    assert [k.coords for k in p.kernel_generators] == [(0, 0, 1)]
    assert p(free_abelian(3).element(4, 5, 6)).coords == (4, 5)


HOMS = [heisenberg_abelianization(), coordinate_projection(3, [0, 2]), identity_hom(heisenberg3()),
        embedding(free_abelian(1), heisenberg3(), [heisenberg3().element(1, 0, 0)]),
        embedding(free_abelian(1), semidirect([[2, 1], [1, 1]]), [semidirect([[2, 1], [1, 1]]).element(0, 0, 1)]),
        embedding(free_abelian(2), semidirect([[2, 1], [1, 1]]),
                  [semidirect([[2, 1], [1, 1]]).element(1, 0, 0), semidirect([[2, 1], [1, 1]]).element(0, 1, 0)])]


@pytest.mark.parametrize("hom", HOMS, ids=lambda h: f"{h.source}->{h.target}")
def test_apply_hom_multiplicative(hom):
    assert check_hom(hom)
    elems = ball(hom.source, 2)
    for a in elems:
        for b in elems:
            assert apply_hom(hom, multiply(a, b)) == multiply(apply_hom(hom, a), apply_hom(hom, b))


@settings(max_examples=200, deadline=None)
@given(st.tuples(*[st.integers(-50, 50)] * 3), st.tuples(*[st.integers(-50, 50)] * 3),
       st.tuples(*[st.integers(-50, 50)] * 3))
def test_heisenberg_associative_far_from_identity(a, b, c):
    h = heisenberg3()
    x, y, z = h.element(a), h.element(b), h.element(c)
    assert multiply(multiply(x, y), z) == multiply(x, multiply(y, z))
    assert multiply(x, inverse(x)) == h.identity()


@settings(max_examples=100, deadline=None)
@given(st.tuples(st.integers(-6, 6), st.integers(-6, 6), st.integers(-4, 4)),
       st.tuples(st.integers(-6, 6), st.integers(-6, 6), st.integers(-4, 4)))
def test_semidirect_matches_affine_oracle(a, b):
    g = semidirect([[2, 1], [1, 1]])
    assert multiply(g.element(a), g.element(b)).coords == mul_oracle(g, a, b)
