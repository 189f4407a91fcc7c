import random

import pytest

import malcev as M
from conftest import (FiniteGroup, hom_apply, hom_image_of_letters,
                      random_finite_presentation)


HEIS = M.free_presentation(2, 2)


def letter_elements(pres):
    out = []
    for i in range(pres.m):
        unit = [0] * pres.m
        unit[i] = 1
        out.append(M.element(pres, unit))
    return out


# ---------------------------------------------------------------------------
# Orders and the torsion bound.

def test_torsion_bound_fixtures():
    assert M.torsion_bound(HEIS) == 1
    b = M.build_hall_basis(1, 2)
    pres = M.make_quotient_presentation(b, ((2, 0), (0, 3)))
    assert M.torsion_bound(pres) == 6


def test_element_order_matches_brute_force_and_divides_bound():
    rng = random.Random(51)
    for _ in range(3):
        pres = random_finite_presentation(rng, 2, 2)
        fg = FiniteGroup(pres)
        bound = M.torsion_bound(pres)
        for _ in range(15):
            g = M.element(pres, rng.choice(fg.elements))
            order = M.element_order(g)
            if g.is_identity():
                assert order == 1
            else:
                assert order == fg.element_order_brute(g.coords)
            assert bound % order == 0


def test_element_order_infinite():
    assert M.element_order(M.element(HEIS, (1, 0, 0))) is None
    assert M.element_order(M.identity(HEIS)) == 1


# ---------------------------------------------------------------------------
# Kernels and preimages.

def test_kernel_of_identity_map_is_trivial():
    gens = tuple(letter_elements(HEIS))
    spec = M.HomSpec(HEIS, HEIS, gens, gens)
    kernel, pre = M.kernel_and_preimage(spec, M.element(HEIS, (2, -1, 3)))
    assert kernel == []
    assert pre == M.element(HEIS, (2, -1, 3))


def test_kernel_of_zero_map_is_whole_subgroup():
    gens = tuple(letter_elements(HEIS))
    images = tuple(M.identity(HEIS) for _ in gens)
    spec = M.HomSpec(HEIS, HEIS, gens, images)
    kernel, pre = M.kernel_and_preimage(spec, M.identity(HEIS))
    assert [k.coords for k in kernel] == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert pre is not None and spec.source == pre.presentation
    with pytest.raises(M.NotInImage):
        M.kernel_and_preimage(spec, M.element(HEIS, (1, 0, 0)))


def test_kernel_fixture_rank_two_to_rank_one():
    # phi: Z^2 -> Z with a1 -> t^2, a2 -> t^3; kernel <(3, -2)>, and t has
    # the preimage a1^2 a2^-1.
    src = M.free_presentation(1, 2)
    tgt = M.free_presentation(1, 1)
    spec = M.HomSpec(src, tgt, tuple(letter_elements(src)),
                     (M.element(tgt, (2,)), M.element(tgt, (3,))))
    kernel, pre = M.kernel_and_preimage(spec, M.element(tgt, (1,)))
    assert [k.coords for k in kernel] == [(3, -2)]
    assert pre.coords == (2, -1)
    with pytest.raises(M.RejectedInput):
        M.kernel_and_preimage(spec, M.element(src, (1, 0)))


def test_random_homomorphisms_kernel_and_preimage():
    rng = random.Random(53)
    src = M.free_presentation(2, 2)
    src_letters = letter_elements(src)
    for _ in range(8):
        tgt = random_finite_presentation(rng, 2, 2)
        w1 = [M.element(tgt, tuple(rng.randint(-3, 3) for _ in range(tgt.m)))
              for _ in range(src.basis.r)]
        images = hom_image_of_letters(src.basis, w1)
        spec = M.HomSpec(src, tgt, tuple(src_letters), tuple(images))
        kernel, _ = M.kernel_and_preimage(spec)
        for k in kernel:
            assert hom_apply(images, k.coords).is_identity()
        g = M.element(src, tuple(rng.randint(-4, 4) for _ in range(src.m)))
        h = hom_apply(images, g.coords)
        _, pre = M.kernel_and_preimage(spec, h)
        assert hom_apply(images, pre.coords) == h


def test_inner_automorphism_has_trivial_kernel():
    rng = random.Random(54)
    pres = random_finite_presentation(rng, 2, 2)
    u = M.element(pres, tuple(rng.randint(-3, 3) for _ in range(pres.m)))
    gens = tuple(letter_elements(pres))
    images = tuple(M.mult(M.mult(M.inverse(u), g), u) for g in gens)
    kernel, _ = M.kernel_and_preimage(M.HomSpec(pres, pres, gens, images))
    assert kernel == []


def test_hom_spec_validation():
    with pytest.raises(M.RejectedInput):
        M.HomSpec(HEIS, HEIS, tuple(letter_elements(HEIS)), ())
    other = M.free_presentation(1, 2)
    with pytest.raises(M.RejectedInput):
        M.HomSpec(HEIS, HEIS, (M.identity(other),), (M.identity(HEIS),))


# ---------------------------------------------------------------------------
# Centralizers and conjugacy.

def test_centralizer_heisenberg_fixture():
    gens = M.centralizer(HEIS, M.element(HEIS, (1, 0, 0)))
    assert [g.coords for g in gens] == [(1, 0, 0), (0, 0, 1)]
    # a central element is centralized by everything
    gens = M.centralizer(HEIS, M.element(HEIS, (0, 0, 5)))
    assert [g.coords for g in gens] == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_centralizer_matches_brute_force():
    rng = random.Random(61)
    for _ in range(3):
        pres = random_finite_presentation(rng, 2, 2)
        fg = FiniteGroup(pres)
        for _ in range(6):
            g = M.element(pres, rng.choice(fg.elements))
            gens = M.centralizer(pres, g)
            for u in gens:
                assert M.mult(u, g) == M.mult(g, u)
            closure = fg.subgroup_closure([u.coords for u in gens])
            assert closure == fg.centralizer_brute(g.coords)


def test_conjugacy_heisenberg_fixture():
    g = M.element(HEIS, (1, 0, 2))
    h = M.element(HEIS, (1, 0, 0))
    ans = M.conjugacy(HEIS, g, h)
    assert ans.conjugate
    u = ans.witness
    assert M.mult(M.mult(M.inverse(u), h), u) == g
    # distinct abelianizations are never conjugate
    assert not M.conjugacy(HEIS, M.element(HEIS, (2, 0, 0)), h).conjugate
    # distinct central elements are never conjugate
    assert not M.conjugacy(HEIS, M.element(HEIS, (0, 0, 1)),
                           M.element(HEIS, (0, 0, 2))).conjugate


def test_conjugacy_matches_brute_force():
    rng = random.Random(62)
    for _ in range(2):
        pres = random_finite_presentation(rng, 2, 2)
        fg = FiniteGroup(pres)
        for _ in range(12):
            g = M.element(pres, rng.choice(fg.elements))
            if rng.random() < 0.5:
                u = M.element(pres, rng.choice(fg.elements))
                h = M.mult(M.mult(u, g), M.inverse(u))
            else:
                h = M.element(pres, rng.choice(fg.elements))
            ans = M.conjugacy(pres, g, h)
            brute = fg.conjugator_brute(g.coords, h.coords)
            assert ans.conjugate == (brute is not None)
            if ans.conjugate:
                w = ans.witness
                assert M.mult(M.mult(M.inverse(w), h), w) == g


# ---------------------------------------------------------------------------
# The power problem.

def test_power_problem_fixtures():
    g = M.element(HEIS, (1, 1, 0))
    assert M.power_problem(HEIS, g, M.element(HEIS, (3, 3, 3))) == 3
    assert M.power_problem(HEIS, g, M.power(g, 1000)) == 1000
    assert M.power_problem(HEIS, g, M.power(g, -4)) == -4
    with pytest.raises(M.NoPower):
        M.power_problem(HEIS, g, M.element(HEIS, (0, 0, 1)))
    with pytest.raises(M.NoPower):
        M.power_problem(HEIS, M.identity(HEIS), g)
    assert M.power_problem(HEIS, M.identity(HEIS), M.identity(HEIS)) == 0


def test_power_problem_progressions_and_torsion():
    b = M.build_hall_basis(1, 1)
    pres = M.make_quotient_presentation(b, ((5,),))
    g = M.element(pres, (1,))
    h = M.element(pres, (2,))
    assert M.power_problem(pres, g, h) == 2
    # k = 2 mod 5 intersected with 1 + 3Z gives 7 mod 15
    assert M.power_problem(pres, g, h, progression=(1, 3)) == 7
    with pytest.raises(M.NoPower):
        M.power_problem(pres, g, h, progression=(0, 5))
    with pytest.raises(M.RejectedInput):
        M.power_problem(pres, g, h, progression=(0, 0))


def test_power_problem_matches_brute_force():
    rng = random.Random(71)
    for _ in range(3):
        pres = random_finite_presentation(rng, 2, 2)
        bound = M.torsion_bound(pres)
        fg = FiniteGroup(pres)
        for _ in range(15):
            g = M.element(pres, rng.choice(fg.elements))
            h = M.element(pres, rng.choice(fg.elements))
            solutions = [k for k in range(bound) if M.power(g, k) == h]
            try:
                k = M.power_problem(pres, g, h)
            except M.NoPower:
                assert not solutions
                continue
            assert solutions and k == solutions[0]
            assert M.power(g, k) == h


def test_decision_inputs_must_share_presentation():
    other = M.free_presentation(1, 2)
    with pytest.raises(M.RejectedInput):
        M.centralizer(HEIS, M.identity(other))
    with pytest.raises(M.RejectedInput):
        M.conjugacy(HEIS, M.identity(HEIS), M.identity(other))
    with pytest.raises(M.RejectedInput):
        M.power_problem(HEIS, M.identity(other), M.identity(HEIS))
