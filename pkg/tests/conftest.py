"""Shared test helpers: independent oracles and random-instance builders."""

from __future__ import annotations

import itertools

import malcev as M
from malcev.freegroup import coords_inverse, coords_mult, eval_free
from malcev.subgroups import full_form_free

# ---------------------------------------------------------------------------
# 3x3 unitriangular integer-matrix model of the free class-2 rank-2 group.
# Generators map to I + E12 and I + E23; this is a faithful model, so it is
# an oracle for the coordinate arithmetic that shares no code with it.


def mat_mul(a, b):
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(3))
                       for j in range(3)) for i in range(3))


MAT_ID = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def mat_inv(a):
    # unitriangular 3x3 inverse
    x, z, y = a[0][1], a[0][2], a[1][2]
    return ((1, -x, x * y - z), (0, 1, -y), (0, 0, 1))


def mat_pow(a, e):
    if e < 0:
        return mat_pow(mat_inv(a), -e)
    out = MAT_ID
    base = a
    while e:
        if e & 1:
            out = mat_mul(out, base)
        base = mat_mul(base, base)
        e >>= 1
    return out


MAT_A1 = ((1, 1, 0), (0, 1, 0), (0, 0, 1))
MAT_A2 = ((1, 0, 0), (0, 1, 1), (0, 0, 1))
# third basis letter is the commutator [a2, a1] = a2^-1 a1^-1 a2 a1
MAT_A3 = mat_mul(mat_mul(mat_inv(MAT_A2), mat_inv(MAT_A1)),
                 mat_mul(MAT_A2, MAT_A1))
MAT_LETTERS = (MAT_A1, MAT_A2, MAT_A3)


def mat_of_word(word):
    out = MAT_ID
    for g, e in word:
        out = mat_mul(out, mat_pow(MAT_LETTERS[g - 1], e))
    return out


def mat_of_coords(coords):
    out = MAT_ID
    for g, e in enumerate(coords, start=1):
        if e:
            out = mat_mul(out, mat_pow(MAT_LETTERS[g - 1], e))
    return out


# ---------------------------------------------------------------------------
# Finite quotients: exhaustive oracles.


class FiniteGroup:
    """Brute-force view of a finite quotient presentation."""

    def __init__(self, pres: M.QuotientPresentation):
        self.pres = pres
        ranges = []
        for col in range(1, pres.m + 1):
            e = pres.torsion.get(col)
            assert e is not None, "presentation is not finite"
            ranges.append(range(e))
        self.elements = [tuple(t) for t in itertools.product(*ranges)]
        self.order = len(self.elements)

    def mult(self, u, v):
        return M.reduce_coords(self.pres, coords_mult(self.pres.basis, u, v))

    def inv(self, u):
        return M.reduce_coords(self.pres, coords_inverse(self.pres.basis, u))

    def subgroup_closure(self, gens):
        gens = [M.reduce_coords(self.pres, g) for g in gens]
        closure = {(0,) * self.pres.m}
        frontier = list(closure)
        step = gens + [self.inv(g) for g in gens]
        while frontier:
            nxt = []
            for u in frontier:
                for g in step:
                    w = self.mult(u, g)
                    if w not in closure:
                        closure.add(w)
                        nxt.append(w)
            frontier = nxt
        return closure

    def centralizer_brute(self, g):
        return {u for u in self.elements
                if self.mult(u, g) == self.mult(g, u)}

    def conjugator_brute(self, g, h):
        """Some u with g = u^-1 h u, else None."""
        for u in self.elements:
            if self.mult(self.mult(self.inv(u), h), u) == g:
                return u
        return None

    def element_order_brute(self, g):
        acc = g
        n = 1
        ident = (0,) * self.pres.m
        while acc != ident:
            acc = self.mult(acc, g)
            n += 1
        return n


def normal_closure_rows(basis, rows):
    """Full form of the normal closure of the given elements in the free
    nilpotent group."""
    rows = full_form_free(basis, rows)
    letters = [eval_free(basis, ((j, s),))
               for j in range(1, basis.r + 1) for s in (1, -1)]
    while True:
        ext = list(rows)
        for row in rows:
            for a in letters:
                ext.append(coords_mult(
                    basis, coords_mult(basis, coords_inverse(basis, a), row), a))
        new = full_form_free(basis, ext)
        if new == rows:
            return new
        rows = new


def random_finite_presentation(rng, c, r, max_pivot=4):
    """A consistent finite quotient presentation with small relative orders."""
    basis = M.build_hall_basis(c, r)
    gens = []
    for i in range(r):
        unit = [0] * basis.m
        unit[i] = rng.choice(range(2, max_pivot + 1))
        gens.append(tuple(unit))
    if rng.random() < 0.5:
        gens.append(tuple(rng.randint(-3, 3) for _ in range(basis.m)))
    rows = normal_closure_rows(basis, gens)
    if len(rows) < basis.m:
        # ensure every column is a pivot so that the quotient is finite
        extra = []
        for col in range(1, basis.m + 1):
            unit = [0] * basis.m
            unit[col - 1] = rng.choice([2, 3, 4])
            extra.append(tuple(unit))
        rows = normal_closure_rows(basis, list(rows) + extra)
    return M.make_quotient_presentation(basis, rows)


def random_reduced_element(rng, pres):
    coords = tuple(rng.randint(-6, 6) for _ in range(pres.m))
    return M.element(pres, coords)


def hom_image_of_letters(source_basis, weight1_images):
    """Images of every basis letter under the homomorphism from the free
    nilpotent group sending generator i to weight1_images[i-1]."""
    basis = source_basis
    out = []
    for bc in basis.letters:
        if bc.weight == 1:
            out.append(weight1_images[len(out)])
        else:
            a, b = out[bc.left - 1], out[bc.right - 1]
            out.append(M.mult(M.mult(M.inverse(a), M.inverse(b)),
                              M.mult(a, b)))
    return out


def hom_apply(letter_images, coords):
    """phi(a_1^{x_1} ... a_m^{x_m}) for a homomorphism phi given on letters."""
    out = M.identity(letter_images[0].presentation)
    for img, e in zip(letter_images, coords):
        if e:
            out = M.mult(out, M.power(img, e))
    return out
