"""Elements of a quotient presentation and their normal-form arithmetic.

A normal form is an exponent vector whose entry at every torsion column lies
in [0, e).  Reduction folds excess pivot powers into the suffix using the
relator row of that column; this is valid because within the subgroup
generated by the letters from position i on, the i-th coordinate is additive.
"""

from __future__ import annotations

from dataclasses import dataclass

from .extgcd import RejectedInput
from .freegroup import (ExpWord, coords_inverse, coords_mult, coords_pow,
                        coords_to_word, eval_free, identity_coords)
from .presentations import QuotientPresentation


@dataclass(frozen=True)
class GroupElement:
    presentation: QuotientPresentation
    coords: tuple[int, ...]

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return mult(self, other)

    def inverse(self) -> "GroupElement":
        return inverse(self)

    def __pow__(self, e: int) -> "GroupElement":
        return power(self, e)

    def is_identity(self) -> bool:
        return not any(self.coords)

    def word(self) -> ExpWord:
        return coords_to_word(self.coords)


def reduce_coords(pres: QuotientPresentation, coords) -> tuple[int, ...]:
    """Fold torsion columns left to right until every one is reduced."""
    basis = pres.basis
    y = list(coords)
    for col in sorted(pres.torsion):
        e = pres.torsion[col]
        q, rem = divmod(y[col - 1], e)
        if q:
            relator = pres.torsion_rows[col]
            suffix = tuple([0] * (col - 1) + y[col - 1:])
            folded = coords_mult(basis, coords_pow(basis, relator, -q), suffix)
            assert not any(folded[:col - 1]) and folded[col - 1] == rem
            y[col - 1:] = folded[col - 1:]
    return tuple(y)


def normal_form(pres: QuotientPresentation, word: ExpWord) -> GroupElement:
    for letter, _ in word:
        if not 1 <= letter <= pres.m:
            raise RejectedInput(
                f"letter index {letter} out of range 1..{pres.m}")
    return GroupElement(pres, reduce_coords(pres, eval_free(pres.basis, word)))


def element(pres: QuotientPresentation, coords) -> GroupElement:
    """Element with the given (not necessarily reduced) exponent vector."""
    coords = tuple(coords)
    if len(coords) != pres.m:
        raise RejectedInput(f"coordinate vectors must have length {pres.m}")
    return GroupElement(pres, reduce_coords(pres, coords))


def identity(pres: QuotientPresentation) -> GroupElement:
    return GroupElement(pres, identity_coords(pres.basis))


def word_problem(pres: QuotientPresentation, word: ExpWord) -> bool:
    """True iff the word represents the identity."""
    return normal_form(pres, word).is_identity()


def _same(u: GroupElement, v: GroupElement) -> QuotientPresentation:
    if u.presentation != v.presentation:
        raise RejectedInput("elements live in different presentations")
    return u.presentation


def mult(u: GroupElement, v: GroupElement) -> GroupElement:
    pres = _same(u, v)
    return GroupElement(pres, reduce_coords(
        pres, coords_mult(pres.basis, u.coords, v.coords)))


def inverse(u: GroupElement) -> GroupElement:
    pres = u.presentation
    return GroupElement(pres, reduce_coords(
        pres, coords_inverse(pres.basis, u.coords)))


def power(u: GroupElement, e: int) -> GroupElement:
    pres = u.presentation
    return GroupElement(pres, reduce_coords(
        pres, coords_pow(pres.basis, u.coords, e)))
