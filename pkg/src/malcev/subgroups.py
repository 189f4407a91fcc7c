"""Row operations, matrix reduction to the unique subgroup full form,
membership with witnesses, and subgroup presentations.

The reduction is written against a minimal polycyclic context (length of the
coordinate vector, torsion columns with relative orders, and exact group
multiplication/powering on reduced vectors).  Besides a quotient presentation
itself, a componentwise direct product H x G is such a context, with the
H-coordinates preceding the G-coordinates; the kernel computation relies on
that ordering.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .extgcd import (RejectedInput, extgcd_bounded, extgcd_pair_bounded)
from .freegroup import ExpWord, SizeCapExceeded, coords_mult, coords_pow
from .groups import GroupElement, reduce_coords
from .presentations import (FullFormMatrix, NilpotentPresentation,
                            QuotientPresentation, check_echelon_conditions,
                            first_nonzero)

DEFAULT_WORD_CAP = 1 << 20


# ---------------------------------------------------------------------------
# Polycyclic contexts.

class GroupContext:
    def __init__(self, pres: QuotientPresentation):
        self.pres = pres
        self.m = pres.m
        self.torsion = pres.torsion
        self.identity = (0,) * pres.m

    def mult(self, u, v):
        return reduce_coords(self.pres, coords_mult(self.pres.basis, u, v))

    def pow(self, u, e):
        return reduce_coords(self.pres, coords_pow(self.pres.basis, u, e))


class ProductContext:
    """H x G with concatenated coordinates, H first.

    Multiplication is componentwise, so the factors may have unrelated
    classes and ranks.
    """

    def __init__(self, p_h: QuotientPresentation, p_g: QuotientPresentation):
        self.h = GroupContext(p_h)
        self.g = GroupContext(p_g)
        self.split = p_h.m
        self.m = p_h.m + p_g.m
        self.torsion = dict(p_h.torsion)
        self.torsion.update({self.split + col: e
                             for col, e in p_g.torsion.items()})
        self.identity = (0,) * self.m

    def mult(self, u, v):
        s = self.split
        return self.h.mult(u[:s], v[:s]) + self.g.mult(u[s:], v[s:])

    def pow(self, u, e):
        s = self.split
        return self.h.pow(u[:s], e) + self.g.pow(u[s:], e)


# ---------------------------------------------------------------------------
# Expression trees over the original generator symbols.

def _expr_gen(k: int):
    return ("g", k)


def _expr_pow(e, l: int):
    if l == 1:
        return e
    return ("p", e, l)


def _expr_mul(parts):
    parts = tuple(p for p in parts if p != ("m", ()))
    if len(parts) == 1:
        return parts[0]
    return ("m", parts)


_EXPR_ONE = ("m", ())


def expand_expression(expr, cap: int = DEFAULT_WORD_CAP) -> ExpWord:
    """Flatten an expression tree to a word over the original generators
    (1-based symbol indices)."""
    budget = [cap]

    def emit(out, factor):
        budget[0] -= 1
        if budget[0] < 0:
            raise SizeCapExceeded(f"expression longer than cap {cap}")
        out.append(factor)

    def walk(e, out, flip: bool):
        tag = e[0]
        if tag == "g":
            emit(out, (e[1] + 1, -1 if flip else 1))
        elif tag == "m":
            parts = reversed(e[1]) if flip else e[1]
            for p in parts:
                walk(p, out, flip)
        else:  # power
            _, base, l = e
            if l == 0:
                return
            if flip:
                l = -l
            if base[0] == "g":
                emit(out, (base[1] + 1, l))
                return
            sub: list = []
            walk(base, sub, l < 0)
            for _ in range(abs(l)):
                for f in sub:
                    emit(out, f)

    out: list = []
    walk(expr, out, False)
    merged: list = []
    for g, x in out:
        if merged and merged[-1][0] == g:
            merged[-1] = (g, merged[-1][1] + x)
            if merged[-1][1] == 0:
                merged.pop()
        else:
            merged.append((g, x))
    return tuple(merged)


@dataclass(frozen=True)
class TrackedExpressions:
    """Derivations of the full-form rows over the original generators."""
    expressions: tuple
    n_generators: int


# ---------------------------------------------------------------------------
# The five-step reduction.

def full_form_rows(ctx, rows, track: bool = False):
    """Unique full form of the subgroup generated by the given reduced
    coordinate vectors; optionally the derivation of every output row."""
    work: list = [(tuple(r), _expr_gen(k)) for k, r in enumerate(rows)]
    k = 0
    last_pivot = 0
    while True:
        # Step 5 (and deduplication): drop zero and repeated tail rows.
        seen = set()
        tail = []
        for row, ex in work[k:]:
            if not any(row) or row in seen:
                continue
            seen.add(row)
            tail.append((row, ex))
        work[k:] = tail

        piv = min((first_nonzero(r) for r, _ in work[k:]), default=0)
        if piv == 0:
            break
        assert piv > last_pivot
        n = len(work)

        # Step 1: bounded gcd combination of the pivot column.
        column = [work[i][0][piv - 1] for i in range(k, n)]
        d, ls, _ = extgcd_bounded(column)
        new_row = ctx.identity
        parts = []
        for i, l in zip(range(k, n), ls):
            if l:
                new_row = ctx.mult(new_row, ctx.pow(work[i][0], l))
                parts.append(_expr_pow(work[i][1], l))
        new_ex = _expr_mul(parts)
        assert new_row[piv - 1] == d and not any(new_row[:piv - 1])
        work.append((new_row, new_ex))

        # Step 2: clear the column below, reduce above, move the pivot up.
        for i in range(k, n):
            q = work[i][0][piv - 1] // d
            if q:
                row, ex = work[i]
                work[i] = (ctx.mult(row, ctx.pow(new_row, -q)),
                           _expr_mul((ex, _expr_pow(new_ex, -q))))
        for i in range(k):
            q = work[i][0][piv - 1] // d
            if q:
                row, ex = work[i]
                work[i] = (ctx.mult(row, ctx.pow(new_row, -q)),
                           _expr_mul((ex, _expr_pow(new_ex, -q))))
        work[k], work[-1] = work[-1], work[k]

        # Step 3: fold in the relator of a torsion pivot column.  The
        # appended trivial relator row is the identity element, so the
        # combination row is plainly h_k^{n1} and the cleared relator row is
        # a genuine power of it.
        if piv in ctx.torsion:
            e = ctx.torsion[piv]
            hk, hk_ex = work[k]
            d_cur = hk[piv - 1]
            delta, n1, _ = extgcd_pair_bounded(d_cur, e)
            comb = ctx.pow(hk, n1)
            comb_ex = _expr_pow(hk_ex, n1)
            assert comb[piv - 1] == delta and not any(comb[:piv - 1])
            cleared_k = (ctx.mult(hk, ctx.pow(comb, -(d_cur // delta))),
                         _expr_mul((hk_ex, _expr_pow(comb_ex, -(d_cur // delta)))))
            cleared_rel = (ctx.pow(comb, -(e // delta)),
                           _expr_pow(comb_ex, -(e // delta)))
            work[k] = (comb, comb_ex)
            work.append(cleared_k)
            work.append(cleared_rel)
            for j in range(k):
                q = work[j][0][piv - 1] // delta
                if q:
                    row, ex = work[j]
                    work[j] = (ctx.mult(row, ctx.pow(comb, -q)),
                               _expr_mul((ex, _expr_pow(comb_ex, -q))))

        # Step 4: closure under conjugation by the new pivot row, plus the
        # torsion power.
        hk, hk_ex = work[k]
        bound = ctx.m - piv
        if bound > 0:
            hk_inv = ctx.pow(hk, -1)
            appended = []
            for j in range(k + 1, len(work)):
                hj, hj_ex = work[j]
                if not any(hj):
                    continue
                for sign in (1, -1):
                    left = hk_inv if sign == 1 else hk
                    right = hk if sign == 1 else hk_inv
                    cur = hj
                    for l in range(1, bound + 1):
                        nxt = ctx.mult(ctx.mult(left, cur), right)
                        if nxt == cur:
                            break
                        cur = nxt
                        appended.append((cur, _expr_mul((
                            _expr_pow(hk_ex, -sign * l), hj_ex,
                            _expr_pow(hk_ex, sign * l)))))
            work.extend(appended)
        if piv in ctx.torsion:
            q = ctx.torsion[piv] // hk[piv - 1]
            work.append((ctx.pow(hk, q), _expr_pow(hk_ex, q)))

        last_pivot = piv
        k += 1

    out = tuple(r for r, _ in work[:k])
    check_echelon_conditions(out, ctx.torsion)
    return out, (tuple(ex for _, ex in work[:k]) if track else None)


# ---------------------------------------------------------------------------
# Public wrappers in terms of presentations.

@dataclass(frozen=True)
class CoordinateMatrix:
    presentation: QuotientPresentation
    rows: tuple[tuple[int, ...], ...]
    expressions: tuple[ExpWord, ...] | None = None  # over original symbols

    def __post_init__(self):
        for r in self.rows:
            if len(r) != self.presentation.m:
                raise RejectedInput(
                    f"rows must have length {self.presentation.m}")


def coordinate_matrix(pres: QuotientPresentation, rows,
                      track: bool = False) -> CoordinateMatrix:
    rows = tuple(tuple(r) for r in rows)
    exprs = tuple(((k + 1, 1),) for k in range(len(rows))) if track else None
    return CoordinateMatrix(pres, rows, exprs)


def _word_inv(w: ExpWord) -> ExpWord:
    return tuple((g, -x) for g, x in reversed(w))


def _word_pow(w: ExpWord, l: int, cap: int = DEFAULT_WORD_CAP) -> ExpWord:
    if l == 0 or not w:
        return ()
    if len(w) == 1:
        return ((w[0][0], w[0][1] * l),)
    if len(w) * abs(l) > cap:
        raise SizeCapExceeded(f"expression longer than cap {cap}")
    base = w if l > 0 else _word_inv(w)
    return base * abs(l)


def apply_row_operation(matrix: CoordinateMatrix, op) -> CoordinateMatrix:
    """One of the five subgroup-preserving row operations.

    op is a tuple: ("swap", i, j); ("combine", i, j, l) replacing row i by
    h_i h_j^l; ("add_trivial",); ("add_relator", col); ("remove", i) for a
    trivial row; ("invert", i); ("append_product", ((i1, l1), ...)).
    Row indices are 1-based.
    """
    pres = matrix.presentation
    ctx = GroupContext(pres)
    rows = list(matrix.rows)
    exprs = list(matrix.expressions) if matrix.expressions is not None else None

    def check(i):
        if not 1 <= i <= len(rows):
            raise RejectedInput(f"row index {i} out of range")

    kind = op[0]
    if kind == "swap":
        _, i, j = op
        check(i), check(j)
        rows[i - 1], rows[j - 1] = rows[j - 1], rows[i - 1]
        if exprs is not None:
            exprs[i - 1], exprs[j - 1] = exprs[j - 1], exprs[i - 1]
    elif kind == "combine":
        _, i, j, l = op
        check(i), check(j)
        if i == j:
            raise RejectedInput("combine requires distinct rows")
        rows[i - 1] = ctx.mult(_reduced(pres, rows[i - 1]),
                               ctx.pow(_reduced(pres, rows[j - 1]), l))
        if exprs is not None:
            exprs[i - 1] = exprs[i - 1] + _word_pow(exprs[j - 1], l)
    elif kind == "add_trivial":
        rows.append(ctx.identity)
        if exprs is not None:
            exprs.append(())
    elif kind == "add_relator":
        _, col = op
        if col not in pres.torsion:
            raise RejectedInput(f"column {col} is not a torsion column")
        rows.append(pres.torsion_rows[col])
        if exprs is not None:
            exprs.append(())
    elif kind == "remove":
        _, i = op
        check(i)
        if any(_reduced(pres, rows[i - 1])):
            raise RejectedInput("only trivial rows can be removed")
        del rows[i - 1]
        if exprs is not None:
            del exprs[i - 1]
    elif kind == "invert":
        _, i = op
        check(i)
        rows[i - 1] = ctx.pow(_reduced(pres, rows[i - 1]), -1)
        if exprs is not None:
            exprs[i - 1] = _word_inv(exprs[i - 1])
    elif kind == "append_product":
        _, factors = op
        acc = ctx.identity
        word: tuple = ()
        for i, l in factors:
            check(i)
            acc = ctx.mult(acc, ctx.pow(_reduced(pres, rows[i - 1]), l))
            if exprs is not None:
                word = word + _word_pow(exprs[i - 1], l)
        rows.append(acc)
        if exprs is not None:
            exprs.append(word)
    else:
        raise RejectedInput(f"unknown row operation {kind!r}")
    return CoordinateMatrix(pres, tuple(rows),
                            tuple(exprs) if exprs is not None else None)


def _reduced(pres, row):
    return reduce_coords(pres, row)


def full_form(pres: QuotientPresentation, matrix: CoordinateMatrix,
              track: bool = False) -> tuple[FullFormMatrix, TrackedExpressions | None]:
    ctx = GroupContext(pres)
    rows = [reduce_coords(pres, r) for r in matrix.rows]
    out, exprs = full_form_rows(ctx, rows, track=track)
    tracked = (TrackedExpressions(exprs, len(matrix.rows))
               if track else None)
    return FullFormMatrix(out), tracked


def full_form_free(basis, rows) -> tuple[tuple[int, ...], ...]:
    """Full form over the free nilpotent group itself."""
    from .presentations import free_presentation
    ctx = GroupContext(free_presentation(basis.c, basis.r))
    return full_form_rows(ctx, [tuple(r) for r in rows])[0]


# ---------------------------------------------------------------------------
# Membership.

@dataclass(frozen=True)
class MembershipWitness:
    gamma: tuple[int, ...]
    word: ExpWord | None = None


def _membership_scan(m, torsion, rows, mult, pow_, h):
    """Exponents gamma with h = g_1^{gamma_1} ... g_s^{gamma_s}, or None."""
    cur = tuple(h)
    gamma = []
    for row in rows:
        piv = first_nonzero(row)
        f = first_nonzero(cur)
        if f == 0 or f > piv:
            gamma.append(0)
            continue
        if f < piv:
            return None
        a = row[piv - 1]
        if cur[f - 1] % a:
            return None
        q = cur[f - 1] // a
        cur = mult(pow_(row, -q), cur)
        gamma.append(q)
    if first_nonzero(cur):
        return None
    return gamma


def membership(pres: QuotientPresentation, form: FullFormMatrix,
               h: GroupElement) -> MembershipWitness | None:
    """Witness exponents over the full-form rows, or None for non-members."""
    if h.presentation != pres:
        raise RejectedInput("element belongs to a different presentation")
    ctx = GroupContext(pres)
    gamma = _membership_scan(ctx.m, ctx.torsion, form.rows, ctx.mult,
                             ctx.pow, h.coords)
    if gamma is None:
        return None
    return MembershipWitness(tuple(gamma))


def express_in_original_generators(tracked: TrackedExpressions,
                                   witness: MembershipWitness,
                                   cap: int = DEFAULT_WORD_CAP) -> ExpWord:
    """Word over the original generators evaluating to the witnessed element."""
    if tracked is None:
        raise RejectedInput("full form was computed without tracking")
    parts = [_expr_pow(ex, g)
             for ex, g in zip(tracked.expressions, witness.gamma) if g]
    return expand_expression(_expr_mul(tuple(parts)), cap=cap)


# ---------------------------------------------------------------------------
# Subgroup presentations.

def subgroup_presentation(pres: QuotientPresentation,
                          gens: CoordinateMatrix) -> NilpotentPresentation:
    form, _ = full_form(pres, gens)
    rows = form.rows
    s = len(rows)
    ctx = GroupContext(pres)

    def against_suffix(j: int, target) -> tuple[int, ...]:
        """Tail vector of an element of <g_{j+1}, ..., g_s>."""
        gamma = _membership_scan(ctx.m, ctx.torsion, rows[j:], ctx.mult,
                                 ctx.pow, target)
        assert gamma is not None, "relation tail escapes the suffix subgroup"
        return (0,) * j + tuple(gamma)

    orders: list[int | None] = []
    power_tails: dict[int, tuple[int, ...]] = {}
    for i, row in enumerate(rows, start=1):
        piv = first_nonzero(row)
        e = pres.torsion.get(piv)
        if e is None:
            orders.append(None)
            continue
        order = e // row[piv - 1]
        orders.append(order)
        power_tails[i] = against_suffix(i, ctx.pow(row, order))

    alpha: dict[tuple[int, int], tuple[int, ...]] = {}
    beta: dict[tuple[int, int], tuple[int, ...]] = {}
    inv = {i: ctx.pow(rows[i], -1) for i in range(s)}
    for i, j in itertools.combinations(range(s), 2):
        gi, gj = rows[i], rows[j]
        head = ctx.mult(gi, gj)
        tail = ctx.mult(ctx.pow(head, -1), ctx.mult(gj, gi))
        alpha[(i + 1, j + 1)] = against_suffix(j + 1, tail)
        head = ctx.mult(gi, inv[j])
        tail = ctx.mult(ctx.pow(head, -1), ctx.mult(inv[j], gi))
        beta[(i + 1, j + 1)] = against_suffix(j + 1, tail)

    return NilpotentPresentation(s=s, orders=tuple(orders),
                                 power_tails=power_tails, alpha=alpha,
                                 beta=beta)
