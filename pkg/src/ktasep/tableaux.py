"""Tableau families and their exact generating functions.

Five families: hook-valued (canonical G), set-valued (G), multiset-valued
(J), reverse plane partitions (g), valued-set (j), plus flagged
semistandard tableaux.  All enumeration is depth-first over cells with
entry bounds; generating functions are exact, never sampled.

Arm entries (the multiset part of a hook) make the generating functions
formal power series.  Two exact treatments are provided:

* ``arm_mode="off"``     -- no arms (set-valued / dual cases);
* ``arm_mode="resummed"``-- arms enumerated by support, each support
  element resummed into the rational factor -a*x/(1 + a*x), giving an
  exact RationalFn;
* ``arm_mode="series"``  -- raw multisets up to an explicit total-entry
  cutoff (power-series identity testing only).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterator

from .conventions import IndexConvention
from .exactalg import (
    B,
    Frac,
    LaurentPoly,
    RationalFn,
    Scalar,
    VarId,
    X,
    as_poly,
    rf,
)
from .partitions import Partition, SkewShape, corners


@dataclass(frozen=True)
class HookEntry:
    """A one-cell hook filling: corner value, weakly increasing arm,
    strictly increasing leg."""

    corner: int
    arm: tuple[int, ...] = ()
    leg: tuple[int, ...] = ()

    def __post_init__(self):
        if self.arm and self.corner > min(self.arm):
            raise ValueError("corner must be <= min(arm)")
        if self.leg and self.corner >= min(self.leg):
            raise ValueError("corner must be < min(leg)")
        if any(self.arm[i] > self.arm[i + 1] for i in range(len(self.arm) - 1)):
            raise ValueError("arm must be weakly increasing")
        if any(self.leg[i] >= self.leg[i + 1] for i in range(len(self.leg) - 1)):
            raise ValueError("leg must be strictly increasing")

    def max_entry(self) -> int:
        out = self.corner
        if self.arm:
            out = max(out, self.arm[-1])
        if self.leg:
            out = max(out, self.leg[-1])
        return out

    def size(self) -> int:
        return 1 + len(self.arm) + len(self.leg)


@dataclass(frozen=True)
class HookTableau:
    shape: SkewShape
    cells: tuple  # tuple of ((row, col), HookEntry), reading order


def _alpha_var(row: int, col: int, convention: IndexConvention) -> VarId:
    if convention is IndexConvention.ALPHA_BY_COLUMN:
        return VarId("A", col)
    return VarId("A", row)


def _beta_var(row: int, col: int, convention: IndexConvention) -> VarId:
    if convention is IndexConvention.ALPHA_BY_COLUMN:
        return VarId("B", row)
    return VarId("B", col)


def iter_hook_tableaux(
    shape: SkewShape,
    n: int,
    arm_mode: str = "off",
    legs_on: bool = True,
    cutoff: int | None = None,
) -> Iterator[HookTableau]:
    """All hook-valued tableaux of the skew shape with entries <= n.

    In ``resummed`` mode arms are support sets (multiplicities live in the
    weight).  In ``series`` mode arms are explicit multisets and the total
    number of entries in the tableau is capped by ``cutoff``.
    """
    if arm_mode not in ("off", "resummed", "series"):
        raise ValueError(f"unknown arm_mode {arm_mode}")
    if arm_mode == "series" and cutoff is None:
        raise ValueError("series arm_mode requires an explicit cutoff")
    cells = shape.cells()
    if not cells:
        yield HookTableau(shape, ())
        return

    filled: dict = {}

    def entries_budget() -> int:
        return sum(h.size() for h in filled.values())

    def cell_choices(r: int, c: int) -> Iterator[HookEntry]:
        left = filled.get((r, c - 1))
        up = filled.get((r - 1, c))
        lo = 1
        if left is not None:
            lo = max(lo, left.max_entry())
        if up is not None:
            lo = max(lo, up.max_entry() + 1)
        for v in range(lo, n + 1):
            leg_pool = range(v + 1, n + 1) if legs_on else range(0)
            for legsize in range(0, n - v + 1 if legs_on else 1):
                for leg in combinations(leg_pool, legsize):
                    if arm_mode == "off":
                        yield HookEntry(v, (), leg)
                    elif arm_mode == "resummed":
                        pool = list(range(v, n + 1))
                        for supsize in range(0, len(pool) + 1):
                            for sup in combinations(pool, supsize):
                                yield HookEntry(v, sup, leg)
                    else:
                        room = cutoff - entries_budget() - 1 - legsize
                        if room < 0:
                            continue
                        for arm in _multisets_up_to(v, n, room):
                            yield HookEntry(v, arm, leg)

    def rec(i: int) -> Iterator[HookTableau]:
        if i == len(cells):
            yield HookTableau(shape, tuple(sorted(filled.items())))
            return
        r, c = cells[i]
        for entry in cell_choices(r, c):
            filled[(r, c)] = entry
            yield from rec(i + 1)
            del filled[(r, c)]

    yield from rec(0)


def _multisets_up_to(lo: int, hi: int, maxlen: int) -> Iterator[tuple[int, ...]]:
    """Weakly increasing tuples with entries in [lo, hi], length <= maxlen."""

    def rec(start: int, room: int, acc: list[int]):
        yield tuple(acc)
        if room == 0:
            return
        for v in range(start, hi + 1):
            acc.append(v)
            yield from rec(v, room - 1, acc)
            acc.pop()

    yield from rec(lo, maxlen, [])


def hook_tableau_weight(
    t: HookTableau,
    convention: IndexConvention,
    arm_mode: str,
) -> Scalar:
    """Weight of one hook tableau: x per entry, (-alpha) per arm copy,
    (-beta) per leg entry; resummed arms contribute -a*x/(1+a*x) per
    support element."""
    weight: Scalar = LaurentPoly.const(1)
    for (r, c), entry in t.cells:
        weight = weight * X(entry.corner)
        bvar = _beta_var(r, c, convention)
        for l in entry.leg:
            weight = weight * (-LaurentPoly.var(bvar)) * X(l)
        avar = _alpha_var(r, c, convention)
        if arm_mode == "resummed":
            for a in entry.arm:
                ax = LaurentPoly.var(avar) * X(a)
                weight = weight * RationalFn.from_den_factor(1 + ax) * (-ax)
        else:
            for a in entry.arm:
                weight = weight * (-LaurentPoly.var(avar)) * X(a)
    return weight


def gen_G(
    shape: SkewShape,
    n: int,
    alpha_on: bool,
    beta_on: bool,
    convention: IndexConvention = IndexConvention.ALPHA_BY_COLUMN,
    cutoff: int | None = None,
    resummed: bool = True,
) -> Scalar:
    """Canonical Grothendieck generating function of a skew shape in
    x_1..x_n.  With alpha_on=False this is the set-valued G; with
    beta_on=False the multiset-valued J (a power series: exact only in
    resummed mode or through the series cutoff)."""
    if not alpha_on:
        arm_mode = "off"
    else:
        arm_mode = "resummed" if resummed else "series"
    total: Scalar = LaurentPoly.zero()
    for t in iter_hook_tableaux(shape, n, arm_mode=arm_mode, legs_on=beta_on, cutoff=cutoff):
        total = hook_tableau_weight(t, convention, arm_mode) + total
    return total


def gen_G_skew(
    outer: Partition,
    inner: Partition,
    n: int,
    alpha_on: bool,
    beta_on: bool,
    convention: IndexConvention = IndexConvention.ALPHA_BY_COLUMN,
    cutoff: int | None = None,
    resummed: bool = True,
) -> Scalar:
    """Skew G extended to inner not contained in outer: boxes of the inner
    shape sticking out of the outer one contribute +(alpha+beta) factors
    against G of outer over the meet.  This extension is what makes the
    double-slash corner expansion vanish when inner is not contained."""
    if outer.contains(inner):
        return gen_G(
            SkewShape(outer, inner), n, alpha_on, beta_on, convention, cutoff, resummed
        )
    meet = Partition(
        [min(outer.part(i), inner.part(i)) for i in range(1, inner.length() + 1)]
    )
    factor: Scalar = LaurentPoly.const(1)
    for r in range(1, inner.length() + 1):
        for c in range(outer.part(r) + 1, inner.part(r) + 1):
            box = LaurentPoly.zero()
            if alpha_on:
                box = box + LaurentPoly.var(_alpha_var(r, c, convention))
            if beta_on:
                box = box + LaurentPoly.var(_beta_var(r, c, convention))
            factor = factor * box
    return factor * gen_G(
        SkewShape(outer, meet), n, alpha_on, beta_on, convention, cutoff, resummed
    )


def gen_G_doubleslash(
    outer: Partition,
    inner: Partition,
    n: int,
    alpha_on: bool,
    beta_on: bool,
    convention: IndexConvention = IndexConvention.ALPHA_BY_COLUMN,
    cutoff: int | None = None,
    resummed: bool = True,
) -> Scalar:
    """Corner-removal-corrected skew G: sum over partitions nu formed by
    removing corners of ``inner``, with factor -(alpha+beta) per removed
    box.  Vanishes whenever inner is not contained in outer."""
    corner_boxes = corners(inner)
    total: Scalar = LaurentPoly.zero()
    for k in range(len(corner_boxes) + 1):
        for removed in combinations(corner_boxes, k):
            parts = list(inner.parts)
            for r, _ in removed:
                parts[r - 1] -= 1
            nu = Partition(sorted(parts, reverse=True))
            factor: Scalar = LaurentPoly.const(1)
            for r, c in removed:
                avar = _alpha_var(r, c, convention)
                bvar = _beta_var(r, c, convention)
                box = LaurentPoly.zero()
                if alpha_on:
                    box = box + LaurentPoly.var(avar)
                if beta_on:
                    box = box + LaurentPoly.var(bvar)
                factor = factor * (-box)
            g = gen_G_skew(
                outer,
                nu,
                n,
                alpha_on,
                beta_on,
                convention,
                cutoff=cutoff,
                resummed=resummed,
            )
            total = factor * g + total
    return total


# ---------------------------------------------------------------------------
# dual families: reverse plane partitions and valued-set tableaux
# ---------------------------------------------------------------------------


def iter_rpp(shape: SkewShape, n: int) -> Iterator[dict]:
    """Reverse plane partitions: entries 1..n weakly increasing along rows
    and columns (classical form; column repeats encode merges)."""
    cells = shape.cells()

    def rec(i: int, filled: dict) -> Iterator[dict]:
        if i == len(cells):
            yield dict(filled)
            return
        r, c = cells[i]
        lo = 1
        if (r, c - 1) in filled:
            lo = max(lo, filled[(r, c - 1)])
        if (r - 1, c) in filled:
            lo = max(lo, filled[(r - 1, c)])
        for v in range(lo, n + 1):
            filled[(r, c)] = v
            yield from rec(i + 1, filled)
            del filled[(r, c)]

    yield from rec(0, {})


def rpp_weight(shape: SkewShape, filling: dict, refined: bool) -> LaurentPoly:
    """x per box that is not merged with the box below; beta_row per
    merged box (same entry directly below)."""
    w = LaurentPoly.const(1)
    for (r, c), v in filling.items():
        below = filling.get((r + 1, c))
        if below is not None and below == v:
            w = w * B(r if refined else 1)
        else:
            w = w * X(v)
    return w


def gen_g(shape: SkewShape, n: int, refined: bool = True) -> LaurentPoly:
    """Dual Grothendieck generating function (reverse plane partitions)."""
    total = LaurentPoly.zero()
    for filling in iter_rpp(shape, n):
        total = total + rpp_weight(shape, filling, refined)
    return total


def iter_ssyt(shape: SkewShape, n: int) -> Iterator[dict]:
    """Semistandard tableaux: weakly increasing rows, strictly increasing
    columns, entries 1..n."""
    cells = shape.cells()

    def rec(i: int, filled: dict) -> Iterator[dict]:
        if i == len(cells):
            yield dict(filled)
            return
        r, c = cells[i]
        lo = 1
        if (r, c - 1) in filled:
            lo = max(lo, filled[(r, c - 1)])
        if (r - 1, c) in filled:
            lo = max(lo, filled[(r - 1, c)] + 1)
        for v in range(lo, n + 1):
            filled[(r, c)] = v
            yield from rec(i + 1, filled)
            del filled[(r, c)]

    yield from rec(0, {})


def vst_weight(shape: SkewShape, filling: dict, refined: bool = True) -> LaurentPoly:
    """Valued-set weight summed over all row-merge choices.

    Each horizontally adjacent equal pair may merge or not; a box followed
    by an equal right neighbour contributes (x + alpha_col), all other
    boxes contribute x.  Summing the binary choices gives the product form
    directly.
    """
    w = LaurentPoly.const(1)
    for (r, c), v in filling.items():
        right = filling.get((r, c + 1))
        if right is not None and right == v:
            avar = LaurentPoly.var(VarId("A", c if refined else 1))
            w = w * (X(v) + avar)
        else:
            w = w * X(v)
    return w


def gen_j(shape: SkewShape, n: int, refined: bool = True) -> LaurentPoly:
    """Dual weak Grothendieck generating function (valued-set tableaux)."""
    total = LaurentPoly.zero()
    for filling in iter_ssyt(shape, n):
        total = total + vst_weight(shape, filling, refined)
    return total


# ---------------------------------------------------------------------------
# flagged semistandard tableaux
# ---------------------------------------------------------------------------


def gen_flagged_schur(
    lam: Partition, n: int, flags: list[int] | None = None
) -> LaurentPoly:
    """Flagged Schur generating function over the ordered alphabet
    x_1 < ... < x_n < b_1 < b_2 < ...; entries in row i are bounded by the
    flag letter b_{flags[i-1]}.  Default flags are (1, 2, ..., len(lam)).

    Letters are encoded as integers 1..n (x's) and n+1, n+2, ... (b's).
    """
    ell = lam.length()
    if ell == 0:
        return LaurentPoly.const(1)
    if flags is None:
        flags = list(range(1, ell + 1))
    if len(flags) < ell:
        raise ValueError("need one flag per row")
    if any(flags[i] > flags[i + 1] for i in range(ell - 1)):
        raise ValueError("flags must be weakly increasing")
    shape = SkewShape(lam)
    cells = shape.cells()
    total = LaurentPoly.zero()

    def letter_var(v: int) -> LaurentPoly:
        return X(v) if v <= n else B(v - n)

    def rec(i: int, filled: dict, weight: LaurentPoly):
        nonlocal total
        if i == len(cells):
            total = total + weight
            return
        r, c = cells[i]
        lo = 1
        if (r, c - 1) in filled:
            lo = max(lo, filled[(r, c - 1)])
        if (r - 1, c) in filled:
            lo = max(lo, filled[(r - 1, c)] + 1)
        hi = n + flags[r - 1]
        for v in range(lo, hi + 1):
            filled[(r, c)] = v
            rec(i + 1, filled, weight * letter_var(v))
            del filled[(r, c)]

    rec(0, {}, LaurentPoly.const(1))
    return total


def count_tableaux(shape: SkewShape, n: int, family: str, cutoff: int | None = None) -> int:
    """Number of tableaux of the given family with entries <= n."""
    if family == "set":
        return sum(1 for _ in iter_hook_tableaux(shape, n, arm_mode="off", legs_on=True))
    if family == "rpp":
        return sum(1 for _ in iter_rpp(shape, n))
    if family == "ssyt":
        return sum(1 for _ in iter_ssyt(shape, n))
    if family == "hook":
        return sum(
            1 for _ in iter_hook_tableaux(shape, n, arm_mode="resummed", legs_on=True)
        )
    if family == "multiset":
        if cutoff is None:
            raise ValueError("multiset family needs a cutoff")
        return sum(
            1
            for _ in iter_hook_tableaux(
                shape, n, arm_mode="series", legs_on=False, cutoff=cutoff
            )
        )
    raise ValueError(f"unknown family {family}")
