"""Pinned convention choices.

Two conventions in the tableau/kernel formulas are ambiguous on paper and
are fixed here by empirical arbitration (validate.arbitrate_conventions):

* IndexConvention: whether hook-arm weights carry the column-indexed alpha
  and leg weights the row-indexed beta, or the transposed assignment.
* UpdateOrder: whether geometric cases update particles in decreasing
  index order (each particle capped/pushing against its neighbor's
  pre-update position) with Bernoulli cases ascending, or the swap.

The shipped defaults are the unique pair under which the tableau,
operator, and closed-form routes agree with the brute-force dynamics on
the full desk-scale grid.  validate re-runs the arbitration and fails if
the surviving pair drifts from what is pinned here.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class IndexConvention(Enum):
    # Arm weight -alpha_col, leg weight -beta_row; corner factor -(alpha_col + beta_row).
    ALPHA_BY_COLUMN = "alpha_by_column"
    # Transposed assignment (the losing candidate).
    ALPHA_BY_ROW = "alpha_by_row"


class UpdateOrder(Enum):
    # Geometric cases update particle ell first, particle 1 last;
    # Bernoulli cases ascending.  The losing candidate swaps both.
    GEOMETRIC_DESCENDING = "geometric_descending"
    GEOMETRIC_ASCENDING = "geometric_ascending"


@dataclass(frozen=True)
class Conventions:
    index: IndexConvention
    update: UpdateOrder

    def fingerprint(self) -> str:
        return f"{self.index.value}+{self.update.value}"


PINNED_CONVENTIONS = Conventions(
    index=IndexConvention.ALPHA_BY_COLUMN,
    update=UpdateOrder.GEOMETRIC_DESCENDING,
)
