"""Noncommutative Schur operators on the free module over partitions.

Blocking operators U_i add a box to row i when legal and otherwise pick up
a beta factor; pushing operators u_j add a box to row j, pushing the rows
above when needed, with an alpha-indexed recursion for longer waits.
Noncommutative e_k/h_k words encode one Bernoulli/geometric update round.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .exactalg import A, B, Frac, LaurentPoly, Scalar
from .partitions import Partition, push_closure


def is_zero_scalar(v) -> bool:
    if isinstance(v, (int, Frac, float)):
        return v == 0
    return v.is_zero()


class PartitionVector:
    """Finite formal linear combination of partitions."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if not is_zero_scalar(v)}

    @classmethod
    def basis(cls, p: Partition) -> "PartitionVector":
        return cls({p: Frac(1)})

    def add_term(self, p: Partition, coeff) -> None:
        cur = self.terms.get(p)
        new = coeff if cur is None else cur + coeff
        if is_zero_scalar(new):
            self.terms.pop(p, None)
        else:
            self.terms[p] = new

    def __add__(self, other: "PartitionVector") -> "PartitionVector":
        out = PartitionVector(dict(self.terms))
        for p, c in other.terms.items():
            out.add_term(p, c)
        return out

    def __sub__(self, other: "PartitionVector") -> "PartitionVector":
        out = PartitionVector(dict(self.terms))
        for p, c in other.terms.items():
            out.add_term(p, -c)
        return out

    def scale(self, c) -> "PartitionVector":
        if is_zero_scalar(c):
            return PartitionVector()
        return PartitionVector({p: cc * c for p, cc in self.terms.items()})

    def coeff(self, p: Partition):
        return self.terms.get(p, Frac(0))

    def __eq__(self, other) -> bool:
        if not isinstance(other, PartitionVector):
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        for k in keys:
            a = self.terms.get(k, Frac(0))
            b = other.terms.get(k, Frac(0))
            d = a - b
            if not is_zero_scalar(d):
                return False
        return True

    def __repr__(self):
        items = " + ".join(f"({c!r})*{p}" for p, c in sorted(self.terms.items()))
        return f"PV[{items or '0'}]"


@dataclass
class OpParams:
    """Parameter environment: alpha indexed by position value, beta by row.

    alpha(0) defaults to 0, matching the convention lambda_0 = infinity,
    alpha_0 = 0; a case may override it (the conjugate Bernoulli process
    needs alpha_0 = rho_1)."""

    alpha: Callable[[int], Scalar]
    beta: Callable[[int], Scalar]

    @classmethod
    def symbolic(cls) -> "OpParams":
        return cls(
            alpha=lambda k: A(k) if k >= 1 else Frac(0),
            beta=lambda j: B(j),
        )

    @classmethod
    def symbolic_beta_only(cls) -> "OpParams":
        return cls(alpha=lambda k: Frac(0), beta=lambda j: B(j))

    @classmethod
    def bound(cls, alpha_vals, beta_vals) -> "OpParams":
        """alpha_vals / beta_vals: callables or dicts of exact values."""

        def mk(src, default):
            if callable(src):
                return src
            if src is None:
                return lambda i: default
            return lambda i: src.get(i, default) if isinstance(src, dict) else src[i]

        return cls(alpha=mk(alpha_vals, Frac(0)), beta=mk(beta_vals, Frac(0)))


def apply_U(i: int, vec: PartitionVector, params: OpParams) -> PartitionVector:
    """Blocking operator U_i: kappa_i + Theta_i, where Theta picks up
    -alpha_{lambda_i} when the box is addable and beta_{i-1} when row i is
    blocked by row i-1."""
    if i < 1:
        raise ValueError("row index must be >= 1")
    out = PartitionVector()
    for lam, c in vec.terms.items():
        above = lam.part(i - 1) if i > 1 else None  # None means infinity
        here = lam.part(i)
        addable = above is None or here < above
        if addable:
            parts = list(lam.padded(max(len(lam.parts), i)))
            parts[i - 1] += 1
            out.add_term(Partition(parts), c)
            a = params.alpha(here)
            if not is_zero_scalar(a):
                out.add_term(lam, c * (-a))
        else:
            out.add_term(lam, c * params.beta(i - 1))
    return out


class PushEvaluator:
    """Evaluates pushing operators u_j with an explicit size cap on
    retained partitions; memoizes single-basis applications."""

    def __init__(self, params: OpParams, cap: int):
        self.params = params
        self.cap = cap
        self._memo: dict = {}

    def apply_basis(self, j: int, mu: Partition) -> dict:
        key = (j, mu.parts)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        nu, pushed = push_closure(mu, j)
        out: dict = {}
        if nu.size() <= self.cap:
            coeff: Scalar = Frac(1)
            for a in pushed:
                coeff = coeff * self.params.beta(a)
            out[nu] = coeff
            a_val = self.params.alpha(mu.part(j) + 1)
            if not is_zero_scalar(a_val):
                k = pushed[0] if pushed else j
                for i in range(k, j + 1):
                    c: Scalar = a_val
                    for a in range(k, i):
                        c = c * (a_val + self.params.beta(a))
                    for a in range(i, j):
                        c = c * self.params.beta(a)
                    if nu.size() + 1 <= self.cap:
                        for p, cc in self.apply_basis(i, nu).items():
                            cur = out.get(p)
                            new = c * cc if cur is None else cur + c * cc
                            if is_zero_scalar(new):
                                out.pop(p, None)
                            else:
                                out[p] = new
        self._memo[key] = out
        return out

    def apply(self, j: int, vec: PartitionVector) -> PartitionVector:
        out = PartitionVector()
        for mu, c in vec.terms.items():
            for p, cc in self.apply_basis(j, mu).items():
                out.add_term(p, c * cc)
        return out


def apply_u(
    j: int, vec: PartitionVector, cap: int, params: OpParams
) -> PartitionVector:
    """One pushing operator application, truncated to partitions of size
    <= cap.  The cap must leave room for at least one added box."""
    if vec.terms and cap < min(p.size() for p in vec.terms) + 1:
        raise ValueError(f"cap {cap} must exceed |mu|+1")
    return PushEvaluator(params, cap).apply(j, vec)


OpApply = Callable[[int, PartitionVector], PartitionVector]


def u_family(params: OpParams, cap: int) -> OpApply:
    ev = PushEvaluator(params, cap)
    return lambda j, vec: ev.apply(j, vec)


def U_family(params: OpParams) -> OpApply:
    return lambda i, vec: apply_U(i, vec, params)


def noncomm_h(k: int, op: OpApply, ell: int, vec: PartitionVector) -> PartitionVector:
    """h_k of the operator family: sum over weakly decreasing application
    sequences of length k with indices <= ell (the largest index acts
    first)."""
    if k == 0:
        return vec

    def rec(v: PartitionVector, remaining: int, hi: int) -> PartitionVector:
        if remaining == 0:
            return v
        total = PartitionVector()
        for j in range(1, hi + 1):
            total = total + rec(op(j, v), remaining - 1, j)
        return total

    return rec(vec, k, ell)


def noncomm_e(k: int, op: OpApply, ell: int, vec: PartitionVector) -> PartitionVector:
    """e_k of the operator family: sum over strictly increasing application
    sequences of length k with indices <= ell (the smallest index acts
    first)."""
    if k == 0:
        return vec

    def rec(v: PartitionVector, remaining: int, lo: int) -> PartitionVector:
        if remaining == 0:
            return v
        total = PartitionVector()
        for j in range(lo, ell - remaining + 2):
            total = total + rec(op(j, v), remaining - 1, j + 1)
        return total

    return rec(vec, k, 1)


def apply_word(word: list[int], op: OpApply, vec: PartitionVector) -> PartitionVector:
    """Apply a word of operator indices right-to-left (matching the
    paper-style composition order: the last index acts first)."""
    for j in reversed(word):
        vec = op(j, vec)
    return vec


# ---------------------------------------------------------------------------
# Knuth relation machinery
# ---------------------------------------------------------------------------


@dataclass
class KnuthViolation:
    relation: str
    indices: tuple
    start: Partition
    lhs: PartitionVector
    rhs: PartitionVector


@dataclass
class KnuthReport:
    family: str
    strong: bool
    max_index: int
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.violations


def _relation_instances(max_index: int, strong: bool):
    gap = 1 if strong else 2
    for i in range(1, max_index + 1):
        for j in range(1, max_index + 1):
            for k in range(1, max_index + 1):
                if i >= j > k and i - k >= gap:
                    yield ("right", (i, j, k), [j, i, k], [j, k, i])
                if i > j >= k and i - k >= gap:
                    yield ("left", (i, j, k), [i, k, j], [k, i, j])
    for i in range(1, max_index):
        # (t_i + t_{i+1}) t_{i+1} t_i = t_{i+1} t_i (t_i + t_{i+1})
        yield ("weak_sum", (i,), None, None)


def check_weak_knuth(
    op: OpApply,
    family: str,
    basis: list[Partition],
    max_index: int,
    strong: bool = False,
) -> KnuthReport:
    """Check the (weak or strong) Knuth relations on every basis partition,
    collecting exact counterexamples."""
    report = KnuthReport(family=family, strong=strong, max_index=max_index)
    for name, idx, lword, rword in _relation_instances(max_index, strong):
        for p in basis:
            v = PartitionVector.basis(p)
            if name == "weak_sum":
                (i,) = idx
                base = op(i, v)
                base = op(i + 1, base)
                lhs = op(i, base) + op(i + 1, base)
                mixed = op(i, v) + op(i + 1, v)
                rhs = op(i + 1, op(i, mixed))
            else:
                lhs = apply_word(lword, op, v)
                rhs = apply_word(rword, op, v)
            report.checked += 1
            if lhs != rhs:
                report.violations.append(
                    KnuthViolation(name, idx, p, lhs, rhs)
                )
    return report
