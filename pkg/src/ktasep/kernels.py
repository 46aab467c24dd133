"""Exact n-step transition kernels for the four discrete TASEP variants
and the inhomogeneous (canonical) blocking/Bernoulli processes.

Three independent routes compute every kernel:

* ``closed``   -- per-particle closed-form products derived from the
  update rules, chained by the Markov property (the defining route);
* ``operator`` -- noncommutative Schur-operator dynamics, with the
  geometric series over h_k words resummed into exact resolvents;
* ``tableau``  -- (dual/weak/canonical) Grothendieck generating functions
  with the case-specific parameter substitutions.

Cases: A geometric pushing, B Bernoulli blocking, C geometric blocking,
D Bernoulli pushing, CANONICAL_C/CANONICAL_B with position-dependent
rates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Callable, Iterator

from .conventions import IndexConvention, PINNED_CONVENTIONS, UpdateOrder
from .exactalg import (
    Frac,
    LaurentPoly,
    RationalFn,
    Scalar,
    VarId,
    evaluate,
    rf,
)
from .operators import (
    OpParams,
    PartitionVector,
    apply_U,
    is_zero_scalar,
)
from .partitions import Partition, conjugate, is_vertical_strip, SkewShape, push_closure
from . import tableaux


class CaseId(Enum):
    A = "A"          # geometric pushing
    B = "B"          # Bernoulli blocking
    C = "C"          # geometric blocking
    D = "D"          # Bernoulli pushing
    CANONICAL_C = "CanonicalC"
    CANONICAL_B = "CanonicalB"

    @property
    def geometric(self) -> bool:
        return self in (CaseId.A, CaseId.C, CaseId.CANONICAL_C)

    @property
    def pushing(self) -> bool:
        return self in (CaseId.A, CaseId.D)

    @property
    def canonical(self) -> bool:
        return self in (CaseId.CANONICAL_C, CaseId.CANONICAL_B)


def parse_case(name: str) -> CaseId:
    for c in CaseId:
        if c.value.lower() == name.lower():
            return c
    raise ValueError(f"unknown case {name!r}")


@dataclass
class ParamBinding:
    """Numeric (exact rational) or symbolic parameter assignment.

    ``x`` are time parameters, ``rates`` the per-particle pi_j (rho_j for
    Bernoulli cases).  ``alpha``/``beta_pos`` are position closures for
    the canonical processes, indexed from position 0.
    """

    x: list
    rates: list
    alpha: Callable[[int], Scalar] | None = None
    beta_pos: Callable[[int], Scalar] | None = None

    def x_of(self, i: int):
        return self.x[i - 1]

    def rate(self, j: int):
        return self.rates[j - 1] if j - 1 < len(self.rates) else Frac(0)

    def alpha_of(self, k: int):
        return self.alpha(k) if self.alpha is not None else Frac(0)

    def beta_pos_of(self, k: int):
        return self.beta_pos(k) if self.beta_pos is not None else Frac(0)

    @property
    def n(self) -> int:
        return len(self.x)

    @classmethod
    def numeric(cls, x, rates, alpha=None, beta_pos=None) -> "ParamBinding":
        def closure(src):
            if src is None or callable(src):
                return src
            if isinstance(src, dict):
                return lambda k: Frac(src.get(k, 0))
            return lambda k: Frac(src[k]) if k < len(src) else Frac(0)

        return cls(
            [Frac(v) for v in x],
            [Frac(v) for v in rates],
            closure(alpha),
            closure(beta_pos),
        )

    def check_admissible(self, case: CaseId, ell: int, positions: range | None = None):
        """Raise ValueError naming the violated inequality."""
        for i in range(1, self.n + 1):
            for j in range(1, ell + 1):
                v = self.rate(j) * self.x_of(i)
                if case.geometric or case is CaseId.C:
                    if not (0 <= v < 1):
                        raise ValueError(
                            f"constraint pi_{j}*x_{i} in [0,1) violated: {v}"
                        )
                else:
                    if v < 0:
                        raise ValueError(f"constraint rho_{j}*x_{i} >= 0 violated: {v}")
        if case is CaseId.CANONICAL_C and self.alpha is not None:
            pos = positions or range(0, 64)
            for k in pos:
                a = self.alpha_of(k)
                for i in range(1, self.n + 1):
                    if a * self.x_of(i) <= -1:
                        raise ValueError(
                            f"constraint alpha_{k}*x_{i} > -1 violated"
                        )
                for j in range(1, ell + 1):
                    if a + self.rate(j) < 0:
                        raise ValueError(
                            f"constraint alpha_{k}+pi_{j} >= 0 violated at k={k}"
                        )


@dataclass
class KernelQuery:
    case: CaseId
    n: int
    mu: Partition
    lam: Partition
    ell: int
    binding: ParamBinding
    route: str = "closed"  # closed | operator | tableau

    def __post_init__(self):
        if self.lam.length() > self.ell or (self.lam.parts and self.lam.parts[0] > self.ell):
            # Thm hypothesis: ell must dominate both the length and width
            raise ValueError("require ell >= len(lam) and ell >= lam_1")


@dataclass
class KernelTable:
    case: CaseId
    n: int
    mu: Partition
    ell: int
    probs: dict  # Partition -> exact probability
    tail: Frac   # mass outside the lambda_1 cap (0 for Bernoulli cases)

    def total(self):
        return sum(self.probs.values(), Frac(0)) + self.tail

    def prob(self, lam: Partition):
        return self.probs.get(lam, Frac(0))


# ---------------------------------------------------------------------------
# single-step closed forms (the defining route)
# ---------------------------------------------------------------------------


def _geom_mass(q, k: int):
    """(1-q) q^k, the geometric jump mass."""
    return (1 - q) * q**k


def _inhom_jump_mass(binding: ParamBinding, j: int, xi, m: int, g: int):
    """Inhomogeneous geometric: probability of jump g from position m for
    particle j at time value xi (Bernoulli-chain closed form)."""
    pi = binding.rate(j)
    num: Scalar = Frac(1)
    for k in range(m, m + g):
        a = binding.alpha_of(k)
        num = num * ((a + pi) * xi) * _inv_1p(a * xi)
    a_end = binding.alpha_of(m + g)
    return num * (1 - pi * xi) * _inv_1p(a_end * xi)


def _inhom_tail_mass(binding: ParamBinding, j: int, xi, m: int, g: int):
    """Probability of jumping at least g: the first g trials all succeed."""
    pi = binding.rate(j)
    num: Scalar = Frac(1)
    for k in range(m, m + g):
        a = binding.alpha_of(k)
        num = num * ((a + pi) * xi) * _inv_1p(a * xi)
    return num


def _inv_1p(v):
    """1/(1+v) for exact scalars or symbolic polynomial values."""
    if isinstance(v, (int, Frac)):
        return Frac(1) / (1 + Frac(v))
    if isinstance(v, LaurentPoly):
        return RationalFn.from_den_factor(1 + v)
    return rf(1) / rf(1 + v)


def single_step_closed_form(
    case: CaseId,
    mu: Partition,
    lam: Partition,
    time_index: int,
    binding: ParamBinding,
    ell: int,
):
    """Exact one-step transition probability from the per-particle update
    rules.  Unreachable targets give probability 0."""
    xi = binding.x_of(time_index)
    if lam.length() > ell:
        return Frac(0)

    if case is CaseId.A:
        if not lam.contains(mu):
            return Frac(0)
        p: Scalar = Frac(1)
        for j in range(1, ell + 1):
            q = binding.rate(j) * xi
            w = lam.part(j) - max(mu.part(j), lam.part(j + 1))
            if w < 0:
                return Frac(0)
            p = p * _geom_mass(q, w)
        return p

    if case is CaseId.C:
        if not lam.contains(mu):
            return Frac(0)
        p = Frac(1)
        for j in range(1, ell + 1):
            q = binding.rate(j) * xi
            if j == 1:
                p = p * _geom_mass(q, lam.part(1) - mu.part(1))
                continue
            cap = mu.part(j - 1)
            target, start = lam.part(j), mu.part(j)
            if target > cap:
                return Frac(0)
            if start == cap:
                if target != start:
                    return Frac(0)
            elif target < cap:
                p = p * _geom_mass(q, target - start)
            else:
                p = p * q ** (cap - start)
        return p

    if case is CaseId.CANONICAL_C:
        if not lam.contains(mu):
            return Frac(0)
        p = Frac(1)
        for j in range(1, ell + 1):
            target, start = lam.part(j), mu.part(j)
            if j == 1:
                p = p * _inhom_jump_mass(binding, j, xi, start, target - start)
                continue
            cap = mu.part(j - 1)
            if target > cap:
                return Frac(0)
            if start == cap:
                if target != start:
                    return Frac(0)
            elif target < cap:
                p = p * _inhom_jump_mass(binding, j, xi, start, target - start)
            else:
                p = p * _inhom_tail_mass(binding, j, xi, start, cap - start)
        return p

    if case is CaseId.B or case is CaseId.CANONICAL_B:
        if not lam.contains(mu) or not is_vertical_strip_pair(lam, mu):
            return Frac(0)
        p = Frac(1)
        for j in range(1, ell + 1):
            rho = binding.rate(j)
            start, target = mu.part(j), lam.part(j)
            blocked = j > 1 and start == lam.part(j - 1)
            if blocked:
                if target != start:
                    return Frac(0)
                continue
            if case is CaseId.CANONICAL_B:
                succ = (rho + binding.beta_pos_of(start)) * xi * _inv_1p(rho * xi)
            else:
                succ = rho * xi * _inv_1p(rho * xi)
            if target == start + 1:
                p = p * succ
            elif target == start:
                p = p * (1 - succ)
            else:
                return Frac(0)
        return p

    if case is CaseId.D:
        if not lam.contains(mu) or not is_vertical_strip_pair(lam, mu):
            return Frac(0)
        moved = [j for j in range(1, max(lam.length(), mu.length()) + 1)
                 if lam.part(j) == mu.part(j) + 1]
        mset = set(moved)
        p = Frac(1)
        total_moved = len(moved)
        pairs = [
            c
            for c in range(1, ell)
            if c in mset and (c + 1) in mset and lam.part(c) == lam.part(c + 1)
        ]
        # rho^{lam/mu} * x^{m-p} * prod_{c in pairs} (x + 1/rho_c), normalized
        for j in moved:
            p = p * binding.rate(j)
        p = p * xi ** (total_moved - len(pairs))
        for c in pairs:
            p = p * (xi + _inv(binding.rate(c)))
        for j in range(1, ell + 1):
            p = p * _inv_1p(binding.rate(j) * xi)
        return p

    raise ValueError(f"no closed form for case {case}")


def _inv(v):
    if isinstance(v, (int, Frac)):
        return Frac(1) / Frac(v)
    return rf(1) / rf(v)


def is_vertical_strip_pair(lam: Partition, mu: Partition) -> bool:
    return all(
        lam.part(i) - mu.part(i) in (0, 1) for i in range(1, lam.length() + 1)
    )


# ---------------------------------------------------------------------------
# single-step tables and Markov chaining
# ---------------------------------------------------------------------------


def _targets_pushing(mu: Partition, ell: int, cap: int) -> Iterator[Partition]:
    """All lam >= mu with lam_1 <= cap and at most ell rows."""

    def rec(j: int, prefix: list[int]):
        if j > ell:
            yield Partition(prefix)
            return
        hi = cap if j == 1 else prefix[-1]
        for v in range(mu.part(j), hi + 1):
            yield from rec(j + 1, prefix + [v])

    yield from rec(1, [])


def _targets_blocking(mu: Partition, ell: int, cap: int) -> Iterator[Partition]:
    """One blocking step: mu_j <= lam_j <= mu_{j-1} (cap for j=1)."""

    def rec(j: int, prefix: list[int]):
        if j > ell:
            yield Partition(prefix)
            return
        hi = cap if j == 1 else min(mu.part(j - 1), prefix[-1])
        for v in range(mu.part(j), hi + 1):
            yield from rec(j + 1, prefix + [v])

    yield from rec(1, [])


def _targets_bernoulli(mu: Partition, ell: int) -> Iterator[Partition]:
    def rec(j: int, prefix: list[int]):
        if j > ell:
            yield Partition(prefix)
            return
        for d in (0, 1):
            v = mu.part(j) + d
            if j > 1 and v > prefix[-1]:
                continue
            yield from rec(j + 1, prefix + [v])

    yield from rec(1, [])


def single_step_table(
    case: CaseId,
    mu: Partition,
    time_index: int,
    binding: ParamBinding,
    ell: int,
    cap: int,
) -> KernelTable:
    if cap < mu.part(1):
        raise ValueError(f"cap {cap} smaller than mu_1 = {mu.part(1)}")
    if case.geometric:
        gen = _targets_pushing(mu, ell, cap) if case.pushing else _targets_blocking(mu, ell, cap)
    else:
        gen = _targets_bernoulli(mu, ell)
    probs = {}
    for lam in gen:
        p = single_step_closed_form(case, mu, lam, time_index, binding, ell)
        if not is_zero_scalar(p):
            probs[lam] = p
    total = sum(probs.values(), Frac(0))
    tail = 1 - total if case.geometric else Frac(0)
    return KernelTable(case, 1, mu, ell, probs, tail)


def chain(
    case: CaseId,
    n: int,
    mu: Partition,
    binding: ParamBinding,
    ell: int,
    cap: int,
) -> KernelTable:
    """n-fold composition of single-step tables, restricted to lam_1 <= cap;
    geometric cases report the exact dropped tail mass."""
    if cap < mu.part(1):
        raise ValueError(f"cap {cap} smaller than mu_1 = {mu.part(1)}")
    current = {mu: Frac(1)}
    tail = Frac(0)
    for i in range(1, n + 1):
        nxt: dict = {}
        for nu, w in current.items():
            step = single_step_table(case, nu, i, binding, ell, cap)
            tail = tail + w * step.tail
            for lam, p in step.probs.items():
                if lam.part(1) > cap:
                    # positions never decrease, so this mass can only end
                    # outside the cap: it belongs to the tail exactly
                    tail = tail + w * p
                    continue
                cur = nxt.get(lam)
                add = w * p
                nxt[lam] = add if cur is None else cur + add
        current = nxt
    return KernelTable(case, n, mu, ell, current, tail)


# ---------------------------------------------------------------------------
# operator route
# ---------------------------------------------------------------------------


def _op_params_for(case: CaseId, binding: ParamBinding, ell: int) -> OpParams:
    # Rates beyond the particle count are zero: the process has exactly
    # ell particles regardless of how long the supplied rate list is.
    def rate(j: int):
        return binding.rate(j) if j <= ell else Frac(0)

    if case is CaseId.A or case is CaseId.D:
        return OpParams.bound(None, lambda j: _inv(rate(j)))
    if case is CaseId.C or case is CaseId.B:
        return OpParams.bound(None, lambda j: rate(j + 1))
    if case is CaseId.CANONICAL_C:
        return OpParams(
            alpha=lambda k: binding.alpha_of(k) if k >= 1 else Frac(0),
            beta=lambda j: rate(j + 1),
        )
    if case is CaseId.CANONICAL_B:
        # acts on conjugate shapes: alpha indexed by particle count,
        # beta by position
        return OpParams(
            alpha=lambda k: rate(k + 1) if k >= 1 else Frac(0),
            beta=lambda j: binding.beta_pos_of(j),
        )
    raise ValueError(case)


def _resolvent_U(
    j: int, vec: PartitionVector, xi, params: OpParams, size_cap: int
) -> PartitionVector:
    """(1 - x U_j)^{-1} applied exactly: walk the add-a-box chain with
    self-loop factors 1/(1+alpha x) resummed, and the blocked terminal's
    geometric tail 1/(1-beta x)."""
    out = PartitionVector()
    for lam, coeff in vec.terms.items():
        cur = lam
        w = coeff
        while True:
            above = cur.part(j - 1) if j > 1 else None
            here = cur.part(j)
            blocked = above is not None and here == above
            if blocked:
                b = params.beta(j - 1)
                out.add_term(cur, w * _inv_den(1 - b * xi))
                break
            a = params.alpha(here)
            w_here = w * _inv_den(1 + a * xi) if not is_zero_scalar(a) else w
            out.add_term(cur, w_here)
            parts = list(cur.padded(max(len(cur.parts), j)))
            parts[j - 1] += 1
            nxt = Partition(parts)
            if nxt.size() > size_cap:
                break
            w = w_here * xi
            cur = nxt
    return out


def _resolvent_u(
    j: int, vec: PartitionVector, xi, params: OpParams, size_cap: int
) -> PartitionVector:
    """(1 - x u_j)^{-1} for the alpha=0 pushing operators: iterate the
    push closure, accumulating one beta per pushed row per step."""
    out = PartitionVector()
    for lam, coeff in vec.terms.items():
        cur = lam
        w = coeff
        while True:
            out.add_term(cur, w)
            nxt, pushed = push_closure(cur, j)
            if nxt.size() > size_cap:
                break
            step = xi
            for r in pushed:
                step = step * params.beta(r)
            w = w * step
            cur = nxt
    return out


def _inv_den(v):
    if isinstance(v, (int, Frac)):
        if v == 0:
            raise ZeroDivisionError("resolvent pole")
        return Frac(1) / Frac(v)
    return rf(1) / rf(v)


def _bernoulli_factor_U(
    j: int, vec: PartitionVector, xi, params: OpParams
) -> PartitionVector:
    return vec + apply_U(j, vec, params).scale(xi)


def _bernoulli_factor_u(
    j: int, vec: PartitionVector, xi, params: OpParams, size_cap: int
) -> PartitionVector:
    out = PartitionVector(dict(vec.terms))
    for lam, coeff in vec.terms.items():
        nxt, pushed = push_closure(lam, j)
        if nxt.size() > size_cap:
            continue
        w = coeff * xi
        for r in pushed:
            w = w * params.beta(r)
        out.add_term(nxt, w)
    return out


def _apply_time_step(
    case: CaseId,
    vec: PartitionVector,
    xi,
    params: OpParams,
    ell: int,
    size_cap: int,
) -> PartitionVector:
    """One time-evolution operator: sum_k x^k h_k (geometric) or e_k
    (Bernoulli) of the case's operator family, resummed as an ordered
    product of resolvents/affine factors."""
    if case is CaseId.A:
        for j in range(ell, 0, -1):
            vec = _resolvent_u(j, vec, xi, params, size_cap)
        return vec
    if case in (CaseId.C, CaseId.CANONICAL_C, CaseId.CANONICAL_B):
        # CANONICAL_B evaluates G_{lam'\\mu'} through the e^H pairing on
        # conjugate shapes, which is the same h_k resolvent product.
        for j in range(ell, 0, -1):
            vec = _resolvent_U(j, vec, xi, params, size_cap)
        return vec
    if case is CaseId.D:
        for j in range(1, ell + 1):
            vec = _bernoulli_factor_u(j, vec, xi, params, size_cap)
        return vec
    if case is CaseId.B:
        for j in range(1, ell + 1):
            vec = _bernoulli_factor_U(j, vec, xi, params)
        return vec
    raise ValueError(case)


def operator_table(
    case: CaseId,
    n: int,
    mu: Partition,
    binding: ParamBinding,
    ell: int,
    size_cap: int,
) -> dict:
    """All transition probabilities from mu with |lambda| <= size_cap by a
    single operator evolution (the per-target route repeated in bulk)."""
    conj = case is CaseId.CANONICAL_B
    if conj:
        start = conjugate(mu)
        rows = size_cap + 1
    else:
        start = mu
        rows = ell
    params = _op_params_for(case, binding, ell)
    vec = PartitionVector.basis(start)
    for i in range(1, n + 1):
        vec = _apply_time_step(case, vec, binding.x_of(i), params, rows, size_cap)
    out = {}
    for target, coeff in vec.terms.items():
        lam = conjugate(target) if conj else target
        if lam.length() > ell:
            continue
        out[lam] = _normalize_operator_coeff(
            case, coeff, mu, lam, binding, ell, rows, n
        )
    return out


def kernel_operator_route(
    case: CaseId,
    n: int,
    mu: Partition,
    lam: Partition,
    binding: ParamBinding,
    ell: int,
):
    """Kernel via the noncommutative-operator time evolution."""
    conj = case is CaseId.CANONICAL_B
    if conj:
        start, target = conjugate(mu), conjugate(lam)
        # one extra row so every untracked row is uniformly blocked, making
        # the finite (1 - beta_j x) normalizer exact
        rows = max(lam.part(1), mu.part(1)) + 1
        if binding.beta_pos is not None and not is_zero_scalar(binding.beta_pos_of(0)):
            raise ValueError("operator route for CanonicalB requires beta_pos(0) = 0")
    else:
        start, target = mu, lam
        rows = ell
    if case is CaseId.CANONICAL_C and binding.alpha is not None:
        if not is_zero_scalar(binding.alpha_of(0)):
            raise ValueError("operator route for CanonicalC requires alpha(0) = 0")
    params = _op_params_for(case, binding, ell)
    size_cap = max(target.size(), start.size())
    vec = PartitionVector.basis(start)
    for i in range(1, n + 1):
        vec = _apply_time_step(case, vec, binding.x_of(i), params, rows, size_cap)
    coeff = vec.coeff(target)
    return _normalize_operator_coeff(case, coeff, mu, lam, binding, ell, rows, n)


def _normalize_operator_coeff(case, coeff, mu, lam, binding, ell, rows, n):
    if is_zero_scalar(coeff):
        return Frac(0)
    out = coeff
    for i in range(1, n + 1):
        xi = binding.x_of(i)
        if case is CaseId.A:
            for j in range(1, ell + 1):
                out = out * (1 - binding.rate(j) * xi)
        elif case is CaseId.C:
            for j in range(1, ell + 1):
                out = out * (1 - binding.rate(j) * xi)
        elif case is CaseId.D:
            for j in range(1, ell + 1):
                out = out * _inv_1p(binding.rate(j) * xi)
        elif case is CaseId.B:
            for j in range(1, ell + 1):
                out = out * _inv_1p(binding.rate(j) * xi)
        elif case is CaseId.CANONICAL_C:
            for j in range(1, ell + 1):
                out = out * (1 - binding.rate(j) * xi)
        elif case is CaseId.CANONICAL_B:
            # G = prod_{j<rows}(1 - beta_j x) * coeff, then the Bernoulli
            # normalizer 1/(1 + rho_1 x)
            out = out * _inv_1p(binding.rate(1) * xi)
            for j in range(1, rows):
                out = out * (1 - binding.beta_pos_of(j) * xi)
    out = out * _rate_monomial(case, mu, lam, binding)
    return out


def _rate_monomial(case: CaseId, mu: Partition, lam: Partition, binding: ParamBinding):
    """pi^{lam/mu} (rho for Bernoulli), or the (alpha+pi)/(beta+rho) box
    products for the canonical cases."""
    out: Scalar = Frac(1)
    if case.canonical:
        for r in range(1, lam.length() + 1):
            for c in range(mu.part(r) + 1, lam.part(r) + 1):
                if case is CaseId.CANONICAL_C:
                    out = out * (binding.alpha_of(c - 1) + binding.rate(r))
                else:
                    out = out * (binding.beta_pos_of(c - 1) + binding.rate(r))
        return out
    for r in range(1, lam.length() + 1):
        out = out * binding.rate(r) ** (lam.part(r) - mu.part(r))
    return out


# ---------------------------------------------------------------------------
# tableau route
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _cached_gdoubleslash(outer_parts, inner_parts, n, alpha_on, beta_on, convention):
    return tableaux.gen_G_doubleslash(
        Partition(outer_parts),
        Partition(inner_parts),
        n,
        alpha_on,
        beta_on,
        convention,
        resummed=True,
    )


@lru_cache(maxsize=None)
def _cached_gen_g(outer_parts, inner_parts, n):
    return tableaux.gen_g(SkewShape(Partition(outer_parts), Partition(inner_parts)), n)


@lru_cache(maxsize=None)
def _cached_gen_j(outer_parts, inner_parts, n):
    return tableaux.gen_j(SkewShape(Partition(outer_parts), Partition(inner_parts)), n)


def _binding_map(case: CaseId, value, binding: ParamBinding, ell: int) -> dict:
    """Bind the tableau generating function's variables per case.  Rates
    beyond the particle count read as zero."""
    rate = lambda j: binding.rate(j) if j <= ell else Frac(0)
    out = {}
    for v in value.variables() if hasattr(value, "variables") else []:
        fam, idx = v.family, v.index
        if fam == "X":
            out[v] = binding.x_of(idx)
        elif fam == "B":
            if case is CaseId.A:
                out[v] = _inv(rate(idx))
            elif case in (CaseId.C, CaseId.CANONICAL_C):
                out[v] = rate(idx + 1)
            elif case is CaseId.CANONICAL_B:
                out[v] = binding.beta_pos_of(idx)
            else:
                raise ValueError(f"unexpected beta variable for case {case}")
        elif fam == "A":
            if case is CaseId.D:
                out[v] = _inv(rate(idx))
            elif case in (CaseId.B, CaseId.CANONICAL_B):
                out[v] = rate(idx + 1)
            elif case is CaseId.CANONICAL_C:
                out[v] = binding.alpha_of(idx)
            else:
                raise ValueError(f"unexpected alpha variable for case {case}")
        else:
            raise ValueError(f"unexpected variable family {fam}")
    return out


def kernel_tableau_route(
    case: CaseId,
    n: int,
    mu: Partition,
    lam: Partition,
    binding: ParamBinding,
    ell: int,
    convention: IndexConvention = PINNED_CONVENTIONS.index,
):
    """Kernel via the Grothendieck-type generating functions of Thm-1.1
    shape: symbolic tableau sums specialized at the binding."""
    xs = [binding.x_of(i) for i in range(1, n + 1)]

    def bind(value):
        if isinstance(value, (int, Frac)):
            return Frac(value)
        return value.eval(_binding_map(case, value, binding, ell))

    if case is CaseId.A:
        if not lam.contains(mu):
            return Frac(0)
        g = _cached_gen_g(lam.parts, mu.parts, n)
        val = bind(g) * _rate_monomial(case, mu, lam, binding)
        for j in range(1, ell + 1):
            for xi in xs:
                val = val * (1 - binding.rate(j) * xi)
        return val

    if case is CaseId.C:
        g = _cached_gdoubleslash(lam.parts, mu.parts, n, False, True, convention)
        val = bind(g) * _rate_monomial(case, mu, lam, binding)
        for xi in xs:
            val = val * (1 - binding.rate(1) * xi)
        return val

    if case is CaseId.B:
        lamc, muc = conjugate(lam), conjugate(mu)
        g = _cached_gdoubleslash(lamc.parts, muc.parts, n, True, False, convention)
        val = bind(g) * _rate_monomial(case, mu, lam, binding)
        for xi in xs:
            val = val * _inv_1p(binding.rate(1) * xi)
        return val

    if case is CaseId.D:
        if not lam.contains(mu):
            return Frac(0)
        lamc, muc = conjugate(lam), conjugate(mu)
        g = _cached_gen_j(lamc.parts, muc.parts, n)
        val = bind(g) * _rate_monomial(case, mu, lam, binding)
        for j in range(1, ell + 1):
            for xi in xs:
                val = val * _inv_1p(binding.rate(j) * xi)
        return val

    if case is CaseId.CANONICAL_C:
        alpha0 = binding.alpha_of(0)
        if n > 1 and not is_zero_scalar(alpha0):
            raise ValueError("tableau route for CanonicalC with n>1 needs alpha(0)=0")
        g = _cached_gdoubleslash(lam.parts, mu.parts, n, True, True, convention)
        val = bind(g) * _rate_monomial(case, mu, lam, binding)
        for xi in xs:
            val = val * (1 - binding.rate(1) * xi)
        if not is_zero_scalar(alpha0) and mu.length() < ell:
            val = val * _inv_1p(alpha0 * xs[0])
        return val

    if case is CaseId.CANONICAL_B:
        beta0 = binding.beta_pos_of(0)
        if not is_zero_scalar(beta0):
            raise ValueError("tableau route for CanonicalB needs beta_pos(0)=0")
        lamc, muc = conjugate(lam), conjugate(mu)
        g = _cached_gdoubleslash(lamc.parts, muc.parts, n, True, True, convention)
        val = bind(g) * _rate_monomial(case, mu, lam, binding)
        for xi in xs:
            val = val * _inv_1p(binding.rate(1) * xi)
        return val

    raise ValueError(case)


# ---------------------------------------------------------------------------
# public kernel dispatch
# ---------------------------------------------------------------------------


def kernel(query: KernelQuery):
    """Exact transition probability for the query, by the selected route."""
    case, n, mu, lam = query.case, query.n, query.mu, query.lam
    if n == 0:
        return Frac(1) if mu == lam else Frac(0)
    if query.route == "closed":
        cap = max(lam.part(1), mu.part(1))
        table = chain(case, n, mu, query.binding, query.ell, cap)
        return table.prob(lam)
    if query.route == "operator":
        return kernel_operator_route(case, n, mu, lam, query.binding, query.ell)
    if query.route == "tableau":
        return kernel_tableau_route(case, n, mu, lam, query.binding, query.ell)
    raise ValueError(f"unknown route {query.route}")


# ---------------------------------------------------------------------------
# normalization identity (skew Pieri specialization)
# ---------------------------------------------------------------------------


def normalization_identity(mu: Partition, n: int, degree_cap: int):
    """Residual of
    sum_lam G_{lam\\mu}(x_n; beta) pi^lam = prod_i (1-pi_1 x_i)^{-1} pi^mu
    with beta_j = pi_{j+1}, both sides expanded through total x-degree
    ``degree_cap``.  Returns the exact difference (zero iff identity holds
    through the cap)."""
    from .exactalg import P as Pvar, X as Xvar, as_poly

    subs = {}
    lhs = LaurentPoly.zero()
    max_rows = mu.length() + n
    for lam in _partitions_dominated(mu, degree_cap + mu.size(), max_rows):
        g = tableaux.gen_G_doubleslash(lam, mu, n, False, True, PINNED_CONVENTIONS.index)
        g = as_poly(g) if isinstance(g, (int, Frac)) else g
        if isinstance(g, RationalFn):
            g = g.as_poly_if_possible()
        # substitute beta_j -> pi_{j+1}
        bvars = [v for v in g.variables() if v.family == "B"]
        g = g.substitute({v: Pvar(v.index + 1) for v in bvars})
        g = as_poly(g)
        mono = LaurentPoly.const(1)
        for r in range(1, lam.length() + 1):
            mono = mono * Pvar(r) ** lam.part(r)
        lhs = lhs + (mono * g).truncate_family_degree("X", degree_cap)
    rhs = LaurentPoly.const(1)
    for r in range(1, mu.length() + 1):
        rhs = rhs * Pvar(r) ** mu.part(r)
    geo = LaurentPoly.const(1)
    for i in range(1, n + 1):
        series = LaurentPoly.zero()
        for k in range(degree_cap + 1):
            series = series + (Pvar(1) * Xvar(i)) ** k
        geo = (geo * series).truncate_family_degree("X", degree_cap)
    rhs = rhs * geo
    return (lhs - rhs).truncate_family_degree("X", degree_cap)


def _partitions_dominated(mu: Partition, max_size: int, max_rows: int):
    """All lam >= mu componentwise with |lam| <= max_size, <= max_rows rows."""
    out = []

    def rec(j: int, prefix: list[int], used: int):
        if j > max_rows:
            out.append(Partition(prefix))
            return
        hi = (max_size - used) if j == 1 else min(prefix[-1], max_size - used)
        lo = mu.part(j)
        if lo > hi:
            return
        for v in range(lo, hi + 1):
            rec(j + 1, prefix + [v], used + v)

    rec(1, [], 0)
    return [p for p in out if p.size() <= max_size]
