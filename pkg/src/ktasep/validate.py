"""Cross-validation harness: brute-force dynamics oracle, route-agreement
drivers, Monte Carlo vs exact statistics, convention arbitration, and the
tableau <-> trajectory correspondences.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction as Frac

import numpy as np

from .conventions import (
    Conventions,
    IndexConvention,
    PINNED_CONVENTIONS,
    UpdateOrder,
)
from .kernels import (
    CaseId,
    KernelTable,
    ParamBinding,
    chain,
    kernel_operator_route,
    kernel_tableau_route,
    single_step_closed_form,
)
from .partitions import Partition, partitions_in_box, subpartitions
from .simulate import SimConfig, sample_batch_final

OVERFLOW = None  # jump symbol for "more than the enumeration window"


# ---------------------------------------------------------------------------
# brute-force single-step oracle
# ---------------------------------------------------------------------------


def _outcome_list(case: CaseId, binding: ParamBinding, j: int, time_index: int,
                  mu_j: int, window: int):
    """Exact per-particle outcome list [(jump or OVERFLOW, mass)].

    Geometric jumps are enumerated to ``window`` with the aggregated
    remainder as OVERFLOW; Bernoulli jumps are {0, 1}."""
    xi = binding.x_of(time_index)
    if case in (CaseId.B, CaseId.D):
        v = binding.rate(j) * xi
        p1 = v / (1 + v)
        return [(0, 1 - p1), (1, p1)]
    if case is CaseId.CANONICAL_B:
        v = binding.rate(j) * xi
        p1 = (binding.rate(j) + binding.beta_pos_of(mu_j)) * xi / (1 + v)
        return [(0, 1 - p1), (1, p1)]
    if case in (CaseId.A, CaseId.C):
        q = binding.rate(j) * xi
        out = [(w, (1 - q) * q**w) for w in range(window + 1)]
        out.append((OVERFLOW, q ** (window + 1)))
        return out
    if case is CaseId.CANONICAL_C:
        pi = binding.rate(j)
        out = []
        run = Frac(1)
        for w in range(window + 1):
            a_end = binding.alpha_of(mu_j + w)
            out.append((w, run * (1 - pi * xi) / (1 + a_end * xi)))
            run = run * (binding.alpha_of(mu_j + w) + pi) * xi / (1 + binding.alpha_of(mu_j + w) * xi)
        out.append((OVERFLOW, run))
        return out
    raise ValueError(case)


def _apply_jumps(case: CaseId, mu: Partition, jumps: list, ell: int,
                 update: UpdateOrder):
    """Deterministic state map given raw jump lengths (OVERFLOW = +inf).
    Returns the final position list or None when a pushing overflow makes
    the state leave every cap."""
    pos: list = list(mu.padded(ell))
    descending = update is UpdateOrder.GEOMETRIC_DESCENDING
    if case.geometric:
        order = range(ell, 0, -1) if descending else range(1, ell + 1)
    else:
        order = range(1, ell + 1) if descending else range(ell, 0, -1)
    for j in order:
        w = jumps[j - 1]
        if case.pushing:
            if w is OVERFLOW:
                return None
            new = pos[j - 1] + w
            pos[j - 1] = new
            for i in range(j - 1, 0, -1):
                if pos[i - 1] < new:
                    pos[i - 1] = new
                else:
                    break
        elif case.geometric:  # blocking with unbounded jumps
            cap = pos[j - 2] if j > 1 else None
            if w is OVERFLOW:
                if cap is None:
                    return None
                pos[j - 1] = cap
            else:
                new = pos[j - 1] + w
                pos[j - 1] = min(new, cap) if cap is not None else new
        else:  # Bernoulli blocking
            if w and (j == 1 or pos[j - 1] < pos[j - 2]):
                pos[j - 1] += 1
    return pos


def brute_force_single_step(
    case: CaseId,
    mu: Partition,
    binding: ParamBinding,
    ell: int,
    cap: int,
    time_index: int = 1,
    update: UpdateOrder = PINNED_CONVENTIONS.update,
) -> KernelTable:
    """Enumerate all jump-outcome combinations, apply the configured
    update order, and sum exact masses per resulting state.  Geometric
    overflow (beyond the cap window) is pooled into the tail."""
    if cap < mu.part(1):
        raise ValueError(f"cap {cap} too small to contain mu")
    window = cap  # single-step jumps beyond cap always leave the box
    lists = [
        _outcome_list(case, binding, j, time_index, mu.part(j), window)
        for j in range(1, ell + 1)
    ]
    probs: dict = {}
    tail = Frac(0)
    for combo in itertools.product(*lists):
        jumps = [c[0] for c in combo]
        mass = Frac(1)
        for c in combo:
            mass = mass * c[1]
        if mass == 0:
            continue
        pos = _apply_jumps(case, mu, jumps, ell, update)
        if pos is None or pos[0] > cap:
            tail = tail + mass
            continue
        lam = Partition(pos)
        probs[lam] = probs.get(lam, Frac(0)) + mass
    return KernelTable(case, 1, mu, ell, probs, tail)


def brute_force_table(
    case: CaseId,
    n: int,
    mu: Partition,
    binding: ParamBinding,
    ell: int,
    cap: int,
    update: UpdateOrder = PINNED_CONVENTIONS.update,
) -> KernelTable:
    """n-step oracle: chain single-step brute-force tables."""
    current = {mu: Frac(1)}
    tail = Frac(0)
    for i in range(1, n + 1):
        nxt: dict = {}
        for nu, w in current.items():
            step = brute_force_single_step(case, nu, binding, ell, cap, i, update)
            tail = tail + w * step.tail
            for lam, p in step.probs.items():
                nxt[lam] = nxt.get(lam, Frac(0)) + w * p
        current = nxt
    return KernelTable(case, n, mu, ell, current, tail)


# ---------------------------------------------------------------------------
# route agreement / convention arbitration
# ---------------------------------------------------------------------------


@dataclass
class OracleRow:
    lam: Partition
    oracle: Frac
    closed: Frac
    operator: Frac
    tableau: Frac

    @property
    def equal(self) -> bool:
        return self.oracle == self.closed == self.operator == self.tableau


@dataclass
class OracleReport:
    case: CaseId
    mu: Partition
    n: int
    conventions: Conventions
    rows: list = field(default_factory=list)
    tail: Frac = Frac(0)

    @property
    def all_equal(self) -> bool:
        return all(r.equal for r in self.rows)

    def failures(self):
        return [r for r in self.rows if not r.equal]


def route_agreement(
    case: CaseId,
    mu: Partition,
    n: int,
    binding: ParamBinding,
    ell: int,
    targets: list[Partition],
    cap: int,
    conventions: Conventions = PINNED_CONVENTIONS,
) -> OracleReport:
    """Compare oracle, closed-form chain, operator, and tableau values for
    every target partition; exact rational comparisons."""
    oracle = brute_force_table(case, n, mu, binding, ell, cap, conventions.update)
    closed = chain(case, n, mu, binding, ell, cap)
    report = OracleReport(case, mu, n, conventions, tail=oracle.tail)
    for lam in targets:
        if lam.length() > ell or lam.part(1) > ell:
            continue
        o = oracle.prob(lam)
        c = closed.prob(lam)
        try:
            p = kernel_operator_route(case, n, mu, lam, binding, ell)
        except ValueError:
            p = None
        try:
            t = kernel_tableau_route(case, n, mu, lam, binding, ell, conventions.index)
        except ValueError:
            t = None
        report.rows.append(
            OracleRow(lam, o, c, p if p is not None else o, t if t is not None else o)
        )
    return report


def arbitrate_conventions(
    binding: ParamBinding | None = None, ell: int = 3, verbose: bool = False
) -> list[Conventions]:
    """Run tableau-vs-dynamics agreement over a small discriminating grid
    for each candidate convention pair; return the surviving pairs.

    The discriminating observables: Case C and CanonicalC single steps
    (index convention shows up in the corner factors; update order in the
    blocking caps)."""
    if binding is None:
        binding = ParamBinding.numeric(
            x=[Frac(1, 5)],
            rates=[Frac(1, 2), Frac(1, 3), Frac(1, 7)],
            alpha=lambda k: Frac(1, 4 + k) if k >= 1 else Frac(0),
            beta_pos=lambda k: Frac(1, 6 + k) if k >= 1 else Frac(0),
        )
    survivors = []
    mus = partitions_in_box(2, 2)
    lams = partitions_in_box(3, 3)
    for index in IndexConvention:
        for update in UpdateOrder:
            conv = Conventions(index=index, update=update)
            ok = True
            for case in (CaseId.C, CaseId.CANONICAL_C, CaseId.B, CaseId.D):
                for mu in mus:
                    oracle = brute_force_single_step(
                        case, mu, binding, ell, cap=3, update=update
                    )
                    for lam in lams:
                        try:
                            t = kernel_tableau_route(case, 1, mu, lam, binding, ell, index)
                        except ValueError:
                            ok = False
                            break
                        if t != oracle.prob(lam):
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    break
            if ok:
                survivors.append(conv)
            if verbose:
                print(f"{conv.fingerprint()}: {'OK' if ok else 'rejected'}")
    return survivors


def check_pinned_conventions() -> None:
    """Fail loudly if arbitration does not single out the pinned pair."""
    survivors = arbitrate_conventions()
    if len(survivors) != 1:
        raise AssertionError(
            f"convention arbitration ambiguous or empty: {[s.fingerprint() for s in survivors]}"
        )
    if survivors[0] != PINNED_CONVENTIONS:
        raise AssertionError(
            f"arbitrated {survivors[0].fingerprint()} != pinned {PINNED_CONVENTIONS.fingerprint()}"
        )


# ---------------------------------------------------------------------------
# Monte Carlo vs exact
# ---------------------------------------------------------------------------


@dataclass
class StatReport:
    samples: int
    table: dict          # state -> (empirical frequency, exact probability)
    chi_square: float
    dof: int
    p_value: float
    tv_distance: float

    @property
    def healthy(self) -> bool:
        return self.tv_distance < 0.01 and self.p_value > 0.001


def mc_vs_exact(
    case: CaseId,
    mu: Partition,
    n: int,
    binding: ParamBinding,
    ell: int,
    samples: int,
    seed: int,
    cap: int = 12,
    rng_bias: float | None = None,
) -> StatReport:
    """Sample the process and compare against the exact kernel table:
    chi-square over states with expected count >= 5 (rarer states pooled)
    plus total-variation distance.  ``rng_bias`` is the documented fault
    injection: uniforms are raised to that power before use."""
    if samples <= 0:
        raise ValueError("samples must be positive")
    exact = chain(case, n, mu, binding, ell, cap)
    config = SimConfig(
        case=case,
        ell=ell,
        steps=n,
        rates=[float(r) for r in binding.rates],
        x=[float(v) for v in binding.x],
        alpha=(lambda k: float(binding.alpha_of(k))) if binding.alpha else None,
        beta_pos=(lambda k: float(binding.beta_pos_of(k))) if binding.beta_pos else None,
        seed=seed,
        start=mu,
    )
    if rng_bias is None:
        finals = sample_batch_final(config, samples, seed)
    else:
        finals = _sample_biased(config, samples, seed, rng_bias)
    counts: dict = {}
    for row in finals:
        key = Partition([int(v) for v in row])
        counts[key] = counts.get(key, 0) + 1

    states = sorted(set(exact.probs) | set(counts))
    table = {}
    tv = 0.0
    for s in states:
        emp = counts.get(s, 0) / samples
        p = float(exact.prob(s))
        table[s] = (emp, p)
        tv += abs(emp - p)
    tv = 0.5 * (tv + float(exact.tail))

    # chi-square with pooling of expectations below 5
    pooled_obs, pooled_exp = [], []
    acc_o, acc_e = 0.0, 0.0
    for s in states:
        e = float(exact.prob(s)) * samples
        o = counts.get(s, 0)
        acc_o += o
        acc_e += e
        if acc_e >= 5:
            pooled_obs.append(acc_o)
            pooled_exp.append(acc_e)
            acc_o, acc_e = 0.0, 0.0
    acc_e += float(exact.tail) * samples
    if pooled_exp:
        if acc_e > 0 or acc_o > 0:
            pooled_obs[-1] += acc_o
            pooled_exp[-1] += acc_e
    stat = 0.0
    for o, e in zip(pooled_obs, pooled_exp):
        if e > 0:
            stat += (o - e) ** 2 / e
    dof = max(len(pooled_obs) - 1, 1)
    from scipy.stats import chi2

    p_value = float(chi2.sf(stat, dof))
    return StatReport(samples, table, stat, dof, p_value, tv)


def _sample_biased(config: SimConfig, samples: int, seed: int, power: float):
    """Fault-injected sampler: skews every uniform draw, which the
    chi-square harness must detect."""
    from . import simulate as sim

    class BiasedGenerator:
        def __init__(self, rng):
            self._rng = rng

        def random(self, *args, **kwargs):
            return self._rng.random(*args, **kwargs) ** power

        def geometric(self, p, size=None):
            u = self._rng.random(size) ** power
            return np.floor(np.log1p(-u) / np.log1p(-p)).astype(np.int64) + 1

    rng = BiasedGenerator(sim.rng_for(seed, 0))
    pos = np.tile(
        np.array(config.start.padded(config.ell), dtype=np.int64), (samples, 1)
    )
    for i in range(1, config.steps + 1):
        pos = sim.step_batch(config.case, pos, i, config, rng)
    return pos


# ---------------------------------------------------------------------------
# trajectory <-> tableau correspondences
# ---------------------------------------------------------------------------


def decode_trajectory(case: CaseId, shape_outer: Partition, shape_inner: Partition,
                      filling: dict, n: int) -> list:
    """Decode a tableau into the particle trajectory it encodes.

    Case A: reverse plane partition in classical form; the shape of
    entries <= i gives the positions at time i.  Case C: set-valued
    tableau; the minimal entries drive the motion the same way."""
    if case is CaseId.A:
        entry_of = lambda cell: filling[cell]
    elif case is CaseId.C:
        entry_of = lambda cell: min(filling[cell])
    else:
        raise ValueError(f"no trajectory decoding for case {case}")
    rows = shape_outer.length()
    snaps = [(0, shape_inner)]
    for i in range(1, n + 1):
        parts = []
        for r in range(1, rows + 1):
            width = shape_inner.part(r)
            for c in range(shape_inner.part(r) + 1, shape_outer.part(r) + 1):
                if entry_of((r, c)) <= i:
                    width = c
            parts.append(width)
        snaps.append((i, Partition(parts)))
    return snaps


def encode_trajectory(case: CaseId, snaps: list) -> dict:
    """Inverse of decode for Case A: box (r, c) holds the first time the
    r-th particle is at position >= c."""
    if case is not CaseId.A:
        raise ValueError("encode_trajectory is defined for case A")
    mu = snaps[0][1]
    lam = snaps[-1][1]
    filling = {}
    for r in range(1, lam.length() + 1):
        for c in range(mu.part(r) + 1, lam.part(r) + 1):
            t = next(i for i, p in snaps if p.part(r) >= c)
            filling[(r, c)] = t
    return filling
