import math
from fractions import Fraction as F

import numpy as np
import pytest

from ktasep.kernels import CaseId
from ktasep.partitions import Partition
from ktasep.simulate import (
    SimConfig,
    Trajectory,
    inhom_geometric_pmf,
    rng_for,
    run,
    run_continuous,
    run_many,
    sample_batch_final,
    sample_inhom_geometric,
    step_batch,
    step_discrete,
)

P_ = Partition


def test_fixed_seed_determinism():
    cfg = SimConfig(case=CaseId.A, ell=4, steps=5, rates=[0.5] * 4, x=[0.4], seed=9)
    t1 = run(cfg)
    t2 = run(cfg)
    assert [s for s in t1.snapshots] == [s for s in t2.snapshots]


def test_run_many_thread_independence():
    cfg = SimConfig(case=CaseId.C, ell=3, steps=3, rates=[0.5, 0.4, 0.3], x=[0.5], seed=3)
    s1 = run_many(cfg, 40, threads=1)
    s8 = run_many(cfg, 40, threads=8)
    assert s1 == s8


def test_states_stay_partitions():
    # randomized steps across every case keep the state a partition
    rng = rng_for(123, 0)
    total = 0
    for case in CaseId:
        cfg = SimConfig(
            case=case,
            ell=5,
            steps=1,
            rates=[0.6, 0.5, 0.4, 0.3, 0.2],
            x=[0.5],
            alpha=(lambda k: 0.2) if case is CaseId.CANONICAL_C else None,
            beta_pos=(lambda k: 0.1 if k >= 1 else 0.0)
            if case is CaseId.CANONICAL_B
            else None,
            seed=1,
        )
        state = P_([])
        for i in range(400):
            state = step_discrete(case, state, 1, cfg, rng)
            total += 1
            assert all(
                state.parts[i] >= state.parts[i + 1]
                for i in range(len(state.parts) - 1)
            )
    assert total == 400 * len(CaseId)


def test_bernoulli_moves_at_most_one():
    rng = rng_for(7, 0)
    cfg = SimConfig(case=CaseId.D, ell=4, steps=1, rates=[0.9] * 4, x=[0.9], seed=1)
    state = P_([])
    for _ in range(300):
        new = step_discrete(CaseId.D, state, 1, cfg, rng)
        assert all(new.part(j) - state.part(j) <= 1 for j in range(1, 5))
        state = new


def test_blocking_cap_respected():
    rng = rng_for(17, 0)
    cfg = SimConfig(case=CaseId.C, ell=3, steps=1, rates=[0.8, 0.8, 0.8], x=[0.9], seed=1)
    state = P_([3, 1])
    for _ in range(200):
        new = step_discrete(CaseId.C, state, 1, cfg, rng)
        # each particle capped by the pre-update neighbour position
        for j in range(2, 4):
            assert new.part(j) <= state.part(j - 1)
        state = new


def test_forced_draw_blocking_example():
    # Case C, state (1,1), draws w1=1, w2=5, w3=0 -> (2,1): particle 2
    # fully blocked at the pre-update position of particle 1
    class Forced:
        def __init__(self, draws):
            self.draws = list(draws)

        def random(self):
            return self.draws.pop(0)

    cfg = SimConfig(case=CaseId.C, ell=3, steps=1, rates=[0.5, 0.5, 0.5], x=[0.5], seed=0)
    # inverse transform: w = k for u in [1-q^k, 1-q^{k+1}); q = 0.25.
    # Update order is descending, so draws land on particles 3, 2, 1.
    q = 0.25
    u_w0 = 0.5             # -> w = 0
    u_w5 = 1 - q**5 * 0.7  # -> w = 5
    u_w1 = 0.8             # -> w = 1
    rngf = Forced([u_w0, u_w5, u_w1])
    out = step_discrete(CaseId.C, P_([1, 1]), 1, cfg, rngf)
    assert out == P_([2, 1])


def test_pushing_example_case_a():
    # particle 4 jumps 1 from (4,1,1,1): two pushes -> (4,2,2,2)
    class Forced:
        def __init__(self, draws):
            self.draws = list(draws)

        def random(self):
            return self.draws.pop(0)

    cfg = SimConfig(case=CaseId.A, ell=4, steps=1, rates=[0.5] * 4, x=[0.5], seed=0)
    rngf = Forced([0.8, 0.0, 0.0, 0.0])  # w4=1, others 0 (descending order)
    out = step_discrete(CaseId.A, P_([4, 1, 1, 1]), 1, cfg, rngf)
    assert out == P_([4, 2, 2, 2])


def test_all_zero_jumps_keep_state():
    # uniforms chosen so every sampled jump is zero
    class Still:
        def __init__(self, geometric):
            self.geometric = geometric

        def random(self):
            return 0.0 if self.geometric else 0.999

    for case in (CaseId.A, CaseId.C):
        cfg = SimConfig(case=case, ell=3, steps=1, rates=[0.5] * 3, x=[0.5], seed=0)
        assert step_discrete(case, P_([2, 1]), 1, cfg, Still(True)) == P_([2, 1])
    for case in (CaseId.B, CaseId.D):
        cfg = SimConfig(case=case, ell=3, steps=1, rates=[0.5] * 3, x=[0.5], seed=0)
        assert step_discrete(case, P_([2, 1]), 1, cfg, Still(False)) == P_([2, 1])


def test_inhom_geometric_matches_plain_geometric():
    # alpha == 0 reduces to the ordinary geometric with parameter pi x
    rng = rng_for(5, 0)
    pi, x = 0.5, 0.8
    n = 40000
    counts = {}
    for _ in range(n):
        v = sample_inhom_geometric(lambda k: 0.0, pi, x, 0, rng)
        counts[v] = counts.get(v, 0) + 1
    q = pi * x
    for k in range(4):
        expect = (1 - q) * q**k
        assert abs(counts.get(k, 0) / n - expect) < 0.01


def test_inhom_pmf_masses():
    alpha = lambda k: 1.0 - k * math.exp(-k / 2.0)
    pmf = inhom_geometric_pmf(alpha, 0.5, 1.0, 120, 0)
    assert abs(sum(pmf) - 1.0) < 1e-12
    # zero mass beyond a hard wall: -alpha_k = pi stops particles at k
    alpha_wall = lambda k: -0.5 if k == 3 else 0.2
    pmf = inhom_geometric_pmf(alpha_wall, 0.5, 1.0, 10, 0)
    assert all(abs(p) < 1e-15 for p in pmf[4:])


def test_batch_matches_exact_single_step():
    from ktasep.kernels import ParamBinding, chain

    b = ParamBinding.numeric(x=[F(1, 2)], rates=[F(1, 2), F(2, 5), F(1, 4)])
    exact = chain(CaseId.C, 1, P_([1]), b, 3, cap=10)
    cfg = SimConfig(
        case=CaseId.C, ell=3, steps=1, rates=[0.5, 0.4, 0.25], x=[0.5], seed=11,
        start=P_([1]),
    )
    pos = sample_batch_final(cfg, 60000, 11)
    counts = {}
    for row in pos:
        key = P_([int(v) for v in row])
        counts[key] = counts.get(key, 0) + 1
    for lam, p in exact.probs.items():
        if float(p) > 0.01:
            assert abs(counts.get(lam, 0) / 60000 - float(p)) < 0.01, lam


def test_continuous_time_zero():
    rng = rng_for(1, 0)
    assert run_continuous(4, 0.0, 1.0, rng) == [0, 0, 0, 0]


def test_continuous_poisson_mean():
    rng = rng_for(2, 0)
    n = 30000
    total = sum(run_continuous(1, 3.0, 1.0, rng)[0] for _ in range(n))
    mean = total / n
    assert abs(mean - 3.0) < 4 * math.sqrt(3.0 / n)


def test_continuous_exclusion_order():
    rng = rng_for(3, 0)
    for _ in range(50):
        pos = run_continuous(5, 2.0, 1.0, rng, push=False)
        assert all(pos[i] >= pos[i + 1] for i in range(4))
        pos = run_continuous(5, 2.0, 1.0, rng, push=True)
        assert all(pos[i] >= pos[i + 1] for i in range(4))


def test_config_validation_errors():
    cfg = SimConfig(case=CaseId.A, ell=2, steps=1, rates=[3.0, 3.0], x=[0.5], seed=0)
    with pytest.raises(ValueError, match="pi_1"):
        cfg.validate()
    cfg = SimConfig(case=CaseId.B, ell=2, steps=1, rates=[-1.0, 1.0], x=[0.5], seed=0)
    with pytest.raises(ValueError, match="rho_1"):
        cfg.validate()


def test_fermionic_picture_transform():
    traj = Trajectory([(0, P_([])), (1, P_([2, 1]))])
    ferm = traj.positions("fermionic")
    assert ferm[-1][1] == [1, -1]
