"""Determinantal multi-point distributions and continuous-time kernels.

Pushing cases (A, D) use finite supersymmetric h/e determinant entries and
are exact.  Blocking cases (C, canonical) use difference-indexed theta
sums (series mode, truncated with a geometric tail bound) and an
alternative contour form whose entries are evaluated exactly by residues;
trapezoidal quadrature on the circle is the failure-independent
cross-check.  Case B's theta-e entries terminate and are exact.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction as Frac
from itertools import permutations
from typing import Sequence

import mpmath as mp

from .exactalg import supersym_e, supersym_h, theta_e_pair, theta_h_pair
from .kernels import CaseId, KernelTable, ParamBinding, chain
from .partitions import Partition


@dataclass
class MultiPointQuery:
    case: CaseId
    direction: str  # "le" for pushing (A, D), "ge" for blocking (B, C, canonical)
    n: int
    thresholds: Partition
    start: Partition
    ell: int
    binding: ParamBinding

    def __post_init__(self):
        want = "le" if self.case.pushing else "ge"
        if self.direction != want:
            raise ValueError(f"case {self.case} uses direction {want!r}")


@dataclass
class ContourSpec:
    radius: Frac
    points: int = 256
    mode: str = "residue"  # residue | series | quadrature


def _join(a: Partition, b: Partition) -> Partition:
    """Componentwise max; thresholds below the start are vacuous for the
    >= direction since positions never decrease."""
    n = max(a.length(), b.length())
    return Partition([max(a.part(i), b.part(i)) for i in range(1, n + 1)])


def det_exact(rows: list[list]) -> object:
    ell = len(rows)
    total = None
    for perm in permutations(range(ell)):
        sign = _perm_sign(perm)
        prod = rows[0][perm[0]]
        for i in range(1, ell):
            prod = prod * rows[i][perm[i]]
        term = prod if sign > 0 else -prod
        total = term if total is None else total + term
    return total if total is not None else Frac(1)


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, clen = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            clen += 1
        if clen % 2 == 0:
            sign = -sign
    return sign


# ---------------------------------------------------------------------------
# pushing: exact supersymmetric determinants
# ---------------------------------------------------------------------------


def mp_pushing(query: MultiPointQuery):
    """P(G(i,n) <= thresholds_i for all i | start), cases A and D, exact."""
    case, lam, nu, ell, b = (
        query.case,
        query.thresholds,
        query.start,
        query.ell,
        query.binding,
    )
    n = query.n
    xs = [b.x_of(i) for i in range(1, n + 1)]
    if not lam.contains(nu):
        return Frac(0)
    rows = []
    for i in range(1, ell + 1):
        row = []
        for j in range(1, ell + 1):
            m = lam.part(i) - nu.part(j) + j - i
            if case is CaseId.A:
                top = xs + [_inv(b.rate(k)) for k in range(1, i + 1)]
                bot = [_inv(b.rate(k)) for k in range(1, j)]
                row.append(supersym_h(m, top, bot))
            else:
                top = xs + [-_inv(b.rate(k)) for k in range(1, j)]
                bot = [-_inv(b.rate(k)) for k in range(1, i + 1)]
                row.append(supersym_e(m, top, bot))
        rows.append(row)
    det = det_exact(rows)
    pref = Frac(1)
    for i in range(1, ell + 1):
        pref = pref * b.rate(i) ** (lam.part(i) - nu.part(i))
        for xi in xs:
            if case is CaseId.A:
                pref = pref * (1 - b.rate(i) * xi)
            else:
                pref = pref / (1 + b.rate(i) * xi)
    return pref * det


def _inv(v):
    return Frac(1) / Frac(v) if isinstance(v, (int, Frac)) else 1 / v


# ---------------------------------------------------------------------------
# blocking: theta-series determinants and contour entries
# ---------------------------------------------------------------------------


def _beta_of(b: ParamBinding, k: int):
    return b.rate(k + 1)


def mp_blocking_series(query: MultiPointQuery, trunc: int = 60):
    """P(G(i,n) >= thresholds_i | start) via the theta determinant.

    Entries are the annulus Laurent expansions of the contour form: the
    first row carries the first particle's geometric factor, the others
    supersymmetric beta prefixes.  Case B's e-sums terminate (exact);
    geometric cases truncate at ``trunc`` with a geometric tail bound.
    The canonical process inserts the position window of -alpha letters.
    Returns (value, tail_bound)."""
    case, nu, mu, ell, b = (
        query.case,
        _join(query.thresholds, query.start),
        query.start,
        query.ell,
        query.binding,
    )
    n = query.n
    xs = [b.x_of(i) for i in range(1, n + 1)]
    rows = []
    for i in range(1, ell + 1):
        row = []
        for j in range(1, ell + 1):
            m = nu.part(i) - mu.part(j) - i + j
            if case in (CaseId.C, CaseId.CANONICAL_C):
                window = []
                if case is CaseId.CANONICAL_C:
                    window = [-b.alpha_of(k) for k in range(mu.part(j), nu.part(i))]
                if i == 1:
                    bot = (
                        window + [b.rate(1)] + [_beta_of(b, k) for k in range(1, j)],
                        (),
                    )
                else:
                    bot = (
                        window + [_beta_of(b, k) for k in range(1, j)],
                        [_beta_of(b, k) for k in range(1, i - 1)],
                    )
                row.append(theta_h_pair(m, (xs, ()), bot, trunc))
            elif case is CaseId.B:
                alpha_of = lambda k: b.rate(k + 1)
                if i == 1:
                    bot = ([b.rate(1)] + [alpha_of(k) for k in range(1, j)], ())
                else:
                    bot = (
                        [alpha_of(k) for k in range(1, j)],
                        [alpha_of(k) for k in range(1, i - 1)],
                    )
                row.append(_theta_e_h_pair(m, xs, bot, trunc))
            else:
                raise ValueError(case)
        rows.append(row)
    det = det_exact(rows)
    pref = Frac(1)
    if case is CaseId.CANONICAL_C:
        for r in range(1, nu.length() + 1):
            for c in range(mu.part(r) + 1, nu.part(r) + 1):
                pref = pref * (b.alpha_of(c - 1) + b.rate(r))
    else:
        for i in range(1, ell + 1):
            pref = pref * b.rate(i) ** (nu.part(i) - mu.part(i))
    for i in range(1, ell + 1):
        for xi in xs:
            if case is CaseId.B:
                pref = pref / (1 + b.rate(i) * xi)
            else:
                pref = pref * (1 - b.rate(i) * xi)
    value = pref * det
    if case is CaseId.B:
        return value, Frac(0)
    # geometric tail bound for the truncated h-sums: the largest ratio is
    # max |pi_j x_i| (alphas only shorten the admissible step products)
    q = max(
        (abs(Frac(b.rate(j)) * Frac(b.x_of(i))) for j in range(1, ell + 1)
         for i in range(1, n + 1)),
        default=Frac(0),
    )
    bound = Frac(0)
    if q > 0:
        fb = float(q) ** (trunc + 1) / (1.0 - float(q))
        bound = fb * (ell * ell * math.factorial(ell)) * 4.0
    return value, bound


def _theta_e_h_pair(m: int, xs, bot: tuple, trunc: int):
    """sum_{a-b=m} e_a(xs) h_b(top/bottom): the Bernoulli analog, which
    terminates because e_a vanishes beyond the alphabet size."""
    top_b, bot_b = bot
    total = 0
    a0 = max(m, 0)
    for a in range(a0, max(trunc, len(xs)) + 1):
        if a > len(xs):
            break
        b_idx = a - m
        if b_idx < 0:
            continue
        total = total + supersym_e(a, xs, ()) * supersym_h(b_idx, top_b, bot_b)
    return total


def mp_event_sum(query: MultiPointQuery, cap: int = 12):
    """Brute-force reference: sum exact kernels over the event set.
    Returns (value, tail_bound); the bound is the kernel mass outside the
    lambda_1 cap (zero for <=-direction and Bernoulli cases)."""
    case, thr, start, ell, b = (
        query.case,
        query.thresholds,
        query.start,
        query.ell,
        query.binding,
    )
    table = chain(case, query.n, start, b, ell, cap)
    total = Frac(0)
    for lam, p in table.probs.items():
        if query.direction == "le":
            ok = all(lam.part(i) <= thr.part(i) for i in range(1, ell + 1))
        else:
            ok = all(lam.part(i) >= thr.part(i) for i in range(1, ell + 1))
        if ok:
            total = total + p
    return total, table.tail


# -- contour entries (alternative determinant for Case C) -------------------


class SingularParameterError(ValueError):
    pass


def _series_inverse_prod(roots: Sequence[Frac], xs: Sequence[Frac], order: int):
    """Power series coefficients of 1/(prod_k (1 - w/c_k) * prod_m (1 - x_m w))
    through w^order, exact."""
    coeffs = [Frac(1)] + [Frac(0)] * order
    for c in roots:
        inv = Frac(1) / c
        # multiply by 1/(1 - w/c) = sum (w/c)^s
        new = [Frac(0)] * (order + 1)
        acc = Frac(0)
        for s in range(order + 1):
            acc = coeffs[s] + acc * inv
            new[s] = acc
        coeffs = new
    for x in xs:
        new = [Frac(0)] * (order + 1)
        acc = Frac(0)
        for s in range(order + 1):
            acc = coeffs[s] + acc * Frac(x)
            new[s] = acc
        coeffs = new
    return coeffs


def _poly_mul(a: list, b: list) -> list:
    out = [Frac(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def contour_entry_residue(
    num_roots: Sequence[Frac],
    den_roots: Sequence[Frac],
    xs: Sequence[Frac],
    power: int,
):
    """Exact value of  oint  prod(1 - c/w for num) /
    [prod(1 - c/w for den) * prod(1 - x_m w) * w^power] dw/(2 pi i w)
    over a circle separating {den roots} from {1/x_m}."""
    num = [c for c in num_roots]
    den = [c for c in den_roots]
    # cancel identical root pairs
    for c in list(num):
        if c in den:
            num.remove(c)
            den.remove(c)
    # (1 - c/w) = (w - c)/w; zero roots fold into the power of w
    zero_num = sum(1 for c in num if c == 0)
    zero_den = sum(1 for c in den if c == 0)
    num = [c for c in num if c != 0]
    den = [c for c in den if c != 0]
    E = power + 1 + (len(num) + zero_num) - (len(den) + zero_den) - zero_num + zero_den
    # w-polynomial for the numerator product
    P = [Frac(1)]
    for c in num:
        P = _poly_mul(P, [-c, Frac(1)])
    if len(set(den)) != len(den):
        raise SingularParameterError("coinciding denominator roots")
    total = Frac(0)
    # residues at the denominator roots
    for c in den:
        val = Frac(1)
        for c2 in num:
            val = val * (c - c2)
        for c2 in den:
            if c2 != c:
                val = val / (c - c2)
        for x in xs:
            if Frac(x) * c == 1:
                raise SingularParameterError("denominator root meets an x pole")
            val = val / (1 - Frac(x) * c)
        total = total + val / c**E
    # residue at w = 0 when the pole order E is positive:
    # [w^{E-1}] P(w) / (prod(w - c) * prod(1 - x w)), with
    # prod(w - c) = prod(-c) * prod(1 - w/c)
    if E > 0:
        inv = _series_inverse_prod(den, xs, E - 1)
        coeff = Frac(0)
        for s, p in enumerate(P):
            idx = E - 1 - s
            if 0 <= idx <= E - 1:
                coeff += p * inv[idx]
        scale = Frac(1)
        for c in den:
            scale = scale * (-c)
        total = total + coeff / scale
    return total


def mp_blocking_contour(query: MultiPointQuery, contour: ContourSpec | None = None):
    """Case C multi-point via the contour determinant (row 1 carries the
    first particle's geometric-sum factor (1 - pi_1/w))."""
    case, nu, mu, ell, b = (
        query.case,
        _join(query.thresholds, query.start),
        query.start,
        query.ell,
        query.binding,
    )
    if case is not CaseId.C:
        raise ValueError("contour form implemented for case C")
    n = query.n
    xs = [b.x_of(i) for i in range(1, n + 1)]
    if contour is not None:
        _validate_radius(contour, b, ell, n)
    betas = [_beta_of(b, k) for k in range(1, ell)]
    rows = []
    for i in range(1, ell + 1):
        row = []
        for j in range(1, ell + 1):
            power = nu.part(i) - mu.part(j) - i + j
            if i == 1:
                num: list = []
                den = [b.rate(1)] + betas[: j - 1]
            else:
                num = betas[: i - 2]
                den = betas[: j - 1]
            if contour is not None and contour.mode == "quadrature":
                row.append(
                    _contour_quadrature(num, den, xs, power, contour)
                )
            else:
                row.append(contour_entry_residue(num, den, xs, power))
        rows.append(row)
    det = det_exact(rows)
    pref = Frac(1) if not isinstance(det, (float, complex)) else 1.0
    for i in range(1, ell + 1):
        pref = pref * b.rate(i) ** (nu.part(i) - mu.part(i))
        for xi in xs:
            pref = pref * (1 - b.rate(i) * xi)
    return pref * det


def _validate_radius(contour: ContourSpec, b: ParamBinding, ell: int, n: int):
    r = Frac(contour.radius)
    hi = min(
        (Frac(1) / Frac(b.x_of(i)) for i in range(1, n + 1) if b.x_of(i) != 0),
        default=None,
    )
    lo = max(
        [abs(Frac(b.rate(1)))] + [abs(Frac(_beta_of(b, k))) for k in range(1, ell)],
        default=Frac(0),
    )
    if hi is not None and not (lo < r < hi):
        raise ValueError(
            f"contour radius {r} violates pole separation ({lo}, {hi})"
        )


def _contour_quadrature(num, den, xs, power, contour: ContourSpec):
    """Trapezoidal rule on the circle; spectrally convergent, doubling the
    point count until two successive evaluations agree to 1e-12."""
    r = float(contour.radius)

    def f(w: complex) -> complex:
        val = 1.0 + 0j
        for c in num:
            val *= 1.0 - float(c) / w
        for c in den:
            val /= 1.0 - float(c) / w
        for x in xs:
            val /= 1.0 - float(x) * w
        return val / w**power

    points = contour.points
    prev = None
    while points <= 2**14:
        acc = 0j
        for s in range(points):
            w = r * cmath.exp(2j * cmath.pi * s / points)
            acc += f(w)
        val = acc / points
        if prev is not None and abs(val - prev) < 1e-12:
            return val.real
        prev = val
        points *= 2
    return prev.real


def mp_blocking(
    query: MultiPointQuery,
    contour: ContourSpec | None = None,
    trunc: int = 60,
):
    """Blocking-direction multi-point value.  Case B: exact.  Case C:
    series mode (with reported truncation bound) or the contour form.
    Returns (value, error_bound)."""
    if query.case is CaseId.B:
        return mp_blocking_series(query, trunc)
    if contour is None or contour.mode == "series":
        return mp_blocking_series(query, trunc)
    value = mp_blocking_contour(query, contour)
    return value, Frac(0) if contour.mode == "residue" else 1e-12


def mp_canonical(query: MultiPointQuery, trunc: int = 60):
    """Multi-point for the inhomogeneous blocking process; alpha == 0
    reduces exactly to case C."""
    if query.case is not CaseId.CANONICAL_C:
        raise ValueError("mp_canonical handles CanonicalC")
    return mp_blocking_series(query, trunc)


# ---------------------------------------------------------------------------
# continuous-time kernels
# ---------------------------------------------------------------------------


def continuous_kernel(
    case: CaseId,
    t,
    mu: Partition,
    lam: Partition | Sequence[int],
    ell: int,
    rates: Sequence,
    mode: str = "residue",
    quad_points: int = 256,
    dps: int = 50,
):
    """Continuous-time transition probability via the determinant of
    contour integrals.  Residue mode sums the finite residues at w = 0 and
    the nonzero poles exactly in the rates, with e^{t w} evaluated in
    extended-precision floats; quadrature mode is the cross-check.

    ``lam`` may be a general integer sequence: the boundary conditions
    evaluate the determinant at shifted, non-partition sequences."""
    if case not in (CaseId.A, CaseId.C):
        raise ValueError("continuous limit implemented for cases A and C")
    lam_seq = list(lam.padded(ell)) if isinstance(lam, Partition) else list(lam) + [0] * (ell - len(lam))
    with mp.workdps(dps):
        tt = mp.mpf(str(t))
        rate = lambda j: mp.mpf(str(rates[j - 1])) if j - 1 < len(rates) else mp.mpf(0)
        rows = []
        for i in range(1, ell + 1):
            row = []
            for j in range(1, ell + 1):
                power = (lam_seq[i - 1] - i) - (mu.part(j) - j)
                if case is CaseId.C:
                    # (1 - beta_k / w) factors, poles at the beta_k inside
                    num = [rate(k + 1) for k in range(1, i)]
                    den = [rate(k + 1) for k in range(1, j)]
                    form = "inv"
                else:
                    # (1 - w / pi_k) factors, only the w = 0 pole inside
                    num = [1 / rate(k) for k in range(1, j)]
                    den = [1 / rate(k) for k in range(1, i)]
                    form = "lin"
                if mode == "residue":
                    row.append(_exp_contour_residue(num, den, power, tt, form))
                else:
                    row.append(
                        _exp_contour_quadrature(num, den, power, tt, quad_points, form)
                    )
            rows.append(row)
        det = det_exact(rows)
        pref = mp.mpf(1)
        for j in range(1, ell + 1):
            pref *= mp.e ** (-rate(j) * tt)
            pref *= rate(j) ** (lam_seq[j - 1] - mu.part(j))
        return pref * det


def _exp_contour_residue(num, den, power, t, form: str):
    """Entry integral with integrand e^{tw} N(w)/D(w) / w^{power+1}.

    form="inv": N, D products of (1 - c/w); the circle encloses w = 0 and
    every nonzero root c of D.  form="lin": products of (1 - c w); the
    circle is small and encloses only w = 0."""
    num = list(num)
    den = list(den)
    for c in list(num):
        if c in den:
            num.remove(c)
            den.remove(c)
    if form == "lin":
        order = power
        if order < 0:
            return mp.mpf(0)
        # coefficient of w^order in e^{tw} prod(1 - cw: num)/prod(1 - cw: den)
        series = [t**s / mp.factorial(s) for s in range(order + 1)]
        for c in num:
            new = [mp.mpf(0)] * (order + 1)
            for s in range(order + 1):
                new[s] = series[s] - (c * series[s - 1] if s >= 1 else 0)
            series = new
        for c in den:
            new = [mp.mpf(0)] * (order + 1)
            acc = mp.mpf(0)
            for s in range(order + 1):
                acc = series[s] + acc * c
                new[s] = acc
            series = new
        return series[order]

    zero_den = sum(1 for c in den if c == 0)
    den = [c for c in den if c != 0]
    zero_num = sum(1 for c in num if c == 0)
    num = [c for c in num if c != 0]
    E = power + 1 + len(num) - len(den)
    total = mp.mpf(0)
    for c in den:
        val = mp.e ** (t * c)
        for c2 in num:
            val *= c - c2
        for c2 in den:
            if c2 != c:
                val /= c - c2
        total += val / c**E
    if E > 0:
        # coefficient of w^{E-1} in e^{tw} * prod(w - c: num) / prod(w - c: den)
        order = E - 1
        series = [t**s / mp.factorial(s) for s in range(order + 1)]
        for c in num:
            new = [mp.mpf(0)] * (order + 1)
            for s in range(order + 1):
                new[s] = -c * series[s] + (series[s - 1] if s >= 1 else 0)
            series = new
        for c in den:
            # divide by (w - c) = -c (1 - w/c)
            new = [mp.mpf(0)] * (order + 1)
            acc = mp.mpf(0)
            inv = 1 / c
            for s in range(order + 1):
                acc = series[s] + acc * inv
                new[s] = acc
            series = [v * (-inv) for v in new]
        total += series[order]
    return total


def _exp_contour_quadrature(num, den, power, t, points, form: str):
    if form == "inv":
        radius = max([abs(c) for c in den] + [mp.mpf(1)]) * 2
    else:
        nonzero = [abs(c) for c in den if c != 0]
        radius = (mp.mpf(1) / max(nonzero)) / 2 if nonzero else mp.mpf(1)
    prev = None
    pts = points
    while pts <= 2**14:
        acc = mp.mpc(0)
        for s in range(pts):
            w = radius * mp.e ** (2j * mp.pi * s / pts)
            val = mp.e ** (t * w)
            for c in num:
                val *= (1 - c / w) if form == "inv" else (1 - c * w)
            for c in den:
                val /= (1 - c / w) if form == "inv" else (1 - c * w)
            acc += val / w**power
        val = acc / pts
        if prev is not None and abs(val - prev) < mp.mpf(10) ** (-12):
            return val.real
        prev = val
        pts *= 2
    return prev.real


def master_equation_residual(
    case: CaseId, t, mu: Partition, lam: Partition, ell: int, rates, h=None, dps: int = 50
):
    """Central-difference residual of
    d/dt P = -sum_s pi_s P + sum_s pi_s P(lam - e_s)  (blocking) or the
    pushing analog with the same equation."""
    with mp.workdps(dps):
        hh = mp.mpf(str(h)) if h is not None else mp.mpf("1e-4")
        tt = mp.mpf(str(t))
        P = lambda tau, target: continuous_kernel(case, tau, mu, target, ell, rates, dps=dps)
        dPdt = (P(tt + hh, lam) - P(tt - hh, lam)) / (2 * hh)
        rate = lambda j: mp.mpf(str(rates[j - 1]))
        rhs = mp.mpf(0)
        for s in range(1, ell + 1):
            rhs -= rate(s) * P(tt, lam)
            down = list(lam.padded(ell))
            down[s - 1] -= 1
            if down[s - 1] >= 0 and all(
                down[i] >= down[i + 1] for i in range(ell - 1)
            ):
                rhs += rate(s) * P(tt, Partition(down))
        return abs(dPdt - rhs)


def boundary_condition_gap(
    case: CaseId, t, mu: Partition, lam: Partition, s: int, ell: int, rates, dps: int = 50
):
    """Blocking: pi_s P(lam - e_s) - pi_{s+1} P(lam) when lam_s = lam_{s+1};
    pushing: pi_s P(lam + e_{s+1}) - pi_{s+1} P(lam).  Zero in exact
    arithmetic; returned as a high-precision absolute value."""
    if lam.part(s) != lam.part(s + 1):
        raise ValueError("boundary condition needs lam_s = lam_{s+1}")
    with mp.workdps(dps):
        rate = lambda j: mp.mpf(str(rates[j - 1]))
        shifted = list(lam.padded(ell))
        if case is CaseId.C:
            shifted[s - 1] -= 1  # generally not a partition; evaluated as-is
        else:
            shifted[s] += 1
        lhs = rate(s) * continuous_kernel(case, t, mu, shifted, ell, rates, dps=dps)
        rhs = rate(s + 1) * continuous_kernel(case, t, mu, lam, ell, rates, dps=dps)
        return abs(lhs - rhs)
