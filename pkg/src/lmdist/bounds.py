"""Extension counting for distance-separated monomial sets and the
shift-window / top-fan-in parameter engine.

The counting side is exact big-integer arithmetic.  The parameter engine
works in the natural-log domain (the quantities span hundreds of orders of
magnitude) with an exact big-integer cross-check whenever both sides of a
comparison fit in 4096 bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .algebra import binomial_exact, ln_big
from .budget import DEFAULT_BUDGET_CELLS
from .poly import Monomial, mono_distance
from .spans import lm_shift_count

EXACT_CHECK_BITS = 4096


def extension_lower_bound(s: int, N: int, ell: int, d: int | None) -> int:
    """s*C(N+ell, N) - s^2*C(N+ell-d, N); may be <= 0 (vacuous but exact).

    d = None means no two extensions can collide (single-monomial case):
    the collision term is dropped.
    """
    if s < 0 or N < 0 or ell < 0:
        raise ValueError("s, N, ell must be nonnegative")
    total = s * binomial_exact(N + ell, N)
    if d is None or N + ell - d < 0:
        return total
    return total - s * s * binomial_exact(N + ell - d, N)


@dataclass(frozen=True)
class ExtensionCheck:
    s: int
    nvars: int
    ell: int
    distance: int | None  # None = no pairs to collide
    exact: int
    bound: int

    @property
    def ok(self) -> bool:
        return self.exact >= self.bound


def verify_extension_count(
    monomials: Sequence[Monomial],
    ell: int,
    d: int | None = None,
    budget: int = DEFAULT_BUDGET_CELLS,
) -> ExtensionCheck:
    """Exact count of degree-<=ell extensions vs. the inclusion-exclusion bound.

    If d is given, every pair must satisfy distance >= d (the violating pair
    is reported otherwise); if omitted, the minimum pairwise distance is
    used, so the precondition holds by construction.
    """
    monomials = list(monomials)
    if not monomials:
        return ExtensionCheck(0, 0, ell, None, 0, 0)
    nvars = len(monomials[0].table)
    if d is not None:
        for a in range(len(monomials)):
            for b in range(a + 1, len(monomials)):
                delta = mono_distance(monomials[a], monomials[b])
                if delta < d:
                    raise ValueError(
                        f"monomials {a} and {b} have distance {delta} < d = {d}: "
                        f"{monomials[a].to_text()} vs {monomials[b].to_text()}"
                    )
        d_used: int | None = d
    elif len(monomials) >= 2:
        d_used = min(
            mono_distance(monomials[a], monomials[b])
            for a in range(len(monomials))
            for b in range(a + 1, len(monomials))
        )
    else:
        d_used = None
    exact = lm_shift_count(monomials, ell, budget)
    bound = extension_lower_bound(len(monomials), nvars, ell, d_used)
    return ExtensionCheck(len(monomials), nvars, ell, d_used, exact, bound)


# ---------------------------------------------------------------------------
# parameter engine


@dataclass(frozen=True)
class BoundParams:
    """One grid point of the asymptotic analysis, instantiated finitely.

    nvars  N: number of variables of the target polynomial
    n       : its degree
    k       : derivative order, nominally eps * sqrt(n)
    d       : guaranteed pairwise leading-monomial distance, >= n/c
    s       : family size, nominally n^(delta * k)
    ell     : shift degree
    delta   : family-size exponent (s >= n^(delta k))
    c       : distance ratio (d >= n/c), > 1
    cprime  : product fan-in ratio (D = cprime * sqrt(n))
    eps     : derivative-order ratio (k = eps * sqrt(n)), in (0, 1)
    mu      : shift-slack ratio in (0, 1)
    pexp    : slack polynomial is N^pexp
    """

    nvars: int
    n: int
    k: int
    d: int
    s: int
    ell: int
    delta: float
    c: float
    cprime: float
    eps: float
    mu: float
    pexp: int

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise ValueError("eps must be in (0, 1)")
        if self.c <= 1:
            raise ValueError("c must be > 1")
        if not 0 < self.mu < 1:
            raise ValueError("mu must be in (0, 1)")
        if min(self.nvars, self.n, self.s) < 1 or self.k < 0 or self.d < 1 or self.ell < 0:
            raise ValueError("counts must be positive (k, ell may be 0)")


@dataclass(frozen=True)
class ShiftWindow:
    ell_min: float
    ell_max: float

    @property
    def feasible(self) -> bool:
        return self.ell_min < self.ell_max


def shift_window(params: BoundParams) -> ShiftWindow:
    """Admissible shift range: the window is nonempty iff eps < mu/(4c).

    ell_max keeps the collision slack polynomially small; ell_min keeps the
    shift-correction factor below mu times the family-size advantage.
    """
    root = math.sqrt(params.n)
    logn = math.log(params.n)
    ell_max = params.nvars * root / (4 * params.c * params.delta * params.eps * logn)
    ell_min = params.nvars * root / (params.mu * params.delta * logn)
    return ShiftWindow(ell_min=ell_min, ell_max=ell_max)


REGIME_GUARD_FACTOR = 10  # finite stand-in for the o(.) regime conditions


def regime_guard_violations(params: BoundParams, t: int) -> tuple[str, ...]:
    """Finite-ratio guards replacing the asymptotic regime conditions.

    Violations flag a grid point as out of regime; they are reported, never
    fatal.
    """
    out = []
    kt = params.k * (t - 1)
    if kt * kt * REGIME_GUARD_FACTOR > params.ell:
        out.append(f"(kt-k)^2 = {kt * kt} > ell/{REGIME_GUARD_FACTOR}")
    if params.d * params.d * REGIME_GUARD_FACTOR > params.nvars + params.ell:
        out.append(
            f"d^2 = {params.d * params.d} > (N+ell)/{REGIME_GUARD_FACTOR}"
        )
    return tuple(out)


@dataclass(frozen=True)
class TopFaninBound:
    ln_bound: float
    guards: tuple[str, ...]

    @property
    def in_regime(self) -> bool:
        return not self.guards


def top_fanin_lower_bound(params: BoundParams, t: int, D: int) -> TopFaninBound:
    """Log-domain lower bound on the top fan-in of a computing circuit:

        ln s' >= ln s + ln(1 - N^-pexp) - ln C(D+k, k) - (N/ell)(kt - k)

    with the binomial exact before taking the log.  Regime-guard violations
    ride along in the result.
    """
    if params.k > D:
        raise ValueError(f"derivative order k={params.k} exceeds fan-in D={D}")
    value = ln_big(params.s)
    if params.pexp > 0:
        slack = math.exp(-params.pexp * ln_big(params.nvars)) if params.nvars > 1 else 1.0
        if slack >= 1.0:
            raise ValueError("nvars must be >= 2 when pexp > 0")
        value += math.log1p(-slack)
    value -= ln_big(binomial_exact(D + params.k, params.k))
    correction = params.k * (t - 1)
    if correction:
        if params.ell <= 0:
            raise ValueError("ell must be positive when k(t-1) > 0")
        value -= params.nvars / params.ell * correction
    return TopFaninBound(ln_bound=value, guards=regime_guard_violations(params, t))


def padding_slack_holds(s: int, N: int, ell: int, d: int, pexp: int) -> bool:
    """Whether s * (ell/(N+ell))^d <= N^-pexp.

    Exact big-integer comparison when both sides fit in EXACT_CHECK_BITS,
    64-bit log-domain otherwise.
    """
    if min(s, N, ell, d) < 1 or pexp < 0:
        raise ValueError("need s, N, ell, d >= 1 and pexp >= 0")
    rhs_bits = d * (N + ell).bit_length()
    lhs_bits = s.bit_length() + d * ell.bit_length() + pexp * N.bit_length()
    if max(lhs_bits, rhs_bits) <= EXACT_CHECK_BITS:
        return s * ell**d * N**pexp <= (N + ell) ** d
    lhs = math.log(s) + d * math.log(ell) + pexp * math.log(N)
    return lhs <= d * math.log(N + ell)


def padding_ell_threshold(s: int, N: int, d: int, pexp: int) -> float:
    """Largest ell for which the slack inequality is guaranteed (ell > N
    still required for the derivation): N*d / (2 ln(s * N^pexp))."""
    return N * d / (2 * (ln_big(s) + pexp * math.log(N)))


# ---------------------------------------------------------------------------
# calibrated sweeps


@dataclass(frozen=True)
class BoundReport:
    preset: str
    params: BoundParams
    t: int
    D: int
    ell_window: tuple[float, float]
    feasible: bool
    extension_bound_exact: int | None
    sprime_bound_ln: float | None
    growth_ratio: float | None  # ln-bound / (sqrt(n) ln n)
    guards: tuple[str, ...]


# family-size exponent, distance ratio, fan-in ratio, derivative ratio,
# shift slack, slack-polynomial exponent
PRESETS = {
    "nw": dict(delta=1.0, c=2.0, cprime=1.0, eps=0.05, mu=0.5, pexp=2),
    "imm": dict(delta=0.25, c=4.0, cprime=0.03, eps=0.02, mu=0.5, pexp=2),
}

DEFAULT_SWEEP_GRID = (100, 1_000, 10_000, 100_000, 1_000_000)


def _nth_root_floor(x: int, r: int) -> int:
    if r == 1:
        return x
    if r == 2:
        return math.isqrt(x)
    if r == 4:
        return math.isqrt(math.isqrt(x))
    lo, hi = 0, 1 << (x.bit_length() // r + 2)
    while lo < hi - 1:
        mid = (lo + hi) // 2
        if mid**r <= x:
            lo = mid
        else:
            hi = mid
    return lo


def _family_size(n: int, k: int, delta: float) -> int:
    """floor(n^(delta*k)) exactly for the rational deltas in use."""
    for denom in (1, 2, 4, 8):
        num = delta * denom
        if num == int(num):
            return max(1, _nth_root_floor(n ** (int(num) * k), denom))
    return max(1, round(math.exp(delta * k * math.log(n))))


def calibrated_params(
    preset: str,
    n: int,
    nvars: int | None = None,
    **overrides,
) -> tuple[BoundParams, int, int]:
    """BoundParams plus (t, D) for a grid point of a named preset.

    Finite instantiation: k = max(1, floor(eps*sqrt(n))), d = ceil(n/c),
    t = floor(sqrt(n)), D = max(k, floor(cprime*sqrt(n))), ell = floor of
    the window maximum (0 when the window is empty).
    """
    if preset not in PRESETS and preset != "custom":
        raise ValueError(f"unknown preset {preset!r}")
    consts = dict(PRESETS.get(preset, PRESETS["nw"]))
    consts.update(overrides)
    if nvars is None:
        nvars = n * n if preset != "imm" else n * n * (n - 2) + 2 * n
    root = math.sqrt(n)
    k = max(1, int(consts["eps"] * root))
    d = math.ceil(n / consts["c"])
    t = math.isqrt(n)
    D = max(k, int(consts["cprime"] * root))
    s = _family_size(n, k, consts["delta"])
    probe = BoundParams(
        nvars=nvars, n=n, k=k, d=d, s=s, ell=0,
        delta=consts["delta"], c=consts["c"], cprime=consts["cprime"],
        eps=consts["eps"], mu=consts["mu"], pexp=consts["pexp"],
    )
    window = shift_window(probe)
    ell = int(window.ell_max) if window.feasible else 0
    params = BoundParams(
        nvars=nvars, n=n, k=k, d=d, s=s, ell=ell,
        delta=consts["delta"], c=consts["c"], cprime=consts["cprime"],
        eps=consts["eps"], mu=consts["mu"], pexp=consts["pexp"],
    )
    return params, t, D


def evaluate_grid_point(preset: str, n: int, **overrides) -> BoundReport:
    params, t, D = calibrated_params(preset, n, **overrides)
    window = shift_window(params)
    feasible = (
        window.feasible
        and params.eps < min(params.cprime, params.mu / (4 * params.c))
        and params.ell >= window.ell_min
    )
    extension_exact = None
    bits = params.s.bit_length() + (params.nvars + params.ell).bit_length() * min(
        params.nvars, params.ell
    )
    if bits <= EXACT_CHECK_BITS:
        extension_exact = extension_lower_bound(
            params.s, params.nvars, params.ell, params.d
        )
    if not feasible:
        return BoundReport(
            preset=preset, params=params, t=t, D=D,
            ell_window=(window.ell_min, window.ell_max), feasible=False,
            extension_bound_exact=extension_exact,
            sprime_bound_ln=None, growth_ratio=None, guards=(),
        )
    bound = top_fanin_lower_bound(params, t, D)
    ratio = bound.ln_bound / (math.sqrt(n) * math.log(n))
    return BoundReport(
        preset=preset, params=params, t=t, D=D,
        ell_window=(window.ell_min, window.ell_max), feasible=True,
        extension_bound_exact=extension_exact,
        sprime_bound_ln=bound.ln_bound, growth_ratio=ratio,
        guards=bound.guards,
    )


def sweep(preset: str, grid: Sequence[int] = DEFAULT_SWEEP_GRID, **overrides) -> list[BoundReport]:
    return [evaluate_grid_point(preset, n, **overrides) for n in sorted(grid)]


SWEEP_CSV_HEADER = (
    "preset,n,N,k,d,s,ell,delta,c,cprime,eps,mu,pexp,t,D,"
    "ell_min,ell_max,feasible,extension_bound_exact,ln_sprime_bound,"
    "growth_ratio,in_regime,guards"
)


def sweep_csv_rows(reports: Sequence[BoundReport]) -> list[str]:
    """Fixed-format CSV rows (header excluded); floats use repr for
    byte-stable round trips."""
    rows = []
    for r in reports:
        p = r.params
        rows.append(
            ",".join(
                str(x)
                for x in (
                    r.preset, p.n, p.nvars, p.k, p.d, p.s, p.ell,
                    p.delta, p.c, p.cprime, p.eps, p.mu, p.pexp, r.t, r.D,
                    repr(r.ell_window[0]), repr(r.ell_window[1]),
                    int(r.feasible),
                    "" if r.extension_bound_exact is None else r.extension_bound_exact,
                    "" if r.sprime_bound_ln is None else repr(r.sprime_bound_ln),
                    "" if r.growth_ratio is None else repr(r.growth_ratio),
                    int(not r.guards),
                    ";".join(r.guards).replace(",", " "),
                )
            )
        )
    return rows
