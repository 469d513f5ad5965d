"""Polynomial families for the distance experiments.

Builds the design polynomial over a prime field (monomials = graphs of
low-degree univariates), the iterated matrix product polynomial, the
structured restriction that freezes off-diagonal entries between chosen
matrix layers, and a small depth-4 circuit model with the binomial upper
bound on its shifted-derivative span.

Leading monomials of restricted matrix-product entries are computed by a
backward dynamic program over layers, never by expanding the product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebra import QQ, binomial_exact, is_prime, largest_prime_in
from .budget import DEFAULT_BUDGET_CELLS, check_budget
from .poly import Monomial, SparsePoly, VarTable


# ---------------------------------------------------------------------------
# variable tables


def nw_table(n: int) -> VarTable:
    """x{i}_{j} for i, j in 1..n; precedence row-major: x1_1 > x1_2 > ... > x{n}_{n}."""
    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    return VarTable((f"x{i}_{j}" for i, j in pairs), pairs)


def imm_table(n: int, d: int) -> VarTable:
    """x{t}_{i}_{j}: matrix t, entry (i, j); earlier matrices take precedence,
    row-major inside a matrix."""
    triples = [
        (t, i, j)
        for t in range(1, d + 1)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
    ]
    return VarTable((f"x{t}_{i}_{j}" for t, i, j in triples), triples)


# ---------------------------------------------------------------------------
# design polynomial


@dataclass(frozen=True)
class NwParams:
    n: int  # field size = number of rows; prime
    k: int  # univariates have degree < k

    def __post_init__(self):
        if not is_prime(self.n):
            raise ValueError(f"n = {self.n} is not prime")
        if not 1 <= self.k <= self.n:
            raise ValueError(f"k = {self.k} outside 1..{self.n}")


def univariate_coeff_vectors(p: int, k: int):
    """All (c0, ..., c_{k-1}) in GF(p)^k, lexicographic."""
    return itertools.product(range(p), repeat=k)


def eval_univariate(coeffs, z: int, p: int) -> int:
    """Value of c0 + c1*z + ... at z, in GF(p)."""
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * z + c) % p
    return acc


def _column_of(value: int) -> int:
    # Field elements {0..p-1} are identified with indices {1..p}.
    return value + 1


def _nw_monomial(params: NwParams, coeffs, table: VarTable) -> Monomial:
    n = params.n
    exps = []
    for i in range(1, n + 1):
        col = _column_of(eval_univariate(coeffs, (i - 1) % n, n))
        exps.append((table.id_of_label((i, col)), 1))
    return Monomial(table, exps)


def nw_poly(
    params: NwParams,
    domain=QQ,
    budget: int = DEFAULT_BUDGET_CELLS,
) -> SparsePoly:
    """Sum over all degree-<k univariates a of prod_i x_{i, a(i)}.

    Exactly n^k monomials of degree n, all coefficients 1: two distinct
    univariates of degree < k <= n disagree somewhere on the n points.
    """
    n, k = params.n, params.k
    check_budget("design polynomial expansion", n**k, budget)
    table = nw_table(n)
    terms = {}
    for coeffs in univariate_coeff_vectors(n, k):
        terms[_nw_monomial(params, coeffs, table)] = domain.one
    poly = SparsePoly(table, domain, terms)
    if len(poly) != n**k:
        raise AssertionError("distinct univariates produced a repeated monomial")
    return poly


def nw_prefix_derivative(
    params: NwParams, coeffs, nw: SparsePoly | None = None
) -> Monomial:
    """Derivative of the design polynomial by the k-prefix of a's monomial.

    Must be the lone monomial x_{k+1,a(k+1)} ... x_{n,a(n)} with coefficient
    one; anything else falsifies the low-intersection design property.
    """
    if len(coeffs) != params.k:
        raise ValueError(f"expected {params.k} coefficients, got {len(coeffs)}")
    if nw is None:
        nw = nw_poly(params)
    table = nw.table
    n = params.n
    prefix = Monomial(
        table,
        [
            (table.id_of_label((i, _column_of(eval_univariate(coeffs, (i - 1) % n, n)))), 1)
            for i in range(1, params.k + 1)
        ],
    )
    deriv = nw.derive(prefix)
    if len(deriv) != 1:
        raise AssertionError(
            f"prefix derivative has {len(deriv)} monomials, expected exactly 1"
        )
    mono = deriv.leading_monomial()
    if deriv.terms[mono] != nw.domain.one or mono.deg != n - params.k:
        raise AssertionError("prefix derivative is not a unit monomial of full length")
    return mono


# ---------------------------------------------------------------------------
# iterated matrix product


@dataclass(frozen=True)
class ImmParams:
    n: int  # matrix dimension
    d: int  # number of matrices

    def __post_init__(self):
        if self.n < 1 or self.d < 2:
            raise ValueError(f"need n >= 1 and d >= 2, got n={self.n} d={self.d}")


def imm_poly(
    params: ImmParams,
    domain=QQ,
    budget: int = DEFAULT_BUDGET_CELLS,
) -> SparsePoly:
    """(1,1) entry of X^(1) ... X^(d): one monomial per path, n^(d-1) total.

    The table carries all n^2 d variables; rows != 1 of the first matrix and
    columns != 1 of the last never occur in the polynomial.
    """
    n, d = params.n, params.d
    check_budget("matrix product expansion", n ** (d - 1), budget)
    table = imm_table(n, d)
    terms = {}
    for path in itertools.product(range(1, n + 1), repeat=d - 1):
        states = (1,) + path + (1,)
        exps = [
            (table.id_of_label((t, states[t - 1], states[t])), 1)
            for t in range(1, d + 1)
        ]
        terms[Monomial(table, exps)] = domain.one
    return SparsePoly(table, domain, terms)


# ---------------------------------------------------------------------------
# the structured restriction


@dataclass(frozen=True)
class RestrictionPlan:
    """Chosen matrix layers n/4k apart; off-diagonals frozen to zero strictly
    between consecutive chosen layers, except the layer just before the next
    chosen one.

    ``frozen`` lists the layers whose off-diagonal entries are zeroed;
    ``unconstrained`` are the layers neither chosen nor frozen (the formula
    leaves them untouched, which is recorded rather than second-guessed).
    """

    n: int
    k: int
    spacing: int
    chosen: tuple[int, ...]
    frozen: tuple[int, ...] = field(default=())

    @classmethod
    def build(cls, n: int, k: int) -> "RestrictionPlan":
        if k < 1:
            raise ValueError("k must be >= 1")
        if n % (4 * k) != 0:
            raise ValueError(
                f"spacing n/4k = {n}/{4 * k} is not a positive integer"
            )
        g = n // (4 * k)
        chosen = tuple((r + 1) + (r - 1) * g for r in range(1, 2 * k + 1))
        if chosen[-1] >= n:
            raise ValueError(
                f"last chosen layer {chosen[-1]} must be < n = {n}"
            )
        frozen: list[int] = []
        for r in range(2, 2 * k + 1):
            lo = r + (r - 2) * g  # exclusive
            hi = (r + 1) + (r - 1) * g - 1  # exclusive
            frozen.extend(range(lo + 1, hi))
        return cls(n=n, k=k, spacing=g, chosen=chosen, frozen=tuple(sorted(frozen)))

    def zeroed(self, q: int, i: int, j: int) -> bool:
        return i != j and q in self.frozen

    def unconstrained(self) -> tuple[int, ...]:
        touched = set(self.chosen) | set(self.frozen)
        return tuple(q for q in range(1, self.n + 1) if q not in touched)

    def zero_assignment(self, table: VarTable) -> dict[int, int]:
        """Variable-id -> 0 map implementing the frozen off-diagonals."""
        out = {}
        for q in self.frozen:
            for i in range(1, self.n + 1):
                for j in range(1, self.n + 1):
                    if i != j:
                        out[table.id_of_label((q, i, j))] = 0
        return out


def lm_of_segment(
    table: VarTable,
    n: int,
    zeroed,
    q_start: int,
    q_end: int,
    row: int,
    col: int,
) -> Monomial | None:
    """Leading monomial of entry (row, col) of X^(q_start) ... X^(q_end)
    after zeroing the variables selected by ``zeroed(q, i, j)``.

    Backward DP over layers: ``best[v]`` is the lex-greatest monomial of any
    surviving path from state v (entering layer q) to ``col`` after layer
    q_end.  Since layer-q variables outrank all later ones and, within a
    row, smaller column index means greater variable, the best transition
    from u is the smallest feasible v; tails only break nonexistence.
    Returns None when no nonzero path remains; the empty range is the
    identity matrix.
    """
    if q_start > q_end:
        return Monomial.one(table) if row == col else None
    best: dict[int, Monomial] = {col: Monomial.one(table)}
    for q in range(q_end, q_start - 1, -1):
        nxt: dict[int, Monomial] = {}
        for u in range(1, n + 1):
            for v in range(1, n + 1):
                if v in best and not zeroed(q, u, v):
                    nxt[u] = Monomial.var(table, table.id_of_label((q, u, v))) * best[v]
                    break
        best = nxt
        if not best:
            return None
    return best.get(row)


@dataclass(frozen=True)
class LmFamilyMember:
    coeffs: tuple[int, ...]  # the univariate indexing this member
    deriv_labels: tuple[tuple[int, int, int], ...]  # (layer, row, col) per chosen layer
    lm: Monomial


def imm_restricted_lm_family(n: int, k: int) -> tuple[RestrictionPlan, int, list[LmFamilyMember]]:
    """Leading monomials of the restricted product differentiated by each S_a.

    For every univariate a of degree < k over GF(p) (p = largest prime in
    [n/2, n]), S_a picks one variable per chosen layer: row r, column a(r),
    at layer chosen[r-1].  The derivative by S_a factors into per-segment
    entries of the restricted product, so its leading monomial is the
    product of the segment DP results.  Returns (plan, p, members) with
    members ordered by the coefficient vectors of a.
    """
    plan = RestrictionPlan.build(n, k)
    p = largest_prime_in((n + 1) // 2, n)
    if p is None:
        raise ValueError(f"no prime in [{(n + 1) // 2}, {n}]")
    if 2 * k > p:
        raise ValueError(f"need 2k <= p, got 2k={2 * k} > p={p}")
    table = imm_table(n, n)
    members = []
    for coeffs in univariate_coeff_vectors(p, k):
        cols = [
            _column_of(eval_univariate(coeffs, (r - 1) % p, p))
            for r in range(1, 2 * k + 1)
        ]
        labels = tuple(
            (plan.chosen[r - 1], r, cols[r - 1]) for r in range(1, 2 * k + 1)
        )
        segments = [(1, plan.chosen[0] - 1, 1, 1)]
        for r in range(1, 2 * k):
            segments.append(
                (plan.chosen[r - 1] + 1, plan.chosen[r] - 1, cols[r - 1], r + 1)
            )
        segments.append((plan.chosen[-1] + 1, n, cols[-1], 1))
        lm = Monomial.one(table)
        for q_start, q_end, row, col in segments:
            part = lm_of_segment(table, n, plan.zeroed, q_start, q_end, row, col)
            if part is None:
                raise AssertionError(
                    f"derivative by S_a vanished for a = {coeffs}: segment "
                    f"{(q_start, q_end, row, col)} has no surviving path"
                )
            lm = lm * part
        members.append(LmFamilyMember(coeffs=tuple(coeffs), deriv_labels=labels, lm=lm))
    return plan, p, members


# ---------------------------------------------------------------------------
# depth-4 circuits


@dataclass(frozen=True)
class Depth4Circuit:
    """Sum of products of low-degree polynomials: sum_i prod_j Q_ij."""

    table: VarTable
    terms: tuple[tuple[SparsePoly, ...], ...]

    def __post_init__(self):
        for product in self.terms:
            for q in product:
                if q.table != self.table:
                    raise ValueError("factor uses a foreign variable table")

    @property
    def top_fanin(self) -> int:  # s'
        return len(self.terms)

    @property
    def product_fanin(self) -> int:  # D
        return max((len(t) for t in self.terms), default=0)

    @property
    def factor_degree(self) -> int:  # t
        degs = [q.degree() for t in self.terms for q in t]
        return max((d for d in degs if d >= 0), default=0)

    @property
    def nvars(self) -> int:  # N
        return len(self.table)


def depth4_expand(
    circuit: Depth4Circuit,
    domain=None,
    budget: int = DEFAULT_BUDGET_CELLS,
) -> SparsePoly:
    """Distributive expansion of all terms (oracle-sized circuits only)."""
    if domain is None:
        domain = circuit.terms[0][0].domain if circuit.terms and circuit.terms[0] else QQ
    total = SparsePoly.zero(circuit.table, domain)
    for product in circuit.terms:
        acc = SparsePoly.constant(circuit.table, 1, domain)
        for q in product:
            acc = acc * q
            check_budget("circuit expansion", len(acc), budget)
        total = total + acc
        check_budget("circuit expansion", len(total), budget)
    return total


def depth4_upper_bound(s_terms: int, D: int, k: int, t: int, N: int, ell: int) -> int:
    """s' * C(D+k, k) * C(N + ell + k(t-1), N), exactly."""
    if k > D:
        raise ValueError(f"derivative order k={k} exceeds product fan-in D={D}")
    return (
        s_terms
        * binomial_exact(D + k, k)
        * binomial_exact(N + ell + k * (t - 1), N)
    )
