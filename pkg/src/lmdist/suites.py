"""Seeded randomized check suites.

Each suite draws every random choice from one explicitly passed generator,
so a fixed seed reproduces the instances (and any failure) byte for byte.
Results are plain dicts ready for JSON emission.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .algebra import DEFAULT_PRIME, PrimeField
from .bounds import verify_extension_count
from .budget import DEFAULT_BUDGET_CELLS
from .families import Depth4Circuit, depth4_expand, depth4_upper_bound
from .poly import Monomial, SparsePoly, simple_table
from .spans import derivative_span, lm_shift_count, shifted_span_dimension


@dataclass(frozen=True)
class SuiteResult:
    name: str
    trials: int
    seed: int
    failures: int
    rows: list

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def as_dict(self) -> dict:
        return {
            "suite": self.name,
            "trials": self.trials,
            "seed": self.seed,
            "failures": self.failures,
            "ok": self.ok,
            "rows": self.rows,
        }


def random_monomial(rng: random.Random, table, max_deg: int) -> Monomial:
    deg = rng.randint(0, max_deg)
    exps: dict[int, int] = {}
    for _ in range(deg):
        v = rng.randrange(len(table))
        exps[v] = exps.get(v, 0) + 1
    return Monomial(table, exps.items())


def random_poly(
    rng: random.Random, table, max_terms: int, max_deg: int, field: PrimeField
) -> SparsePoly:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        m = random_monomial(rng, table, max_deg)
        terms[m] = field.embed(rng.randint(1, 99))
    return SparsePoly(table, field, terms)


def union_count_suite(
    trials: int,
    seed: int,
    s_max: int = 6,
    nvars_max: int = 6,
    ell_max: int = 6,
    max_deg: int = 5,
    budget: int = DEFAULT_BUDGET_CELLS,
) -> SuiteResult:
    """Exact shifted-union counts dominate the inclusion-exclusion bound.

    Monomial sets are sampled and the distance parameter is the true
    minimum pairwise distance, so the bound's precondition holds exactly.
    """
    rng = random.Random(seed)
    rows = []
    failures = 0
    for trial in range(trials):
        nvars = rng.randint(1, nvars_max)
        table = simple_table(nvars)
        s = rng.randint(1, s_max)
        monos = list({random_monomial(rng, table, max_deg) for _ in range(s)})
        ell = rng.randint(0, ell_max)
        chk = verify_extension_count(monos, ell, budget=budget)
        if not chk.ok:
            failures += 1
        rows.append(
            {
                "trial": trial,
                "nvars": nvars,
                "s": chk.s,
                "ell": ell,
                "distance": chk.distance,
                "exact": str(chk.exact),
                "bound": str(chk.bound),
                "ok": chk.ok,
                "monomials": [m.to_text() for m in monos] if not chk.ok else None,
            }
        )
    return SuiteResult("union-bound", trials, seed, failures, rows)


def span_floor_suite(
    trials: int,
    seed: int,
    nvars_max: int = 4,
    max_deg: int = 4,
    max_terms: int = 6,
    k_max: int = 2,
    ell_max: int = 3,
    prime: int = DEFAULT_PRIME,
    budget: int = DEFAULT_BUDGET_CELLS,
) -> SuiteResult:
    """Shifted span dimension dominates the shifted leading-monomial count."""
    rng = random.Random(seed)
    field = PrimeField(prime)
    rows = []
    failures = 0
    for trial in range(trials):
        nvars = rng.randint(1, nvars_max)
        table = simple_table(nvars)
        f = random_poly(rng, table, max_terms, max_deg, field)
        k = rng.randint(0, min(k_max, max(f.degree(), 0)))
        ell = rng.randint(0, ell_max)
        basis = derivative_span(f, k, field)
        lm_count = lm_shift_count(basis.lms, ell, budget) if basis.lms else 0
        dim = shifted_span_dimension(f, k, ell, field, budget)
        ok = dim >= lm_count
        if not ok:
            failures += 1
        rows.append(
            {
                "trial": trial,
                "nvars": nvars,
                "terms": len(f),
                "k": k,
                "ell": ell,
                "span_dim": dim,
                "lm_count": lm_count,
                "ok": ok,
                "poly": f.to_text() if not ok else None,
            }
        )
    return SuiteResult("span-bound", trials, seed, failures, rows)


def random_depth4_circuit(
    rng: random.Random,
    table,
    field: PrimeField,
    s_max: int = 3,
    fanin_max: int = 3,
    deg_max: int = 2,
    terms_max: int = 3,
) -> Depth4Circuit:
    products = []
    for _ in range(rng.randint(1, s_max)):
        product = tuple(
            random_poly(rng, table, terms_max, deg_max, field)
            for _ in range(rng.randint(1, fanin_max))
        )
        products.append(product)
    return Depth4Circuit(table=table, terms=tuple(products))


def circuit_ceiling_suite(
    trials: int,
    seed: int,
    nvars_max: int = 4,
    s_max: int = 3,
    fanin_max: int = 3,
    deg_max: int = 2,
    k_max: int = 2,
    ell_max: int = 3,
    prime: int = DEFAULT_PRIME,
    budget: int = DEFAULT_BUDGET_CELLS,
) -> SuiteResult:
    """The binomial formula dominates the exact shifted span dimension of a
    random expanded circuit."""
    rng = random.Random(seed)
    field = PrimeField(prime)
    rows = []
    failures = 0
    for trial in range(trials):
        nvars = rng.randint(1, nvars_max)
        table = simple_table(nvars)
        circuit = random_depth4_circuit(rng, table, field, s_max, fanin_max, deg_max)
        k = rng.randint(0, min(k_max, circuit.product_fanin))
        ell = rng.randint(0, ell_max)
        expanded = depth4_expand(circuit, field, budget)
        dim = shifted_span_dimension(expanded, k, ell, field, budget)
        bound = depth4_upper_bound(
            circuit.top_fanin,
            circuit.product_fanin,
            k,
            max(circuit.factor_degree, 1),
            circuit.nvars,
            ell,
        )
        ok = dim <= bound
        if not ok:
            failures += 1
        rows.append(
            {
                "trial": trial,
                "nvars": nvars,
                "s_terms": circuit.top_fanin,
                "fanin": circuit.product_fanin,
                "factor_deg": circuit.factor_degree,
                "k": k,
                "ell": ell,
                "span_dim": dim,
                "bound": str(bound),
                "ok": ok,
                "factors": [
                    [q.to_text() for q in product] for product in circuit.terms
                ]
                if not ok
                else None,
            }
        )
    return SuiteResult("circuit-bound", trials, seed, failures, rows)
