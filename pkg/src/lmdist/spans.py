"""Derivative spans, shifted spans, and exact rank over a prime field.

Rows are sparse dicts column_index -> field element.  Columns enumerate the
union of supports in descending lex order, so the leftmost column is the
greatest monomial and echelon pivots coincide with leading monomials.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .algebra import DEFAULT_PRIME, PrimeField, binomial_exact
from .budget import DEFAULT_BUDGET_CELLS, check_budget
from .poly import Monomial, SparsePoly, VarTable


@dataclass
class CoeffMatrix:
    """Rows = polynomials, columns = monomials in descending lex order."""

    field: PrimeField
    columns: list[Monomial]
    rows: list[dict[int, int]]

    @classmethod
    def from_polys(cls, polys: Sequence[SparsePoly], field: PrimeField) -> "CoeffMatrix":
        support: set[Monomial] = set()
        for p in polys:
            support.update(p.terms)
        columns = sorted(support, reverse=True)
        index = {m: i for i, m in enumerate(columns)}
        rows = []
        for p in polys:
            row = {}
            for m, c in p.terms.items():
                v = field.embed(c)
                if v:
                    row[index[m]] = v
            rows.append(row)
        return cls(field, columns, rows)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.columns)


def _sorted_rows(rows: Iterable[dict[int, int]]) -> list[dict[int, int]]:
    # Canonical row order: elimination results must not depend on how the
    # rows were produced.
    return sorted(rows, key=lambda r: sorted(r.items()))


def _eliminate(rows: Iterable[dict[int, int]], field: PrimeField) -> dict[int, dict[int, int]]:
    """Forward elimination; returns pivot_col -> normalized reduced row."""
    p = field.p
    pivots: dict[int, dict[int, int]] = {}
    for row in _sorted_rows(rows):
        r = dict(row)
        while r:
            col = min(r)
            if col not in pivots:
                inv = field.inv(r[col])
                pivots[col] = {c: v * inv % p for c, v in r.items()}
                break
            piv = pivots[col]
            coeff = r[col]
            for c, v in piv.items():
                nv = (r.get(c, 0) - coeff * v) % p
                if nv:
                    r[c] = nv
                else:
                    r.pop(c, None)
    return pivots


def _back_substitute(pivots: dict[int, dict[int, int]], field: PrimeField) -> dict[int, dict[int, int]]:
    """Turn an echelon pivot set into reduced row-echelon form."""
    p = field.p
    reduced: dict[int, dict[int, int]] = {}
    for col in sorted(pivots, reverse=True):
        r = dict(pivots[col])
        for c in [c for c in r if c != col and c in reduced]:
            coeff = r.pop(c)
            for cc, v in reduced[c].items():
                nv = (r.get(cc, 0) - coeff * v) % p
                if nv:
                    r[cc] = nv
                else:
                    r.pop(cc, None)
        reduced[col] = r
    return reduced


def rank_of_rows(rows: Iterable[dict[int, int]], field: PrimeField) -> int:
    return len(_eliminate(rows, field))


def rank_ff(matrix: CoeffMatrix) -> int:
    """Exact rank over the matrix's prime field."""
    return rank_of_rows(matrix.rows, matrix.field)


@dataclass
class SpanBasis:
    """Reduced row-echelon basis of a span and its leading monomials."""

    polys: list[SparsePoly]
    lms: list[Monomial]

    @property
    def rank(self) -> int:
        return len(self.polys)


def _basis_from_matrix(matrix: CoeffMatrix, table: VarTable) -> SpanBasis:
    field = matrix.field
    reduced = _back_substitute(_eliminate(matrix.rows, field), field)
    polys, lms = [], []
    for col in sorted(reduced):
        row = reduced[col]
        terms = {matrix.columns[c]: v for c, v in row.items()}
        polys.append(SparsePoly(table, field, terms))
        lms.append(matrix.columns[col])
    return SpanBasis(polys, lms)


def derivative_monomials(f: SparsePoly, k: int) -> Iterator[Monomial]:
    """Degree-k monomials over the variables appearing in f."""
    support = sorted({v for m in f.terms for v in m.variables()})
    for combo in itertools.combinations_with_replacement(support, k):
        exps: dict[int, int] = {}
        for v in combo:
            exps[v] = exps.get(v, 0) + 1
        yield Monomial(f.table, exps.items())


def derivative_polys(f: SparsePoly, k: int) -> list[SparsePoly]:
    """All distinct nonzero order-k partial derivatives of f."""
    seen: set[frozenset] = set()
    out = []
    for dm in derivative_monomials(f, k):
        g = f.derive(dm)
        if g.is_zero():
            continue
        key = frozenset(g.terms.items())
        if key in seen:
            continue
        seen.add(key)
        out.append(g)
    return out


def _as_field(f: SparsePoly, field: PrimeField | None) -> PrimeField:
    if field is not None:
        return field
    if isinstance(f.domain, PrimeField):
        return f.domain
    return PrimeField(DEFAULT_PRIME)


def derivative_span(f: SparsePoly, k: int, field: PrimeField | None = None) -> SpanBasis:
    """Row-echelon basis of the span of all order-k derivatives of f."""
    field = _as_field(f, field)
    derivs = derivative_polys(f, k)
    if not derivs:
        return SpanBasis([], [])
    matrix = CoeffMatrix.from_polys(derivs, field)
    return _basis_from_matrix(matrix, f.table)


def shift_monomials(table: VarTable, ell: int) -> Iterator[Monomial]:
    """All monomials of degree <= ell over the full table (C(N+ell, N) many)."""
    n = len(table)
    for deg in range(ell + 1):
        for combo in itertools.combinations_with_replacement(range(n), deg):
            exps: dict[int, int] = {}
            for v in combo:
                exps[v] = exps.get(v, 0) + 1
            yield Monomial(table, exps.items())


def shifted_span_dimension(
    f: SparsePoly,
    k: int,
    ell: int,
    field: PrimeField | None = None,
    budget: int = DEFAULT_BUDGET_CELLS,
) -> int:
    """Exact dimension of span{x^i * d^j f : |i| <= ell, |j| = k}.

    Fails loudly (BudgetExceededError) if the enumeration would exceed the
    cell budget; never truncates.
    """
    field = _as_field(f, field)
    derivs = derivative_polys(f, k)
    if not derivs:
        return 0
    n_shifts = binomial_exact(len(f.table) + ell, len(f.table))
    check_budget("shifted span rows", n_shifts * len(derivs), budget)

    rows: list[dict] = []
    support: set[Monomial] = set()
    shifted: list[dict[Monomial, int]] = []
    cells = 0
    for shift in shift_monomials(f.table, ell):
        for g in derivs:
            row = {shift * m: c for m, c in g.terms.items()}
            cells += len(row)
            check_budget("shifted span cells", cells, budget)
            shifted.append(row)
            support.update(row)
    columns = sorted(support, reverse=True)
    index = {m: i for i, m in enumerate(columns)}
    for row in shifted:
        rows.append({index[m]: field.embed(c) for m, c in row.items()})
    return rank_of_rows(rows, field)


def lm_shift_count(
    lms: Iterable[Monomial],
    ell: int,
    budget: int = DEFAULT_BUDGET_CELLS,
) -> int:
    """Exact cardinality of {x^i * m : |i| <= ell, m in lms} by hashed enumeration."""
    lms = list(lms)
    if not lms:
        return 0
    table = lms[0].table
    n_shifts = binomial_exact(len(table) + ell, len(table))
    check_budget("shift enumeration", n_shifts * len(lms), budget)
    seen: set[Monomial] = set()
    for shift in shift_monomials(table, ell):
        for m in lms:
            seen.add(shift * m)
    return len(seen)
