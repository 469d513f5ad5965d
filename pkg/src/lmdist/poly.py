"""Monomials over an ordered variable table, lex order, multiset distance,
and sparse multivariate polynomials with exact coefficient arithmetic.

The variable table fixes a total precedence: position 0 is the greatest
variable, so lex comparison walks variable ids in ascending order and the
first differing exponent decides.  Monomials are immutable and hashable;
polynomials are maps monomial -> nonzero coefficient over a coefficient
domain (`PrimeField` or `QQ` from `algebra`).
"""

from __future__ import annotations

import functools
import re
from typing import Iterable, Iterator

from .algebra import QQ


class VarTable:
    """Ordered variable names; optional structured labels per position.

    Precedence is the listing order: ``names[0]`` is the lex-greatest
    variable.  Labels, when given, must be one hashable tag per position
    with no repeats (used for matrix-indexed variables).
    """

    __slots__ = ("names", "labels", "_ids", "_label_ids")

    def __init__(self, names: Iterable[str], labels: Iterable | None = None):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be unique")
        self._ids = {name: i for i, name in enumerate(self.names)}
        if labels is None:
            self.labels = None
            self._label_ids = None
        else:
            self.labels = tuple(labels)
            if len(self.labels) != len(self.names):
                raise ValueError("labels must be bijective with positions")
            self._label_ids = {lab: i for i, lab in enumerate(self.labels)}
            if len(self._label_ids) != len(self.labels):
                raise ValueError("labels must be distinct")

    def __len__(self) -> int:
        return len(self.names)

    def id_of(self, name: str) -> int:
        try:
            return self._ids[name]
        except KeyError:
            raise ValueError(f"unknown variable {name!r}") from None

    def name_of(self, vid: int) -> str:
        return self.names[vid]

    def label_of(self, vid: int):
        if self.labels is None:
            raise ValueError("table has no labels")
        return self.labels[vid]

    def id_of_label(self, label) -> int:
        if self._label_ids is None:
            raise ValueError("table has no labels")
        try:
            return self._label_ids[label]
        except KeyError:
            raise ValueError(f"unknown variable label {label!r}") from None

    def __eq__(self, other) -> bool:
        return isinstance(other, VarTable) and other.names == self.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        if len(self.names) > 6:
            shown = ", ".join(self.names[:3]) + f", ... ({len(self.names)} vars)"
        else:
            shown = ", ".join(self.names)
        return f"VarTable({shown})"


def simple_table(nvars: int, prefix: str = "x") -> VarTable:
    """x1 > x2 > ... > x<nvars>."""
    return VarTable(f"{prefix}{i + 1}" for i in range(nvars))


def _check_same_table(a: "VarTable", b: "VarTable") -> None:
    if a is not b and a != b:
        raise ValueError("operands use different variable tables")


@functools.total_ordering
class Monomial:
    """Sparse exponent vector: ((vid, exp), ...) ascending by vid, exps > 0."""

    __slots__ = ("table", "exps", "deg")

    def __init__(self, table: VarTable, exps: Iterable[tuple[int, int]]):
        items = tuple(sorted((v, e) for v, e in exps if e != 0))
        for v, e in items:
            if e < 0:
                raise ValueError("negative exponent")
            if not 0 <= v < len(table):
                raise ValueError(f"variable id {v} outside table")
        self.table = table
        self.exps = items
        self.deg = sum(e for _, e in items)

    @classmethod
    def one(cls, table: VarTable) -> "Monomial":
        return cls(table, ())

    @classmethod
    def var(cls, table: VarTable, vid: int, exp: int = 1) -> "Monomial":
        return cls(table, ((vid, exp),))

    def exponent(self, vid: int) -> int:
        for v, e in self.exps:
            if v == vid:
                return e
        return 0

    def variables(self) -> Iterator[int]:
        return (v for v, _ in self.exps)

    def __mul__(self, other: "Monomial") -> "Monomial":
        _check_same_table(self.table, other.table)
        merged = dict(self.exps)
        for v, e in other.exps:
            merged[v] = merged.get(v, 0) + e
        return Monomial(self.table, merged.items())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Monomial)
            and other.exps == self.exps
            and other.table == self.table
        )

    def __hash__(self) -> int:
        return hash(self.exps)

    def __lt__(self, other: "Monomial") -> bool:
        # Pure lex: the sparse representations are ascending by vid, so the
        # first position where the exponents differ decides; a variable
        # present on one side only beats absence (exp 0) on the other.
        _check_same_table(self.table, other.table)
        a, b = self.exps, other.exps
        i = j = 0
        while i < len(a) and j < len(b):
            va, ea = a[i]
            vb, eb = b[j]
            if va == vb:
                if ea != eb:
                    return ea < eb
                i += 1
                j += 1
            elif va < vb:
                return False  # self has the more significant variable
            else:
                return True
        return i == len(a) and j < len(b)

    def __repr__(self) -> str:
        return f"Monomial({self.to_text()})"

    def to_text(self) -> str:
        if not self.exps:
            return "1"
        parts = []
        for v, e in self.exps:
            name = self.table.name_of(v)
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)


def mono_distance(m1: Monomial, m2: Monomial) -> int:
    """Multiset distance min(|S1| - |S1 n S2|, |S2| - |S1 n S2|).

    S1, S2 are the variable multisets of the monomials; the shared part
    counts min-of-exponents per variable.
    """
    _check_same_table(m1.table, m2.table)
    e2 = dict(m2.exps)
    common = sum(min(e, e2.get(v, 0)) for v, e in m1.exps)
    return min(m1.deg - common, m2.deg - common)


class SparsePoly:
    """Finite map monomial -> nonzero coefficient over a coefficient domain."""

    __slots__ = ("table", "domain", "terms")

    def __init__(self, table: VarTable, domain, terms: dict | None = None):
        self.table = table
        self.domain = domain
        self.terms = {}
        if terms:
            for m, c in terms.items():
                if c != domain.zero:
                    self.terms[m] = c

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, table: VarTable, domain=QQ) -> "SparsePoly":
        return cls(table, domain)

    @classmethod
    def constant(cls, table: VarTable, value, domain=QQ) -> "SparsePoly":
        return cls(table, domain, {Monomial.one(table): domain.embed(value)})

    @classmethod
    def from_monomial(cls, m: Monomial, coeff, domain=QQ) -> "SparsePoly":
        return cls(m.table, domain, {m: domain.embed(coeff)})

    @classmethod
    def var(cls, table: VarTable, vid: int, domain=QQ) -> "SparsePoly":
        return cls(table, domain, {Monomial.var(table, vid): domain.one})

    # -- ring structure ----------------------------------------------------

    def _check_compatible(self, other: "SparsePoly") -> None:
        _check_same_table(self.table, other.table)
        if self.domain != other.domain:
            raise ValueError("operands use different coefficient domains")

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        self._check_compatible(other)
        dom = self.domain
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = dom.add(out.get(m, dom.zero), c)
            if s == dom.zero:
                out.pop(m, None)
            else:
                out[m] = s
        return SparsePoly(self.table, dom, out)

    def __neg__(self) -> "SparsePoly":
        dom = self.domain
        return SparsePoly(self.table, dom, {m: dom.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other: "SparsePoly") -> "SparsePoly":
        return self + (-other)

    def __mul__(self, other: "SparsePoly") -> "SparsePoly":
        self._check_compatible(other)
        dom = self.domain
        out: dict[Monomial, object] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                s = dom.add(out.get(m, dom.zero), dom.mul(c1, c2))
                if s == dom.zero:
                    out.pop(m, None)
                else:
                    out[m] = s
        return SparsePoly(self.table, dom, out)

    def scale(self, value) -> "SparsePoly":
        dom = self.domain
        c0 = dom.embed(value)
        return SparsePoly(self.table, dom, {m: dom.mul(c, c0) for m, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparsePoly)
            and other.table == self.table
            and other.domain == self.domain
            and other.terms == self.terms
        )

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(m.deg for m in self.terms)

    def leading_monomial(self) -> Monomial:
        """Lex-greatest monomial under the table precedence."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms)

    def leading_coefficient(self):
        return self.terms[self.leading_monomial()]

    def __len__(self) -> int:
        return len(self.terms)

    # -- calculus / substitution -------------------------------------------

    def derive(self, m: Monomial) -> "SparsePoly":
        """Iterated partial derivative, one per unit of each exponent in m."""
        _check_same_table(self.table, m.table)
        dom = self.domain
        out: dict[Monomial, object] = {}
        for mono, coeff in self.terms.items():
            exps = dict(mono.exps)
            factor = 1
            for v, k in m.exps:
                e = exps.get(v, 0)
                if e < k:
                    factor = 0
                    break
                for step in range(k):
                    factor *= e - step
                if e == k:
                    del exps[v]
                else:
                    exps[v] = e - k
            if factor == 0:
                continue
            c = dom.mul(coeff, dom.embed(factor))
            if c == dom.zero:
                continue
            key = Monomial(self.table, exps.items())
            s = dom.add(out.get(key, dom.zero), c)
            if s == dom.zero:
                out.pop(key, None)
            else:
                out[key] = s
        return SparsePoly(self.table, dom, out)

    def restrict(self, assignment: dict[int, object]) -> "SparsePoly":
        """Substitute the assigned variables; the rest stay symbolic."""
        dom = self.domain
        values = {v: dom.embed(c) for v, c in assignment.items()}
        out: dict[Monomial, object] = {}
        for mono, coeff in self.terms.items():
            c = coeff
            kept = []
            for v, e in mono.exps:
                if v in values:
                    val = values[v]
                    for _ in range(e):
                        c = dom.mul(c, val)
                    if c == dom.zero:
                        break
                else:
                    kept.append((v, e))
            if c == dom.zero:
                continue
            key = Monomial(self.table, kept)
            s = dom.add(out.get(key, dom.zero), c)
            if s == dom.zero:
                out.pop(key, None)
            else:
                out[key] = s
        return SparsePoly(self.table, dom, out)

    def evaluate(self, point: dict[int, object]):
        """Exact value at a total assignment; missing variables are an error."""
        dom = self.domain
        acc = dom.zero
        for mono, coeff in self.terms.items():
            c = coeff
            for v, e in mono.exps:
                if v not in point:
                    raise ValueError(f"no value for variable {self.table.name_of(v)}")
                val = dom.embed(point[v])
                for _ in range(e):
                    c = dom.mul(c, val)
            acc = dom.add(acc, c)
        return acc

    # -- text format ---------------------------------------------------------

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, reverse=True):
            c = self.terms[m]
            if m.deg == 0:
                parts.append(str(c))
            elif c == self.domain.one:
                parts.append(m.to_text())
            else:
                parts.append(f"{c}*{m.to_text()}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"SparsePoly({self.to_text()})"


_FACTOR_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(\d+))?$")
_COEFF_RE = re.compile(r"^[+-]?\d+$")


def parse_monomial(text: str, table: VarTable) -> Monomial:
    """One term of the text format, coefficient not allowed."""
    m, c = _parse_term(text, table, QQ, where="monomial")
    if c != 1:
        raise ValueError(f"monomial {text!r} carries a coefficient")
    return m


def _parse_term(text: str, table: VarTable, domain, where: str):
    factors = text.split("*")
    coeff = domain.one
    exps: dict[int, int] = {}
    for k, raw in enumerate(factors):
        if k == 0 and _COEFF_RE.match(raw):
            coeff = domain.embed(int(raw))
            continue
        fm = _FACTOR_RE.match(raw)
        if not fm:
            raise ValueError(f"cannot parse factor {raw!r} in {where} {text!r}")
        vid = table.id_of(fm.group(1))  # raises on unknown names
        exps[vid] = exps.get(vid, 0) + int(fm.group(2) or 1)
    return Monomial(table, exps.items()), coeff


def parse_poly(text: str, table: VarTable, domain=QQ) -> SparsePoly:
    """Text polynomial format: terms joined by `+`, factors joined by `*`.

    A term is an optional integer coefficient and `name^exp` factors, e.g.
    ``3*x1^2*x2 + x3 + -1*x4``.  Whitespace is ignored; unknown variable
    names are rejected with the offending term position.
    """
    compact = re.sub(r"\s+", "", text)
    if not compact:
        raise ValueError("empty polynomial text")
    if compact == "0":
        return SparsePoly.zero(table, domain)
    poly = SparsePoly.zero(table, domain)
    for idx, chunk in enumerate(compact.split("+")):
        if not chunk:
            raise ValueError(f"empty term at position {idx}")
        try:
            mono, coeff = _parse_term(chunk, table, domain, where="term")
        except ValueError as err:
            raise ValueError(f"term {idx}: {err}") from None
        poly = poly + SparsePoly(table, domain, {mono: coeff})
    return poly
