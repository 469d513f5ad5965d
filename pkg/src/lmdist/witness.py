"""Explicit zero points of the iterated matrix product with provably large
second-derivative rank, plus the determinant analogue at the canonical
singular diagonal point.

All arithmetic here is exact integer arithmetic.  The second-derivative
matrix of the product polynomial has a closed form per block (s < t):

    entry((s,i,j),(t,k,l)) = [X^(1)..X^(s-1)]_{1,i}
                           * [X^(s+1)..X^(t-1)]_{j,k}
                           * [X^(t+1)..X^(d)]_{l,1}

with empty products read as the identity, same-matrix blocks zero (the
polynomial is multilinear per matrix), and symmetric completion.  Ranks are
taken modulo a large prime with an exact-rational fallback.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import DEFAULT_PRIME, PrimeField
from .budget import BudgetExceededError
from .spans import rank_of_rows

Triple = tuple[int, int, int]  # (matrix t, row i, col j), all 1-based


def _var_index(n: int, t: int, i: int, j: int) -> int:
    return ((t - 1) * n + (i - 1)) * n + (j - 1)


def _labels(n: int, d: int) -> list[Triple]:
    return [
        (t, i, j)
        for t in range(1, d + 1)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
    ]


def matrices_at(n: int, d: int, values: dict[Triple, int]) -> list[list[list[int]]]:
    """The d assigned n x n integer matrices; missing entries are an error."""
    out = []
    for t in range(1, d + 1):
        try:
            out.append(
                [[values[(t, i, j)] for j in range(1, n + 1)] for i in range(1, n + 1)]
            )
        except KeyError as err:
            raise ValueError(f"point is missing variable {err.args[0]}") from None
    return out


def _row_times(vec: list[int], mat: list[list[int]]) -> list[int]:
    n = len(mat)
    return [sum(vec[i] * mat[i][j] for i in range(n)) for j in range(n)]


def _mat_mul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    n = len(a)
    return [
        [sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)]
        for i in range(n)
    ]


def product_value(n: int, d: int, values: dict[Triple, int]) -> int:
    """(1,1) entry of the assigned product, by iterated vector-matrix steps."""
    mats = matrices_at(n, d, values)
    vec = [1] + [0] * (n - 1)
    for mat in mats:
        vec = _row_times(vec, mat)
    return vec[0]


def prefix_first_row(n: int, values: dict[Triple, int], upto: int) -> list[int]:
    """Row 1 of X^(1) ... X^(upto); the empty prefix gives e_1."""
    vec = [1] + [0] * (n - 1)
    for t in range(1, upto + 1):
        mat = [[values[(t, i, j)] for j in range(1, n + 1)] for i in range(1, n + 1)]
        vec = _row_times(vec, mat)
    return vec


class HessianMatrix:
    """Sparse symmetric integer matrix with labeled rows/columns."""

    def __init__(self, labels: list, entries: dict[tuple[int, int], int]):
        self.labels = list(labels)
        self.dim = len(self.labels)
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        self.entries = {rc: v for rc, v in entries.items() if v != 0}

    @classmethod
    def for_product(cls, n: int, d: int, entries: dict[tuple[int, int], int]) -> "HessianMatrix":
        return cls(_labels(n, d), entries)

    def entry(self, r: int, c: int) -> int:
        return self.entries.get((r, c), 0)

    def entry_by_label(self, a, b) -> int:
        return self.entry(self._index[a], self._index[b])

    def row_dicts(self) -> list[dict[int, int]]:
        rows: list[dict[int, int]] = [dict() for _ in range(self.dim)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.dim for _ in range(self.dim)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def nonzero_count(self) -> int:
        return len(self.entries)

    def rank_mod(self, prime: int = DEFAULT_PRIME) -> int:
        f = PrimeField(prime)
        rows = [
            {c: v % prime for c, v in row.items() if v % prime}
            for row in self.row_dicts()
        ]
        return rank_of_rows(rows, f)

    def rank_exact(self) -> int:
        return rank_exact_rational(self.to_dense())


def rank_exact_rational(rows: list[list]) -> int:
    """Rank over the rationals by Gaussian elimination on exact fractions."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [a - factor * b for a, b in zip(m[r], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


def imm_hessian_at(n: int, d: int, values: dict[Triple, int]) -> HessianMatrix:
    """Second-derivative matrix of the product polynomial at an integer point,
    assembled from prefix/mid/suffix product tables (closed form, no symbolic
    differentiation)."""
    mats = matrices_at(n, d, values)

    # prefix[s] = row 1 of X^(1)..X^(s); suffix[t] = column 1 of X^(t)..X^(d)
    prefix: list[list[int]] = [[1] + [0] * (n - 1)]
    for t in range(d):
        prefix.append(_row_times(prefix[-1], mats[t]))
    ident = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    suffix: list[list[int]] = [None] * (d + 2)  # type: ignore[list-item]
    suffix[d + 1] = [1] + [0] * (n - 1)
    for t in range(d, 0, -1):
        suffix[t] = [
            sum(mats[t - 1][i][j] * suffix[t + 1][j] for j in range(n))
            for i in range(n)
        ]

    # mid[a][b] = X^(a)..X^(b) (1-based, inclusive); a > b is the identity
    mid: dict[tuple[int, int], list[list[int]]] = {}
    for a in range(1, d + 1):
        acc = ident
        for b in range(a, d + 1):
            acc = _mat_mul(acc, mats[b - 1]) if b > a else mats[a - 1]
            mid[(a, b)] = acc

    def mid_entry(a: int, b: int, j: int, k: int) -> int:
        if a > b:
            return 1 if j == k else 0
        return mid[(a, b)][j - 1][k - 1]

    entries: dict[tuple[int, int], int] = {}
    for s in range(1, d + 1):
        left = prefix[s - 1]
        for t in range(s + 1, d + 1):
            right = suffix[t + 1]
            for i in range(1, n + 1):
                if left[i - 1] == 0:
                    continue
                for j in range(1, n + 1):
                    for k in range(1, n + 1):
                        m = mid_entry(s + 1, t - 1, j, k)
                        if m == 0:
                            continue
                        for l in range(1, n + 1):
                            if right[l - 1] == 0:
                                continue
                            v = left[i - 1] * m * right[l - 1]
                            r = _var_index(n, s, i, j)
                            c = _var_index(n, t, k, l)
                            entries[(r, c)] = v
                            entries[(c, r)] = v
    return HessianMatrix.for_product(n, d, entries)


# ---------------------------------------------------------------------------
# witness construction


@dataclass(frozen=True)
class StepLog:
    level: int
    pivot: int | None  # least row index with a nonzero certificate entry
    s_values: tuple[int, ...]  # row 1 of the product of the first level-2 matrices


@dataclass
class WitnessPoint:
    n: int
    d: int
    values: dict[Triple, int]
    steps: list[StepLog] = field(default_factory=list)

    def to_json(self) -> str:
        payload = {
            "n": self.n,
            "d": self.d,
            "assignments": [
                {"t": t, "i": i, "j": j, "value": v}
                for (t, i, j), v in sorted(self.values.items())
            ],
            "steps": [
                {"level": s.level, "pivot": s.pivot, "s_values": list(s.s_values)}
                for s in self.steps
            ],
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "WitnessPoint":
        payload = json.loads(text)
        values = {
            (a["t"], a["i"], a["j"]): a["value"] for a in payload["assignments"]
        }
        steps = [
            StepLog(
                level=s["level"],
                pivot=s["pivot"],
                s_values=tuple(s["s_values"]),
            )
            for s in payload["steps"]
        ]
        return cls(n=payload["n"], d=payload["d"], values=values, steps=steps)


def construct_witness(n: int, d: int) -> WitnessPoint:
    """Deterministic zero of the product polynomial with large Hessian rank.

    Base (two matrices): first matrix row 1 is (0, 1, ..., 1), first matrix
    other rows zero; second matrix column 1 is e_1, rest zero.  Extension to
    one more matrix: the new last matrix gets column 1 = e_1 and zeros
    elsewhere, and in the previously-last matrix the row of the least
    nonzero certificate entry (s_2..s_n = row 1 of the product of all but
    the last previous matrix) gets ones in columns >= 2.  That keeps the
    point a zero and every row-1 entry (1, m>=2) of the growing prefix
    product nonzero.  Time polynomial in n and d.
    """
    if n < 2 or d < 2:
        raise ValueError(f"need n >= 2 and d >= 2, got n={n} d={d}")
    values: dict[Triple, int] = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            values[(1, i, j)] = 1 if i == 1 and j >= 2 else 0
            values[(2, i, j)] = 1 if i == 1 and j == 1 else 0
    s_base = tuple(prefix_first_row(n, values, 1))
    steps = [StepLog(level=2, pivot=None, s_values=s_base)]

    for level in range(3, d + 1):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                values[(level, i, j)] = 1 if i == 1 and j == 1 else 0
        s_vals = tuple(prefix_first_row(n, values, level - 2))
        pivot = next((i for i in range(2, n + 1) if s_vals[i - 1] != 0), None)
        if pivot is None:
            raise RuntimeError(
                f"certificate entries s_2..s_n all vanish at level {level}; "
                "the construction invariant is broken"
            )
        for j in range(2, n + 1):
            values[(level - 1, pivot, j)] = 1
        steps.append(StepLog(level=level, pivot=pivot, s_values=s_vals))
    return WitnessPoint(n=n, d=d, values=values, steps=steps)


@dataclass(frozen=True)
class WitnessReport:
    n: int
    d: int
    value: int
    zero_ok: bool
    prefix_ok: bool
    prefix_failures: tuple[int, ...]
    rank_target: int
    rank_mod: int
    rank_ok: bool
    prime: int
    rank_exact: int | None = None

    @property
    def passed(self) -> bool:
        rank_exact_ok = self.rank_exact is None or self.rank_exact >= self.rank_target
        return self.zero_ok and self.prefix_ok and self.rank_ok and rank_exact_ok

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "value": self.value,
            "zero_ok": self.zero_ok,
            "prefix_ok": self.prefix_ok,
            "prefix_failures": list(self.prefix_failures),
            "rank_target": self.rank_target,
            "rank_mod": self.rank_mod,
            "rank_exact": self.rank_exact,
            "rank_ok": self.rank_ok,
            "prime": self.prime,
            "passed": self.passed,
        }


def verify_witness(
    n: int,
    d: int,
    point: WitnessPoint | dict[Triple, int],
    prime: int = DEFAULT_PRIME,
    exact_rank: bool = False,
) -> WitnessReport:
    """Exact verification: the point is a zero, every prefix keeps a nonzero
    (1, m>=2) entry, and the Hessian rank (mod ``prime``; exact rationals on
    request) reaches d(n-1).  Failures are reported, not raised."""
    values = point.values if isinstance(point, WitnessPoint) else point
    value = product_value(n, d, values)
    prefix_failures = []
    for dp in range(2, d + 1):
        row = prefix_first_row(n, values, dp - 1)
        if all(x == 0 for x in row[1:]):
            prefix_failures.append(dp)
    hess = imm_hessian_at(n, d, values)
    rank_mod = hess.rank_mod(prime)
    rank_exact = hess.rank_exact() if exact_rank else None
    target = d * (n - 1)
    return WitnessReport(
        n=n,
        d=d,
        value=value,
        zero_ok=value == 0,
        prefix_ok=not prefix_failures,
        prefix_failures=tuple(prefix_failures),
        rank_target=target,
        rank_mod=rank_mod,
        rank_ok=rank_mod >= target,
        prime=prime,
        rank_exact=rank_exact,
    )


# ---------------------------------------------------------------------------
# determinant side


DET_EXPANSION_LIMIT = 8


def canonical_singular_diag(m: int) -> list[list[int]]:
    """diag(0, 1, ..., 1): the normal form of a singular constant term."""
    return [[1 if r == c and r > 0 else 0 for c in range(m)] for r in range(m)]


def det_hessian_at(Y: list[list[int]]) -> HessianMatrix:
    """All second partials of det at an integer matrix Y, by differentiating
    the permutation expansion.  Entries vanish when the two variables share
    a row or a column.  m is capped: the expansion has m! terms."""
    m = len(Y)
    if any(len(row) != m for row in Y):
        raise ValueError("Y must be square")
    if m > DET_EXPANSION_LIMIT:
        raise BudgetExceededError(
            "determinant permutation expansion",
            needed=m,
            budget=DET_EXPANSION_LIMIT,
        )
    entries: dict[tuple[int, int], int] = {}
    for perm in itertools.permutations(range(m)):
        sign = _parity(perm)
        vals = [Y[r][perm[r]] for r in range(m)]
        zeros = [r for r in range(m) if vals[r] == 0]
        if len(zeros) > 2:
            continue
        prod_nonzero = 1
        for r in range(m):
            if vals[r]:
                prod_nonzero *= vals[r]
        for i in range(m):
            for k in range(m):
                if i == k:
                    continue
                if any(z != i and z != k for z in zeros):
                    continue
                denom = 1
                if vals[i]:
                    denom *= vals[i]
                if vals[k]:
                    denom *= vals[k]
                term = sign * (prod_nonzero // denom)
                r = i * m + perm[i]
                c = k * m + perm[k]
                entries[(r, c)] = entries.get((r, c), 0) + term
    labels = [(i, j) for i in range(1, m + 1) for j in range(1, m + 1)]
    return HessianMatrix(labels, entries)


def _parity(perm: tuple[int, ...]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        cur = start
        while not seen[cur]:
            seen[cur] = True
            cur = perm[cur]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def singular_diag_pattern_violations(hess: HessianMatrix, m: int) -> list[tuple]:
    """Nonzero positions outside the allowed forms (11,tt), (t1,1t), (1t,t1)
    (in either order) for the determinant Hessian at diag(0,1,...,1)."""
    allowed: set[tuple[int, int, int, int]] = set()
    for t in range(2, m + 1):
        allowed.add((1, 1, t, t))
        allowed.add((t, t, 1, 1))
        allowed.add((t, 1, 1, t))
        allowed.add((1, t, t, 1))
    bad = []
    for (r, c), v in hess.entries.items():
        i, j = divmod(r, m)
        k, l = divmod(c, m)
        key = (i + 1, j + 1, k + 1, l + 1)
        if key not in allowed:
            bad.append((key, v))
    return bad


@dataclass(frozen=True)
class RankTransferCheck:
    """Rank comparison between the product-polynomial Hessian at its witness
    and the determinant Hessian at the canonical singular point of size m.

    A representation of the product polynomial as an m x m determinant of
    affine forms would force imm_rank <= det_rank; ``compatible`` False
    therefore rules that size out."""

    n: int
    d: int
    m: int
    imm_rank: int
    det_rank: int

    @property
    def compatible(self) -> bool:
        return self.imm_rank <= self.det_rank


def rank_transfer_check(
    n: int, d: int, m: int, prime: int = DEFAULT_PRIME
) -> RankTransferCheck:
    w = construct_witness(n, d)
    imm_rank = imm_hessian_at(n, d, w.values).rank_mod(prime)
    det_rank = det_hessian_at(canonical_singular_diag(m)).rank_exact()
    return RankTransferCheck(n=n, d=d, m=m, imm_rank=imm_rank, det_rank=det_rank)
