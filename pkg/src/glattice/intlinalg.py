"""Exact integer matrix algebra: Hermite and Smith normal forms, integer
kernels, subquotient structure and characteristic polynomials.

Everything runs on Python's arbitrary-precision integers; no floating point
is used anywhere.  Intermediate coefficient blowup is therefore a speed
concern, never a correctness one.

Conventions used across the package:

* matrices act on column vectors; lattice vectors are handled as row tuples,
  and a sublattice is presented by a matrix whose rows span it;
* Hermite form is row-style upper echelon with positive pivots and the
  entries above each pivot reduced into ``[0, pivot)``;
* invariant factors are listed smallest first, each dividing the next.

All values are immutable after construction and every function is pure, so
the module is safe to use from multiple threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Iterator, Sequence


class NotSublattice(ValueError):
    """Raised when a vector falls outside the lattice that should contain it."""


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(x, y, g)`` with ``x*a + y*b == g == gcd(a, b)`` and ``g >= 0``."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


class IntMatrix:
    """An immutable matrix of arbitrary-precision integers.

    Rows are exposed as tuples: ``A[i]`` is a row, ``A[i][j]`` an entry.
    ``A.rows`` and ``A.cols`` are the dimensions.  Empty matrices (zero rows
    and/or zero columns) are legal everywhere; construct them by passing
    ``cols=`` explicitly when there are no rows to infer the width from.
    """

    __slots__ = ("_data", "_cols")

    def __init__(self, rows: Iterable[Iterable[int]], *, cols: int | None = None):
        data = []
        for row in rows:
            entries = []
            for x in row:
                if isinstance(x, bool) or not isinstance(x, int):
                    raise TypeError(f"integer entry required, got {x!r}")
                entries.append(x)
            data.append(tuple(entries))
        if data:
            width = len(data[0])
            if any(len(r) != width for r in data):
                raise ValueError("rows have inconsistent lengths")
            if cols is not None and cols != width:
                raise ValueError(f"expected {cols} columns, got {width}")
        else:
            width = 0 if cols is None else cols
        if width < 0:
            raise ValueError("negative column count")
        self._data = tuple(data)
        self._cols = width

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def diagonal(cls, entries: Sequence[int]) -> "IntMatrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def stack(cls, blocks: Sequence["IntMatrix"]) -> "IntMatrix":
        """Vertical concatenation; all blocks must share a column count."""
        if not blocks:
            raise ValueError("nothing to stack")
        cols = blocks[0].cols
        rows: list[tuple[int, ...]] = []
        for b in blocks:
            if b.cols != cols:
                raise ValueError("column counts differ")
            rows.extend(b._data)
        return cls(rows, cols=cols)

    @classmethod
    def block_diag(cls, a: "IntMatrix", b: "IntMatrix") -> "IntMatrix":
        rows = [row + (0,) * b.cols for row in a._data]
        rows += [(0,) * a.cols + row for row in b._data]
        return cls(rows, cols=a.cols + b.cols)

    @property
    def rows(self) -> int:
        return len(self._data)

    @property
    def cols(self) -> int:
        return self._cols

    @property
    def is_square(self) -> bool:
        return len(self._data) == self._cols

    def __getitem__(self, i: int) -> tuple[int, ...]:
        return self._data[i]

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self._data)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self._data)

    def tolists(self) -> list[list[int]]:
        return [list(row) for row in self._data]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(zip(*self._data), cols=self.rows) if self._data else IntMatrix([[0] * self.rows for _ in range(self._cols)], cols=self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if not isinstance(other, IntMatrix):
            return NotImplemented
        if self._cols != other.rows:
            raise ValueError(f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        if self._cols == 0:
            return IntMatrix.zeros(self.rows, other.cols)
        bt = list(zip(*other._data))
        return IntMatrix(
            [[sum(a * b for a, b in zip(row, col)) for col in bt] for row in self._data],
            cols=other.cols,
        )

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows or self._cols != other._cols:
            raise ValueError("shape mismatch")
        return IntMatrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self._data, other._data)],
            cols=self._cols,
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows or self._cols != other._cols:
            raise ValueError("shape mismatch")
        return IntMatrix(
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self._data, other._data)],
            cols=self._cols,
        )

    def __neg__(self) -> "IntMatrix":
        return IntMatrix([[-x for x in row] for row in self._data], cols=self._cols)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, IntMatrix)
            and self._cols == other._cols
            and self._data == other._data
        )

    def __hash__(self) -> int:
        return hash((self._cols, self._data))

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolists()!r})"

    def det(self) -> int:
        """Exact determinant via fraction-free (Bareiss) elimination."""
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.tolists()
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def is_unimodular(self) -> bool:
        return self.is_square and self.det() in (1, -1)


# ---------------------------------------------------------------------------
# Hermite normal form


def _row_sub(row: list[int], other: Sequence[int], q: int, start: int = 0) -> None:
    for k in range(start, len(row)):
        row[k] -= q * other[k]


def _combine_rows(r1: list[int], r2: list[int], x: int, y: int, u: int, v: int, start: int = 0) -> None:
    # applies the 2x2 transform [[x, y], [u, v]] to the row pair
    for k in range(start, len(r1)):
        a, b = r1[k], r2[k]
        r1[k] = x * a + y * b
        r2[k] = u * a + v * b


def _hnf(rows: list[list[int]], ncols: int, u: list[list[int]] | None):
    """In-place row Hermite form; returns the pivot (row, col) list.

    ``u``, when given, starts as an identity and accumulates the unimodular
    left transform applied to ``rows``.
    """
    m = len(rows)
    pivots: list[tuple[int, int]] = []
    r = 0
    for j in range(ncols):
        if r == m:
            break
        piv = None
        for i in range(r, m):
            if rows[i][j] != 0 and (piv is None or abs(rows[i][j]) < abs(rows[piv][j])):
                piv = i
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            if u is not None:
                u[r], u[piv] = u[piv], u[r]
        for i in range(r + 1, m):
            b = rows[i][j]
            if b == 0:
                continue
            a = rows[r][j]
            if b % a == 0:
                q = b // a
                _row_sub(rows[i], rows[r], q, j)
                if u is not None:
                    _row_sub(u[i], u[r], q)
            else:
                x, y, g = xgcd(a, b)
                _combine_rows(rows[r], rows[i], x, y, -(b // g), a // g, j)
                if u is not None:
                    _combine_rows(u[r], u[i], x, y, -(b // g), a // g)
        if rows[r][j] < 0:
            rows[r] = [-x for x in rows[r]]
            if u is not None:
                u[r] = [-x for x in u[r]]
        p = rows[r][j]
        for i in range(r):
            q = rows[i][j] // p  # floor: leaves the entry in [0, p)
            if q:
                _row_sub(rows[i], rows[r], q, j)
                if u is not None:
                    _row_sub(u[i], u[r], q)
        pivots.append((r, j))
        r += 1
    return pivots


def hermite_form(a: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form ``(H, U)`` with ``U @ A == H`` and ``|det U| = 1``.

    ``H`` keeps the shape of ``A``: the nonzero rows, a basis of the row
    lattice of ``A``, come first, followed by zero rows.
    """
    rows = a.tolists()
    u = IntMatrix.identity(a.rows).tolists()
    _hnf(rows, a.cols, u)
    return IntMatrix(rows, cols=a.cols), IntMatrix(u, cols=a.rows)


def row_basis(a: IntMatrix) -> IntMatrix:
    """Canonical (Hermite) basis of the lattice spanned by the rows of ``a``."""
    rows = a.tolists()
    pivots = _hnf(rows, a.cols, None)
    return IntMatrix(rows[: len(pivots)], cols=a.cols)


def kernel_basis(a: IntMatrix) -> IntMatrix:
    """Canonical basis of the saturated lattice ``{x : A @ x^T = 0}``.

    The rows of the result are a basis; an empty matrix means the kernel is
    zero.  The kernel of an integer matrix is automatically saturated, and
    the basis is Hermite-reduced so equal kernels yield equal matrices.
    """
    t = a.transpose().tolists()
    u = IntMatrix.identity(a.cols).tolists()
    pivots = _hnf(t, a.rows, u)
    ker = u[len(pivots):]
    _hnf(ker, a.cols, None)
    return IntMatrix(ker, cols=a.cols)


def _solve_against_hnf(h: list[list[int]], pivots: list[tuple[int, int]], v: Sequence[int]) -> list[int] | None:
    """Integer coordinates of ``v`` in the Hermite basis ``h``, or None."""
    residue = list(v)
    coeffs = [0] * len(pivots)
    for idx, (r, c) in enumerate(pivots):
        p = h[r][c]
        if residue[c] % p != 0:
            return None
        q = residue[c] // p
        if q:
            coeffs[idx] = q
            _row_sub(residue, h[r], q, c)
    if any(residue):
        return None
    return coeffs


def express_in_row_basis(basis: IntMatrix, vectors: IntMatrix) -> IntMatrix:
    """Coordinates of each row of ``vectors`` in the given row basis.

    The rows of ``basis`` must be linearly independent; raises
    :class:`NotSublattice` when a vector is not an integer combination.
    """
    h = basis.tolists()
    u = IntMatrix.identity(basis.rows).tolists()
    pivots = _hnf(h, basis.cols, u)
    if len(pivots) != basis.rows:
        raise ValueError("basis rows are linearly dependent")
    out = []
    for i, v in enumerate(vectors):
        c = _solve_against_hnf(h, pivots, v)
        if c is None:
            raise NotSublattice(f"vector {i} is not in the spanned lattice")
        # coordinates were found against H = U*basis; translate back
        out.append([sum(c[k] * u[k][j] for k in range(len(c))) for j in range(basis.rows)])
    return IntMatrix(out, cols=basis.rows)


# ---------------------------------------------------------------------------
# Smith normal form and finite abelian groups


@dataclass(frozen=True)
class SmithForm:
    """``U @ A @ V == D`` with unimodular transforms and a diagonal ``D``.

    The diagonal is nonnegative and each nonzero entry divides the next;
    ``invariant_factors`` lists the nonzero diagonal entries in order.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    invariant_factors: tuple[int, ...]


def smith_form(a: IntMatrix) -> SmithForm:
    """Smith normal form over the integers.

    Pivots are chosen as the entry of minimal nonzero absolute value in the
    remaining submatrix, which keeps coefficient growth in check; the output
    does not depend on the pivot strategy.
    """
    m, n = a.rows, a.cols
    d = a.tolists()
    u = IntMatrix.identity(m).tolists()
    v = IntMatrix.identity(n).tolists()

    def col_sub(j_dst: int, j_src: int, q: int) -> None:
        for row in d:
            row[j_dst] -= q * row[j_src]
        for row in v:
            row[j_dst] -= q * row[j_src]

    def col_combine(j1: int, j2: int, x: int, y: int, p: int, q: int) -> None:
        for row in d:
            a1, a2 = row[j1], row[j2]
            row[j1] = x * a1 + y * a2
            row[j2] = p * a1 + q * a2
        for row in v:
            a1, a2 = row[j1], row[j2]
            row[j1] = x * a1 + y * a2
            row[j2] = p * a1 + q * a2

    for t in range(min(m, n)):
        while True:
            piv = None
            for i in range(t, m):
                for j in range(t, n):
                    if d[i][j] != 0 and (piv is None or abs(d[i][j]) < abs(d[piv[0]][piv[1]])):
                        piv = (i, j)
            if piv is None:
                break
            pi, pj = piv
            if pi != t:
                d[t], d[pi] = d[pi], d[t]
                u[t], u[pi] = u[pi], u[t]
            if pj != t:
                for row in d:
                    row[t], row[pj] = row[pj], row[t]
                for row in v:
                    row[t], row[pj] = row[pj], row[t]
            # alternate row and column clearing until both are clean
            while True:
                for i in range(t + 1, m):
                    b = d[i][t]
                    if b == 0:
                        continue
                    aa = d[t][t]
                    if b % aa == 0:
                        q = b // aa
                        _row_sub(d[i], d[t], q, t)
                        _row_sub(u[i], u[t], q)
                    else:
                        x, y, g = xgcd(aa, b)
                        _combine_rows(d[t], d[i], x, y, -(b // g), aa // g, t)
                        _combine_rows(u[t], u[i], x, y, -(b // g), aa // g)
                row_clean = True
                for j in range(t + 1, n):
                    b = d[t][j]
                    if b == 0:
                        continue
                    aa = d[t][t]
                    if b % aa == 0:
                        col_sub(j, t, b // aa)
                    else:
                        x, y, g = xgcd(aa, b)
                        col_combine(t, j, x, y, -(b // g), aa // g)
                        row_clean = False  # column t may have been dirtied below
                if row_clean and all(d[i][t] == 0 for i in range(t + 1, m)):
                    break
            # the pivot must divide every remaining entry
            aa = d[t][t]
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if d[i][j] % aa != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            _row_sub(d[t], d[offender], -1, t)
            _row_sub(u[t], u[offender], -1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]

    factors = tuple(d[i][i] for i in range(min(m, n)) if d[i][i] != 0)
    return SmithForm(
        U=IntMatrix(u, cols=m),
        D=IntMatrix(d, cols=n),
        V=IntMatrix(v, cols=n),
        invariant_factors=factors,
    )


@dataclass(frozen=True)
class FinAbGroup:
    """A finitely generated abelian group in invariant-factor normal form.

    ``invariant_factors`` is the canonical chain (every factor > 1, each
    dividing the next) and ``free_rank`` counts the Z summands.  Two values
    are equal exactly when these fields agree, so no isomorphism search is
    ever needed.
    """

    invariant_factors: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self) -> None:
        fs = tuple(self.invariant_factors)
        object.__setattr__(self, "invariant_factors", fs)
        if any(f <= 1 for f in fs):
            raise ValueError("invariant factors must exceed 1")
        if any(fs[i + 1] % fs[i] != 0 for i in range(len(fs) - 1)):
            raise ValueError("invariant factors must form a divisibility chain")
        if self.free_rank < 0:
            raise ValueError("negative free rank")

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors and self.free_rank == 0

    def order(self) -> int:
        """Number of elements; only defined for finite groups."""
        if self.free_rank:
            raise ValueError("infinite group has no order")
        n = 1
        for f in self.invariant_factors:
            n *= f
        return n

    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def direct_sum(self, other: "FinAbGroup") -> "FinAbGroup":
        """Canonical invariant factors of the direct sum."""
        merged = IntMatrix.diagonal(list(self.invariant_factors) + list(other.invariant_factors))
        factors = tuple(f for f in smith_form(merged).invariant_factors if f > 1)
        return FinAbGroup(factors, self.free_rank + other.free_rank)

    def __str__(self) -> str:
        if self.is_trivial:
            return "0"
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        i = 0
        fs = self.invariant_factors
        while i < len(fs):
            j = i
            while j < len(fs) and fs[j] == fs[i]:
                j += 1
            parts.append(f"(Z/{fs[i]})" + (f"^{j - i}" if j - i > 1 else ""))
            i = j
        return " x ".join(parts)


def subquotient(a_basis: IntMatrix, b_gens: IntMatrix) -> FinAbGroup:
    """Isomorphism type of ``(span of A rows) / (span of B rows)``.

    The rows of ``b_gens`` must lie in the row lattice of ``a_basis``;
    otherwise :class:`NotSublattice` is raised naming the offending
    generator.  The result does not depend on the choice of bases or
    generating sets.
    """
    if a_basis.cols != b_gens.cols:
        raise ValueError("ambient dimensions differ")
    h = a_basis.tolists()
    pivots = _hnf(h, a_basis.cols, None)
    r = len(pivots)
    coeff_rows = []
    for i, v in enumerate(b_gens):
        c = _solve_against_hnf(h, pivots, v)
        if c is None:
            raise NotSublattice(f"not a sublattice: generator {i} lies outside the lattice")
        coeff_rows.append(c)
    sf = smith_form(IntMatrix(coeff_rows, cols=r))
    factors = tuple(f for f in sf.invariant_factors if f > 1)
    return FinAbGroup(factors, free_rank=r - len(sf.invariant_factors))


# ---------------------------------------------------------------------------
# Characteristic polynomials (division-free) and small polynomial helpers
#
# Polynomials are coefficient tuples in ascending degree: p[k] is the
# coefficient of t^k.


def char_poly(a: IntMatrix) -> tuple[int, ...]:
    """Coefficients of ``det(tI - A)``, computed division-free (Berkowitz).

    The result has ``a.rows + 1`` entries, ascending degree, with leading
    coefficient 1.
    """
    if not a.is_square:
        raise ValueError("characteristic polynomial of a non-square matrix")
    n = a.rows
    if n == 0:
        return (1,)
    # vec holds the coefficients for the leading principal minors,
    # highest degree first
    vec = [1, -a[0][0]]
    for r in range(1, n):
        m = [row[:r] for row in a.tolists()[:r]]
        col = [a[i][r] for i in range(r)]
        row = list(a[r][:r])
        # Toeplitz column: 1, -a_rr, -(R C), -(R M C), ..., -(R M^{r-1} C)
        q = [1, -a[r][r]]
        w = col
        for _ in range(r):
            q.append(-sum(x * y for x, y in zip(row, w)))
            w = [sum(m[i][k] * w[k] for k in range(r)) for i in range(r)]
        new = [0] * (r + 2)
        for i in range(r + 2):
            s = 0
            for j in range(max(0, i - r - 1), min(i, r) + 1):
                s += q[i - j] * vec[j]
            new[i] = s
        vec = new
    vec.reverse()
    return tuple(vec)


def poly_mul(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    out = [0] * (len(p) + len(q) - 1)
    for i, pi in enumerate(p):
        if pi:
            for j, qj in enumerate(q):
                out[i + j] += pi * qj
    return tuple(out)


def poly_pow(p: Sequence[int], k: int) -> tuple[int, ...]:
    out: tuple[int, ...] = (1,)
    for _ in range(k):
        out = poly_mul(out, p)
    return out


def poly_eval(p: Sequence[int], t: int) -> int:
    val = 0
    for c in reversed(p):
        val = val * t + c
    return val


def poly_str(p: Sequence[int], var: str = "t") -> str:
    """Human-readable form, highest degree first."""
    terms = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if c == 0:
            continue
        if k == 0:
            body = str(abs(c))
        else:
            mag = "" if abs(c) == 1 else str(abs(c)) + "*"
            body = f"{mag}{var}" + (f"^{k}" if k > 1 else "")
        terms.append(("- " if c < 0 else "+ ") + body)
    if not terms:
        return "0"
    head = terms[0].lstrip("+ ")
    if terms[0].startswith("- "):
        head = "-" + terms[0][2:]
    return " ".join([head] + terms[1:])
