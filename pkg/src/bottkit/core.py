"""Bott matrices, divisor types, matrix file I/O and exact integer linear algebra.

Everything here is exact: Python ``int`` and :class:`fractions.Fraction`.
Indices exposed to callers are 1-based, matching the usual notation
``beta_{ij}`` for ``1 <= i < j <= r``.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

PLUS = "+"
MINUS = "-"
SIGNS = (PLUS, MINUS)


class MatrixFormatError(ValueError):
    """Malformed matrix file. ``line`` and ``column`` are 1-based (0 if unknown)."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}" + (f", column {column}" if column else "") if line else ""
        super().__init__(f"{where}: {message}" if where else message)
        self.message = message


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact or boolean coefficient {x!r}")
    return Fraction(x)


def fmt_q(q: Fraction | int) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# --------------------------------------------------------------------------
# Bott matrix
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BottMatrix:
    """Upper unitriangular integer matrix defining a Bott tower.

    ``rows[i-1]`` holds ``beta_{i,i+1}, ..., beta_{i,r}``; the last row is empty.
    """

    r: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not isinstance(self.r, int) or self.r < 1:
            raise ValueError(f"r must be a positive integer, got {self.r!r}")
        rows = tuple(tuple(int(x) for x in row) for row in self.rows)
        if len(rows) != self.r:
            raise ValueError(f"expected {self.r} rows, got {len(rows)}")
        for i, row in enumerate(rows, start=1):
            if len(row) != self.r - i:
                raise ValueError(f"row {i}: expected {self.r - i} entries, got {len(row)}")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_entries(cls, r: int, beta: Mapping[tuple[int, int], int] | Iterable = ()) -> BottMatrix:
        """Build from ``{(i, j): beta_ij}`` or an iterable of ``(i, j, beta_ij)`` triples."""
        items = beta.items() if isinstance(beta, Mapping) else (((i, j), b) for i, j, b in beta)
        rows = [[0] * (r - i) for i in range(1, r + 1)]
        for (i, j), b in items:
            if not (1 <= i < j <= r):
                raise ValueError(f"entry ({i}, {j}) is not strictly upper triangular for r={r}")
            rows[i - 1][j - i - 1] = int(b)
        return cls(r, tuple(tuple(row) for row in rows))

    @classmethod
    def from_square(cls, matrix: Sequence[Sequence[int]]) -> BottMatrix:
        """Build from a full square matrix; the diagonal must be 1 and the lower part 0."""
        r = len(matrix)
        for i in range(r):
            if len(matrix[i]) != r:
                raise ValueError("matrix is not square")
            for j in range(i + 1):
                want = 1 if i == j else 0
                if matrix[i][j] != want:
                    raise ValueError(f"entry ({i + 1}, {j + 1}) must be {want}")
        return cls(r, tuple(tuple(matrix[i][i + 1:]) for i in range(r)))

    @classmethod
    def identity(cls, r: int) -> BottMatrix:
        return cls.from_entries(r, {})

    @classmethod
    def hirzebruch(cls, n: int) -> BottMatrix:
        """The height-2 tower with ``beta_12 = -n`` (the Hirzebruch surface H_n)."""
        return cls(2, ((-n,), ()))

    @classmethod
    def random(cls, r: int, lo: int, hi: int, rng: random.Random | None = None) -> BottMatrix:
        rng = rng or random.Random()
        return cls(r, tuple(tuple(rng.randint(lo, hi) for _ in range(r - i)) for i in range(1, r + 1)))

    def beta(self, i: int, j: int) -> int:
        """Matrix entry ``(i, j)``: 1 on the diagonal, 0 below it."""
        if not (1 <= i <= self.r and 1 <= j <= self.r):
            raise IndexError(f"index ({i}, {j}) out of range for r={self.r}")
        if j > i:
            return self.rows[i - 1][j - i - 1]
        return 1 if i == j else 0

    def entries(self) -> Iterator[tuple[int, int, int]]:
        """Nonzero strictly-upper entries as ``(i, j, beta_ij)``."""
        for i, row in enumerate(self.rows, start=1):
            for off, b in enumerate(row):
                if b:
                    yield i, i + off + 1, b

    def square(self) -> list[list[int]]:
        return [[self.beta(i, j) for j in range(1, self.r + 1)] for i in range(1, self.r + 1)]

    def to_text(self) -> str:
        lines = [str(self.r)] + [" ".join(str(b) for b in row) for row in self.rows[:-1]]
        return "\n".join(lines) + "\n"

    def to_json_obj(self) -> dict:
        return {"r": self.r, "beta": [[i, j, b] for i, j, b in self.entries()]}

    def __str__(self) -> str:
        return "\n".join(" ".join(f"{x:>3}" for x in row) for row in self.square())


def parse_matrix(data: bytes | str) -> BottMatrix:
    """Parse the text matrix format, or its JSON alternative.

    Text: first line ``r``, then rows ``1..r-1`` each with ``r - i`` integers.
    Blank lines and ``#`` comments are ignored. JSON:
    ``{"r": 3, "beta": [[1, 2, -1], ...]}``.
    """
    if isinstance(data, (bytes, bytearray)):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MatrixFormatError(f"not valid UTF-8 ({exc.reason})") from None
    if data.lstrip().startswith("{"):
        return _parse_json(data)

    lines = []
    for lineno, raw in enumerate(data.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if body.strip():
            lines.append((lineno, body))
    if not lines:
        raise MatrixFormatError("empty input; expected r on the first line", 1)

    def ints(lineno: int, body: str) -> list[int]:
        out = []
        pos = 0
        for tok in body.split():
            col = body.index(tok, pos) + 1
            pos = col - 1 + len(tok)
            try:
                out.append(int(tok))
            except ValueError:
                raise MatrixFormatError(f"not an integer: {tok!r}", lineno, col) from None
        return out

    lineno, body = lines[0]
    head = ints(lineno, body)
    if len(head) != 1:
        raise MatrixFormatError(f"first line must hold r alone, got {len(head)} values", lineno)
    r = head[0]
    if r < 1:
        raise MatrixFormatError(f"r must be >= 1, got {r}", lineno, body.index(body.split()[0]) + 1)
    rows = []
    for k in range(1, r):
        if k >= len(lines):
            raise MatrixFormatError(f"row {k}: missing (expected {r - k} entries)", lines[-1][0] + 1)
        lineno, body = lines[k]
        row = ints(lineno, body)
        if len(row) != r - k:
            noun = "entry" if r - k == 1 else "entries"
            raise MatrixFormatError(f"row {k}: expected {r - k} {noun}, got {len(row)}", lineno)
        rows.append(tuple(row))
    if len(lines) > r:
        lineno, _ = lines[r]
        raise MatrixFormatError(f"unexpected extra line after {r - 1} rows", lineno)
    rows.append(())
    return BottMatrix(r, tuple(rows))


def _parse_json(text: str) -> BottMatrix:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(obj, dict) or "r" not in obj:
        raise MatrixFormatError('JSON matrix must be an object with key "r"')
    r = obj["r"]
    if not isinstance(r, int) or isinstance(r, bool) or r < 1:
        raise MatrixFormatError(f"r must be an integer >= 1, got {r!r}")
    triples = obj.get("beta", [])
    seen = set()
    for t in triples:
        if (not isinstance(t, list) or len(t) != 3
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in t)):
            raise MatrixFormatError(f"beta entries must be [i, j, value] integer triples, got {t!r}")
        if (t[0], t[1]) in seen:
            raise MatrixFormatError(f"duplicate entry ({t[0]}, {t[1]})")
        seen.add((t[0], t[1]))
    try:
        return BottMatrix.from_entries(r, triples)
    except ValueError as exc:
        raise MatrixFormatError(str(exc)) from None


def read_matrix(path) -> BottMatrix:
    with open(path, "rb") as fh:
        return parse_matrix(fh.read())


# --------------------------------------------------------------------------
# Rays and divisors
# --------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class RayId:
    """The ray ``rho_index^sign``; ``sign`` is ``"+"`` or ``"-"``."""

    index: int
    sign: str

    def __post_init__(self):
        if self.sign not in SIGNS:
            raise ValueError(f"sign must be '+' or '-', got {self.sign!r}")
        if self.index < 1:
            raise ValueError(f"ray index must be >= 1, got {self.index}")

    def check(self, r: int) -> RayId:
        if self.index > r:
            raise ValueError(f"ray index {self.index} out of range for r={r}")
        return self

    def __str__(self) -> str:
        return f"{self.index}{self.sign}"

    @property
    def vector_name(self) -> str:
        return f"e_{self.index}^{self.sign}"

    @classmethod
    def parse(cls, text: str) -> RayId:
        text = text.strip()
        if len(text) < 2 or text[-1] not in SIGNS or not text[:-1].isdigit():
            raise ValueError(f"bad ray id {text!r}; expected e.g. '3+' or '2-'")
        return cls(int(text[:-1]), text[-1])


def all_ray_ids(r: int) -> list[RayId]:
    return [RayId(i, PLUS) for i in range(1, r + 1)] + [RayId(i, MINUS) for i in range(1, r + 1)]


@dataclass(frozen=True)
class Divisor:
    """Torus-invariant Q-divisor ``sum a_rho D_rho`` over all ``2r`` rays."""

    r: int
    plus: tuple[Fraction, ...]
    minus: tuple[Fraction, ...]

    def __post_init__(self):
        plus = tuple(as_fraction(x) for x in self.plus)
        minus = tuple(as_fraction(x) for x in self.minus)
        if len(plus) != self.r or len(minus) != self.r:
            raise ValueError(f"divisor needs {self.r} plus and {self.r} minus coefficients")
        object.__setattr__(self, "plus", plus)
        object.__setattr__(self, "minus", minus)

    @classmethod
    def from_map(cls, r: int, coeff: Mapping[RayId, object]) -> Divisor:
        plus = [Fraction(0)] * r
        minus = [Fraction(0)] * r
        for ray, a in coeff.items():
            ray.check(r)
            (plus if ray.sign == PLUS else minus)[ray.index - 1] = as_fraction(a)
        return cls(r, tuple(plus), tuple(minus))

    @classmethod
    def zero(cls, r: int) -> Divisor:
        return cls(r, (Fraction(0),) * r, (Fraction(0),) * r)

    @classmethod
    def anticanonical(cls, r: int) -> Divisor:
        """``-K = sum of all D_rho``."""
        return cls(r, (Fraction(1),) * r, (Fraction(1),) * r)

    def __getitem__(self, ray: RayId) -> Fraction:
        ray.check(self.r)
        return (self.plus if ray.sign == PLUS else self.minus)[ray.index - 1]

    def items(self) -> Iterator[tuple[RayId, Fraction]]:
        for ray in all_ray_ids(self.r):
            yield ray, self[ray]

    def _combine(self, other: Divisor, s: int) -> Divisor:
        if other.r != self.r:
            raise ValueError("divisors live on towers of different height")
        return Divisor(self.r,
                       tuple(a + s * b for a, b in zip(self.plus, other.plus)),
                       tuple(a + s * b for a, b in zip(self.minus, other.minus)))

    def __add__(self, other: Divisor) -> Divisor:
        return self._combine(other, 1)

    def __sub__(self, other: Divisor) -> Divisor:
        return self._combine(other, -1)

    def __neg__(self) -> Divisor:
        return self.scale(-1)

    def scale(self, q) -> Divisor:
        q = as_fraction(q)
        return Divisor(self.r, tuple(q * a for a in self.plus), tuple(q * a for a in self.minus))

    def __str__(self) -> str:
        terms = [f"{fmt_q(a)}*D_{ray}" for ray, a in self.items() if a]
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class PlusDivisor:
    """Divisor class written in the basis ``D_{rho_1^+}, ..., D_{rho_r^+}``."""

    g: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "g", tuple(as_fraction(x) for x in self.g))

    @property
    def r(self) -> int:
        return len(self.g)

    def as_divisor(self) -> Divisor:
        return Divisor(self.r, self.g, (Fraction(0),) * self.r)

    def __add__(self, other: PlusDivisor) -> PlusDivisor:
        return PlusDivisor(tuple(a + b for a, b in zip(self.g, other.g, strict=True)))

    def scale(self, q) -> PlusDivisor:
        q = as_fraction(q)
        return PlusDivisor(tuple(q * a for a in self.g))

    def __str__(self) -> str:
        terms = [f"{fmt_q(a)}*D_{i}+" for i, a in enumerate(self.g, start=1) if a]
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class CurveClass:
    """Numerical curve class, stored as its intersection numbers with ``D_{rho_j^+}``."""

    ints: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "ints", tuple(as_fraction(x) for x in self.ints))

    @property
    def r(self) -> int:
        return len(self.ints)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.ints)

    def primitive(self) -> CurveClass:
        """Divide an integral class by the gcd of its entries."""
        if not self.is_integral():
            raise ValueError("primitive() needs an integral class")
        g = math.gcd(*(x.numerator for x in self.ints))
        if g == 0:
            return self
        return CurveClass(tuple(x / g for x in self.ints))

    def dot(self, plus_divisor: PlusDivisor) -> Fraction:
        return sum((a * b for a, b in zip(self.ints, plus_divisor.g, strict=True)), Fraction(0))

    def __str__(self) -> str:
        return "(" + ", ".join(fmt_q(x) for x in self.ints) + ")"


# --------------------------------------------------------------------------
# Exact linear algebra
# --------------------------------------------------------------------------

def solve_exact(a: Sequence[Sequence[int]], b: Sequence[int]) -> list[Fraction]:
    """Solve the square integer system ``a x = b`` exactly.

    Fraction-free (Bareiss) elimination on the augmented matrix keeps all
    intermediate values integral; division happens once per unknown at the end.
    Raises ``ValueError`` if ``a`` is singular.
    """
    n = len(a)
    m = [list(map(int, row)) + [int(bi)] for row, bi in zip(a, b, strict=True)]
    if any(len(row) != n + 1 for row in m):
        raise ValueError("solve_exact needs a square system")
    prev = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k]), None)
        if piv is None:
            raise ValueError("singular system")
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
        mk = m[k]
        for i in range(k + 1, n):
            mi = m[i]
            for j in range(k + 1, n + 1):
                mi[j] = (mi[j] * mk[k] - mi[k] * mk[j]) // prev
            mi[k] = 0
        prev = mk[k]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(m[i][n]) - sum((m[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        x[i] = s / m[i][i]
    return x


def determinant(a: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (Bareiss)."""
    n = len(a)
    m = [list(map(int, row)) for row in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if m[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1] if n else 1
