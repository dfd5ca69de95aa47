"""Exact multivariate polynomials over the rationals and graded linear algebra.

A polynomial is a sparse map from exponent tuples to non-zero rational
coefficients.  Coefficients are kept as ``int`` whenever they are integral and
as :class:`fractions.Fraction` otherwise; floats are rejected outright.

Graded pieces are handled as sparse coordinate vectors with respect to the
ordered monomial basis of one degree.  Monomials of equal degree are ordered
lexicographically with larger exponents on earlier variables first, so in two
variables the degree-2 basis is ``x1^2, x1*x2, x2^2``.
"""

from __future__ import annotations

import operator
from bisect import insort
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd
from numbers import Rational
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

Monomial = tuple[int, ...]
Coefficient = int | Fraction
SparseVector = dict[int, int | Fraction]


def _coefficient(value) -> Coefficient:
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, Rational):
        return _coefficient(Fraction(value.numerator, value.denominator))
    raise TypeError(f"coefficient must be rational, got {type(value).__name__}")


def monomial_key(m: Monomial) -> tuple:
    """Sort key realizing the global graded-lexicographic order (ascending)."""
    return (sum(m), tuple(-e for e in m))


@lru_cache(maxsize=None)
def monomials_of_degree(num_vars: int, d: int) -> tuple[Monomial, ...]:
    """All exponent vectors of total degree ``d`` in basis order."""
    if num_vars < 0 or d < 0:
        raise ValueError("num_vars and degree must be non-negative")
    if num_vars == 0:
        return ((),) if d == 0 else ()
    if num_vars == 1:
        return ((d,),)
    out = []
    for first in range(d, -1, -1):
        out.extend((first,) + rest for rest in monomials_of_degree(num_vars - 1, d - first))
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(num_vars: int, d: int) -> Mapping[Monomial, int]:
    return MappingProxyType({m: i for i, m in enumerate(monomials_of_degree(num_vars, d))})


def graded_dimension(num_vars: int, d: int) -> int:
    if num_vars == 0:
        return 1 if d == 0 else 0
    return comb(num_vars + d - 1, d)


class Polynomial:
    """Immutable sparse polynomial in ``num_vars`` variables with rational coefficients."""

    __slots__ = ("num_vars", "_terms", "_hash")

    def __init__(self, num_vars: int, terms: Mapping[Monomial, object] | None = None):
        if num_vars < 0:
            raise ValueError("num_vars must be non-negative")
        clean: dict[Monomial, Coefficient] = {}
        for mono, coeff in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != num_vars or any(e < 0 for e in mono):
                raise ValueError(f"bad exponent vector {mono} for {num_vars} variables")
            c = _coefficient(coeff)
            if c:
                clean[mono] = clean.get(mono, 0) + c
        self.num_vars = num_vars
        self._terms = {m: c for m, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, num_vars: int, terms: dict[Monomial, Coefficient]) -> "Polynomial":
        # trusted constructor: terms already clean and zero-free
        obj = cls.__new__(cls)
        obj.num_vars = num_vars
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, num_vars: int) -> "Polynomial":
        return cls._raw(num_vars, {})

    @classmethod
    def constant(cls, num_vars: int, value) -> "Polynomial":
        c = _coefficient(value)
        return cls._raw(num_vars, {(0,) * num_vars: c} if c else {})

    @classmethod
    def variable(cls, num_vars: int, index: int) -> "Polynomial":
        if not 0 <= index < num_vars:
            raise ValueError(f"variable index {index} out of range for {num_vars} variables")
        exps = [0] * num_vars
        exps[index] = 1
        return cls._raw(num_vars, {tuple(exps): 1})

    @classmethod
    def linear_form(cls, coefficients: Sequence[int]) -> "Polynomial":
        n = len(coefficients)
        terms = {}
        for i, c in enumerate(coefficients):
            if c:
                exps = [0] * n
                exps[i] = 1
                terms[tuple(exps)] = _coefficient(c)
        return cls._raw(n, terms)

    @property
    def terms(self) -> Mapping[Monomial, Coefficient]:
        return MappingProxyType(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def is_homogeneous(self, d: int | None = None) -> bool:
        """True if every term has the same degree (and it equals ``d`` when given).

        The zero polynomial counts as homogeneous of every degree.
        """
        degrees = {sum(m) for m in self._terms}
        if not degrees:
            return True
        if len(degrees) > 1:
            return False
        return d is None or degrees.pop() == d

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.num_vars != self.num_vars:
                raise ValueError(
                    f"variable count mismatch: {self.num_vars} vs {other.num_vars}"
                )
            return other
        return Polynomial.constant(self.num_vars, other)

    def __add__(self, other) -> "Polynomial":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(self.num_vars, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.num_vars, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            try:
                c = _coefficient(other)
            except TypeError:
                return NotImplemented
            if not c:
                return Polynomial.zero(self.num_vars)
            return Polynomial._raw(self.num_vars, {m: v * c for m, v in self._terms.items()})
        other = self._coerce(other)
        out: dict[Monomial, Coefficient] = {}
        add = operator.add
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = tuple(map(add, ma, mb))
                out[m] = out.get(m, 0) + ca * cb
        return Polynomial._raw(self.num_vars, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(self.num_vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.num_vars == other.num_vars and self._terms == other._terms
        try:
            return self == Polynomial.constant(self.num_vars, other)
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num_vars, frozenset(self._terms.items())))
        return self._hash

    def evaluate(self, point: Sequence) -> Coefficient:
        if len(point) != self.num_vars:
            raise ValueError("point has the wrong number of coordinates")
        total = 0
        for m, c in self._terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v = v * x**e
            total += v
        return _coefficient(total) if not isinstance(total, int) else total

    def embed(self, num_vars: int, offset: int) -> "Polynomial":
        """The same polynomial viewed in a larger variable set, shifted by ``offset``."""
        if offset < 0 or offset + self.num_vars > num_vars:
            raise ValueError("embedding does not fit")
        pre, post = (0,) * offset, (0,) * (num_vars - offset - self.num_vars)
        return Polynomial._raw(num_vars, {pre + m + post: c for m, c in self._terms.items()})

    def sorted_terms(self) -> list[tuple[Monomial, Coefficient]]:
        """Terms by decreasing degree, then in basis order."""
        return sorted(self._terms.items(), key=lambda t: (-sum(t[0]), tuple(-e for e in t[0])))

    def to_string(self, names: Sequence[str] | None = None) -> str:
        if not self._terms:
            return "0"
        names = names or [f"x{i + 1}" for i in range(self.num_vars)]
        return format_linear_combination(
            (_monomial_string(m, names), c) for m, c in self.sorted_terms()
        )

    def __repr__(self) -> str:
        return f"Polynomial({self.num_vars}, {self.to_string()})"

    __str__ = to_string


def _monomial_string(m: Monomial, names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) or "1"


def format_linear_combination(items: Iterable[tuple[str, Coefficient]]) -> str:
    """Render ``[(label, coeff), ...]`` as ``a - 2*b + 1/2*c``."""
    out = []
    for label, c in items:
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        body = label if mag == 1 and label != "1" else (str(mag) if label == "1" else f"{mag}*{label}")
        if not out:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out) or "0"


def elementary_symmetric_polys(values: Sequence[Polynomial]) -> list[Polynomial]:
    """``[e_0, e_1, ..., e_k]`` of the given polynomials, via prod(1 + t*v)."""
    if not values:
        raise ValueError("need at least one value")
    n = values[0].num_vars
    es = [Polynomial.constant(n, 1)]
    for v in values:
        nxt = [es[0]]
        for i in range(1, len(es)):
            nxt.append(es[i] + es[i - 1] * v)
        nxt.append(es[-1] * v)
        es = nxt
    return es


def elementary_symmetric(num_vars: int, i: int) -> Polynomial:
    """The elementary symmetric polynomial ``e_i(x1, ..., x_n)``."""
    if num_vars < 1:
        raise ValueError("num_vars must be positive")
    if not 1 <= i <= num_vars:
        raise ValueError(f"degree {i} outside 1..{num_vars}")
    return elementary_symmetric_polys(
        [Polynomial.variable(num_vars, k) for k in range(num_vars)]
    )[i]


def _matrix_rows(m) -> tuple[tuple[int, ...], ...]:
    rows = getattr(m, "matrix", m)
    return tuple(tuple(r) for r in rows)


def substitute_linear(p: Polynomial, m, sub_rank: int | None = None) -> Polynomial:
    """Replace ``x_i`` by ``sum_j m[i][j] * y_j``.

    ``m`` is a row-per-ambient-variable integer matrix or any object exposing one
    as ``.matrix`` (and ``.sub_rank``).  The target variable count is taken from
    ``sub_rank`` when the matrix has no rows to infer it from.
    """
    rows = _matrix_rows(m)
    if len(rows) != p.num_vars:
        raise ValueError(
            f"dimension mismatch: polynomial has {p.num_vars} variables, map has {len(rows)} rows"
        )
    if sub_rank is None:
        sub_rank = getattr(m, "sub_rank", None)
    if sub_rank is None:
        if not rows:
            raise ValueError("cannot infer target rank from an empty matrix")
        sub_rank = len(rows[0])
    if any(len(r) != sub_rank for r in rows):
        raise ValueError("ragged substitution matrix")
    images = [Polynomial.linear_form(r) if sub_rank else Polynomial.zero(0) for r in rows]
    powers: list[dict[int, Polynomial]] = [{} for _ in rows]

    def power(i: int, e: int) -> Polynomial:
        cache = powers[i]
        if e not in cache:
            cache[e] = images[i] ** e
        return cache[e]

    out: dict[Monomial, Coefficient] = {}
    one = Polynomial.constant(sub_rank, 1)
    for mono, c in p.terms.items():
        term = one
        for i, e in enumerate(mono):
            if e:
                term = term * power(i, e)
                if term.is_zero():
                    break
        for tm, tc in term.terms.items():
            out[tm] = out.get(tm, 0) + c * tc
    return Polynomial._raw(sub_rank, {k: v for k, v in out.items() if v})


@dataclass(frozen=True)
class GradedVector:
    """Sparse coordinates of a homogeneous polynomial in the degree-``degree`` basis."""

    num_vars: int
    degree: int
    entries: tuple[tuple[int, Coefficient], ...]

    @property
    def dimension(self) -> int:
        return graded_dimension(self.num_vars, self.degree)

    @property
    def coords(self) -> tuple[Coefficient, ...]:
        dense = [0] * self.dimension
        for i, c in self.entries:
            dense[i] = c
        return tuple(dense)

    def as_dict(self) -> SparseVector:
        return dict(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def to_polynomial(self) -> Polynomial:
        basis = monomials_of_degree(self.num_vars, self.degree)
        return Polynomial._raw(self.num_vars, {basis[i]: c for i, c in self.entries})


def to_graded_vector(p: Polynomial, d: int) -> GradedVector:
    if not p.is_homogeneous(d):
        raise ValueError(f"polynomial is not homogeneous of degree {d}")
    index = monomial_index(p.num_vars, d)
    return GradedVector(p.num_vars, d, tuple(sorted((index[m], c) for m, c in p.terms.items())))


def _integral(vec: Mapping[int, Coefficient]) -> dict[int, int]:
    """A primitive integer multiple of ``vec`` (positive scaling only)."""
    den = 1
    for c in vec.values():
        if isinstance(c, Fraction):
            den = den * c.denominator // gcd(den, c.denominator)
    ints = {k: int(c * den) for k, c in vec.items() if c}
    g = 0
    for c in ints.values():
        g = gcd(g, c)
    if g > 1:
        ints = {k: c // g for k, c in ints.items()}
    return ints


class Echelon:
    """Row-echelon basis of sparse rational vectors, grown one vector at a time.

    Rows are stored fraction-free as primitive integer vectors keyed by their
    pivot (smallest column).  Each row optionally carries the combination of
    inserted vectors it equals, which is what :func:`kernel_basis` reads off.
    """

    def __init__(self, track: bool = False):
        self._rows: dict[int, dict[int, int]] = {}
        self._combos: dict[int, dict[int, int]] = {}
        self._pivots: list[int] = []
        self._track = track

    @property
    def rank(self) -> int:
        return len(self._rows)

    def _reduce(self, vec: dict[int, int], combo: dict[int, int] | None):
        if not vec:
            return vec, combo
        lo = min(vec)
        for p in self._pivots:
            if p < lo:
                continue
            c = vec.get(p)
            if not c:
                continue
            row = self._rows[p]
            a = row[p]
            g = gcd(a, c)
            sa, sc = a // g, c // g
            if sa != 1:
                vec = {k: v * sa for k, v in vec.items()}
            for k, v in row.items():
                nv = vec.get(k, 0) - sc * v
                if nv:
                    vec[k] = nv
                else:
                    vec.pop(k, None)
            if combo is not None:
                if sa != 1:
                    combo = {k: v * sa for k, v in combo.items()}
                for k, v in self._combos[p].items():
                    nv = combo.get(k, 0) - sc * v
                    if nv:
                        combo[k] = nv
                    else:
                        combo.pop(k, None)
            if not vec:
                break
        if vec:
            g = 0
            for v in vec.values():
                g = gcd(g, v)
            if combo is not None:
                for v in combo.values():
                    g = gcd(g, v)
            if g > 1:
                vec = {k: v // g for k, v in vec.items()}
                if combo is not None:
                    combo = {k: v // g for k, v in combo.items()}
        elif combo:
            g = 0
            for v in combo.values():
                g = gcd(g, v)
            if g > 1:
                combo = {k: v // g for k, v in combo.items()}
        return vec, combo

    def reduce(self, vec: Mapping[int, Coefficient]) -> dict[int, int]:
        """Residual of ``vec`` modulo the rows, up to a non-zero scalar."""
        return self._reduce(_integral(vec), None)[0]

    def contains(self, vec: Mapping[int, Coefficient]) -> bool:
        return not self.reduce(vec)

    def insert(self, vec: Mapping[int, Coefficient], label: int | None = None):
        """Add ``vec``; returns ``None`` if it was independent, else the relation.

        With tracking enabled the relation is a dict ``{label: coeff}`` over the
        labels of inserted vectors that sums (with ``vec`` included) to zero.
        The relation refers to the primitive integer rescalings of the inserted
        vectors, not to the vectors as given.
        Without tracking a dependent vector returns an empty dict.
        """
        combo = {label: 1} if self._track else None
        residual, combo = self._reduce(_integral(vec), combo)
        if not residual:
            return combo if combo is not None else {}
        p = min(residual)
        if residual[p] < 0:
            residual = {k: -v for k, v in residual.items()}
            if combo is not None:
                combo = {k: -v for k, v in combo.items()}
        self._rows[p] = residual
        if combo is not None:
            self._combos[p] = combo
        insort(self._pivots, p)
        return None


def _as_sparse(v) -> Mapping[int, Coefficient]:
    if isinstance(v, GradedVector):
        return v.as_dict()
    if isinstance(v, Mapping):
        return v
    return {i: c for i, c in enumerate(v) if c}


def _check_shapes(vectors: Sequence[GradedVector]) -> None:
    shapes = {(v.num_vars, v.degree) for v in vectors if isinstance(v, GradedVector)}
    if len(shapes) > 1:
        raise ValueError(f"vectors live in different graded pieces: {sorted(shapes)}")


def rank(vectors: Sequence) -> int:
    _check_shapes(vectors)
    ech = Echelon()
    for v in vectors:
        ech.insert(_as_sparse(v))
    return ech.rank


def in_span(target, spanning: Sequence) -> bool:
    """Exact membership of ``target`` in the rational span of ``spanning``."""
    _check_shapes([target, *spanning])
    ech = Echelon()
    for v in spanning:
        ech.insert(_as_sparse(v))
    return ech.contains(_as_sparse(target))


def kernel_basis(vectors: Sequence) -> list[tuple[Coefficient, ...]]:
    """Basis of ``{c : sum c_i * vectors[i] = 0}`` in reduced echelon form.

    Each basis vector has leading coefficient 1 at a position no other basis
    vector touches, and leading positions are as early as possible.  Vectors are
    inserted from last to first, so a vector is dependent exactly when it lies
    in the span of the ones after it.
    """
    _check_shapes(vectors)
    n = len(vectors)
    ech = Echelon(track=True)
    relations = []
    scales: dict[int, Fraction] = {}
    for i in range(n - 1, -1, -1):
        vec = _as_sparse(vectors[i])
        ints = _integral(vec)
        if ints:
            k = min(ints)
            scales[i] = Fraction(ints[k]) / Fraction(vec[k])
        else:
            scales[i] = Fraction(1)
        rel = ech.insert(ints, label=i)
        if rel is not None:
            # rel is a relation among the integral rescalings; undo them
            coeffs = {k: c * scales[k] for k, c in rel.items()}
            lead = coeffs[i]
            dense = [0] * n
            for k, c in coeffs.items():
                dense[k] = _coefficient(c / lead)
            relations.append(tuple(dense))
    relations.reverse()
    return relations


_PRIME = 2_147_483_647


def modular_rank(rows: Sequence[Sequence[int]], prime: int = _PRIME) -> int:
    """Rank of an integer matrix over GF(prime).

    A lower bound for the rational rank; equality with the row count is an
    exact certificate of linear independence over the rationals.
    """
    if not rows:
        return 0
    a = np.array([[int(x) % prime for x in r] for r in rows], dtype=np.int64)
    nrows, ncols = a.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), prime - 2, prime)
        a[r] = (a[r] * inv) % prime
        below = a[r + 1 :, c].copy()
        mask = below != 0
        if mask.any():
            # products stay below 2**62 because entries are < 2**31
            a[r + 1 :][mask] = (a[r + 1 :][mask] - np.outer(below[mask], a[r]) % prime) % prime
        r += 1
    return r
