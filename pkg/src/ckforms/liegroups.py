"""Classical compact groups: maximal tori, Weyl groups and invariant generators.

Torus coordinates per factor:

* ``U(n)``: ``x1..xn``, the diagonal entries of the Cartan subalgebra.
* ``SU(n)``: ``x1..x_{n-1}``; the last diagonal entry is ``-(x1+...+x_{n-1})``.
* ``SO(2m)``, ``SO(2m+1)``: ``x1..xm``, the rotation angles.
* ``Sp(n)``: ``x1..xn``.

A product group concatenates the coordinates of its factors in order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from math import factorial
from typing import Iterator

from .polyalg import Polynomial, elementary_symmetric_polys, modular_rank

FAMILIES = ("U", "SU", "SO_odd", "SO_even", "Sp")

Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class ClassicalFactor:
    family: str
    n: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if not isinstance(self.n, int) or isinstance(self.n, bool):
            raise ValueError("group parameter must be an integer")
        if self.family == "U" and self.n < 1:
            raise ValueError("U(n) needs n >= 1")
        if self.family == "SU" and self.n < 2:
            raise ValueError("SU(n) needs n >= 2")
        if self.family == "SO_even" and (self.n < 2 or self.n % 2):
            raise ValueError("SO_even needs an even n >= 2")
        if self.family == "SO_odd" and (self.n < 1 or self.n % 2 == 0):
            raise ValueError("SO_odd needs an odd n >= 1")
        if self.family == "Sp" and self.n < 1:
            raise ValueError("Sp(n) needs n >= 1")

    @classmethod
    def of(cls, family: str, n: int) -> "ClassicalFactor":
        """Build a factor, resolving ``"SO"`` to the right parity family."""
        if family == "SO":
            if not isinstance(n, int) or isinstance(n, bool):
                raise ValueError("group parameter must be an integer")
            family = "SO_even" if n % 2 == 0 else "SO_odd"
        return cls(family, n)

    @property
    def public_family(self) -> str:
        return "SO" if self.family.startswith("SO") else self.family

    @property
    def torus_rank(self) -> int:
        if self.family == "U":
            return self.n
        if self.family == "SU":
            return self.n - 1
        if self.family == "Sp":
            return self.n
        return self.n // 2

    @property
    def is_orthogonal(self) -> bool:
        return self.family in ("SO_odd", "SO_even")

    def __str__(self) -> str:
        return f"{self.public_family}({self.n})"


def U(n: int) -> ClassicalFactor:
    return ClassicalFactor("U", n)


def SU(n: int) -> ClassicalFactor:
    return ClassicalFactor("SU", n)


def SO(n: int) -> ClassicalFactor:
    return ClassicalFactor.of("SO", n)


def Sp(n: int) -> ClassicalFactor:
    return ClassicalFactor("Sp", n)


@dataclass(frozen=True)
class GroupSpec:
    factors: tuple[ClassicalFactor, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("a group needs at least one factor")
        for f in self.factors:
            if not isinstance(f, ClassicalFactor):
                raise TypeError(f"not a classical factor: {f!r}")

    @classmethod
    def of(cls, *factors: ClassicalFactor) -> "GroupSpec":
        return cls(tuple(factors))

    @property
    def torus_rank(self) -> int:
        return sum(f.torus_rank for f in self.factors)

    @property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for f in self.factors:
            out.append(acc)
            acc += f.torus_rank
        return tuple(out)

    def __mul__(self, other: "GroupSpec") -> "GroupSpec":
        return GroupSpec(self.factors + other.factors)

    def __str__(self) -> str:
        return "x".join(str(f) for f in self.factors)


@dataclass(frozen=True, eq=False)
class Generator:
    """A polynomial generator of the Weyl-invariant ring, in torus coordinates."""

    name: str
    poly_degree: int
    torus_poly: Polynomial
    factor_index: int

    @property
    def coh_degree(self) -> int:
        return 2 * self.poly_degree


def defining_weights(f: ClassicalFactor) -> list[Polynomial]:
    """Weights of the defining complex representation, as linear forms.

    ``U``/``SU`` give ``n`` weights; ``SO(n)`` gives ``±x_i`` pairs plus a zero
    weight when ``n`` is odd; ``Sp(n)`` gives ``±x_i`` pairs (dimension ``2n``).
    """
    r = f.torus_rank
    xs = [Polynomial.variable(r, i) for i in range(r)]
    if f.family == "U":
        return xs
    if f.family == "SU":
        return xs + [-sum(xs, Polynomial.zero(r))]
    out = []
    for x in xs:
        out += [x, -x]
    if f.family == "SO_odd":
        out.append(Polynomial.zero(r))
    return out


@lru_cache(maxsize=None)
def _factor_generators(f: ClassicalFactor) -> tuple[tuple[str, int, Polynomial], ...]:
    r = f.torus_rank
    if r == 0:
        return ()
    if f.family in ("U", "SU"):
        es = elementary_symmetric_polys(defining_weights(f))
        start = 1 if f.family == "U" else 2
        return tuple((f"c{i}", i, es[i]) for i in range(start, f.n + 1))
    xs = [Polynomial.variable(r, i) for i in range(r)]
    es = elementary_symmetric_polys([x * x for x in xs])
    if f.family == "Sp":
        return tuple((f"q{i}", 2 * i, es[i]) for i in range(1, r + 1))
    if f.family == "SO_odd":
        return tuple((f"p{i}", 2 * i, es[i]) for i in range(1, r + 1))
    euler = xs[0]
    for x in xs[1:]:
        euler = euler * x
    return tuple((f"p{i}", 2 * i, es[i]) for i in range(1, r)) + (("e", r, euler),)


@lru_cache(maxsize=None)
def invariant_generators(g: GroupSpec) -> tuple[Generator, ...]:
    """Chern, Pontryagin, symplectic Pontryagin and Euler generators of ``g``.

    Names carry ``@k`` (1-based factor index) when ``g`` has several factors.
    """
    rank = g.torus_rank
    tagged = len(g.factors) > 1
    out = []
    for k, (f, off) in enumerate(zip(g.factors, g.offsets), start=1):
        for name, deg, poly in _factor_generators(f):
            out.append(
                Generator(
                    name=f"{name}@{k}" if tagged else name,
                    poly_degree=deg,
                    torus_poly=poly.embed(rank, off),
                    factor_index=k,
                )
            )
    return tuple(out)


def hilbert_dimension(g: GroupSpec, d: int) -> int:
    """Coefficient of ``t^d`` in ``prod 1/(1 - t^deg)`` over the generators."""
    if d < 0:
        return 0
    counts = [1] + [0] * d
    for gen in invariant_generators(g):
        step = gen.poly_degree
        for k in range(step, d + 1):
            counts[k] += counts[k - step]
    return counts[d]


@lru_cache(maxsize=None)
def generator_monomials(g: GroupSpec, d: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors over the generators with weighted degree ``d``.

    Ordered lexicographically, larger exponents of earlier generators first.
    """
    degrees = [gen.poly_degree for gen in invariant_generators(g)]

    def rec(i: int, left: int):
        if i == len(degrees):
            if left == 0:
                yield ()
            return
        for a in range(left // degrees[i], -1, -1):
            for rest in rec(i + 1, left - a * degrees[i]):
                yield (a,) + rest

    if d < 0:
        return ()
    return tuple(rec(0, d))


def format_generator_monomial(g: GroupSpec, exps: tuple[int, ...]) -> str:
    parts = []
    for gen, a in zip(invariant_generators(g), exps):
        if a == 1:
            parts.append(gen.name)
        elif a > 1:
            parts.append(f"{gen.name}^{a}")
    return "*".join(parts) or "1"


def generators_independent(g: GroupSpec, d: int, seed: int = 0) -> bool:
    """Certify that the degree-``d`` generator monomials are linearly independent.

    Evaluates every monomial at random integer points and checks full row rank
    modulo a large prime.  A ``True`` answer is a proof; ``False`` only means
    the certificate failed (try another seed).
    """
    gens = invariant_generators(g)
    monos = generator_monomials(g, d)
    if not monos:
        return True
    rng = random.Random(seed)
    npoints = len(monos) + 4
    rank = g.torus_rank
    rows = []
    points = [[rng.randint(-10**6, 10**6) for _ in range(rank)] for _ in range(npoints)]
    values = [[gen.torus_poly.evaluate(pt) for pt in points] for gen in gens]
    for exps in monos:
        row = []
        for j in range(npoints):
            v = 1
            for gi, a in enumerate(exps):
                if a:
                    v *= values[gi][j] ** a
            row.append(v)
        rows.append(row)
    return modular_rank(rows) == len(monos)


# Weyl groups act on each factor's full coordinates by permutations (U, SU) or
# signed permutations (SO, Sp; an even number of sign changes for SO(2m)).


def _full_forms(f: ClassicalFactor) -> list[tuple[int, ...]]:
    """The factor's permuted coordinates as integer rows over its torus coordinates."""
    r = f.torus_rank
    unit = [tuple(1 if j == i else 0 for j in range(r)) for i in range(r)]
    if f.family == "SU":
        return unit + [tuple(-1 for _ in range(r))]
    return unit


def weyl_group_order(g: GroupSpec) -> int:
    total = 1
    for f in g.factors:
        m = f.torus_rank
        if f.family in ("U", "SU"):
            total *= factorial(f.n)
        elif f.family == "SO_even":
            total *= 2 ** max(m - 1, 0) * factorial(m)
        else:
            total *= 2**m * factorial(m)
    return total


def _factor_element(f: ClassicalFactor, perm, signs) -> Matrix:
    forms = _full_forms(f)
    r = f.torus_rank
    rows = []
    for i in range(r):
        s = signs[i] if signs else 1
        rows.append(tuple(s * c for c in forms[perm[i]]))
    return tuple(rows)


def _factor_elements(f: ClassicalFactor) -> Iterator[Matrix]:
    m = f.torus_rank
    if f.family in ("U", "SU"):
        for perm in permutations(range(f.n)):
            yield _factor_element(f, perm, None)
        return
    for perm in permutations(range(m)):
        for signs in product((1, -1), repeat=m):
            if f.family == "SO_even" and signs.count(-1) % 2:
                continue
            yield _factor_element(f, perm, signs)


def _random_factor_element(f: ClassicalFactor, rng: random.Random) -> Matrix:
    m = f.torus_rank
    if f.family in ("U", "SU"):
        perm = list(range(f.n))
        rng.shuffle(perm)
        return _factor_element(f, perm, None)
    perm = list(range(m))
    rng.shuffle(perm)
    signs = [rng.choice((1, -1)) for _ in range(m)]
    if f.family == "SO_even" and m and signs.count(-1) % 2:
        signs[0] = -signs[0]
    return _factor_element(f, perm, signs)


def _block_diagonal(blocks: list[Matrix], rank: int) -> Matrix:
    rows = []
    off = 0
    for b in blocks:
        width = len(b)
        for row in b:
            rows.append((0,) * off + tuple(row) + (0,) * (rank - off - width))
        off += width
    return tuple(rows)


def weyl_elements(g: GroupSpec) -> Iterator[Matrix]:
    """Every Weyl group element as an integer matrix on the torus coordinates.

    Row ``i`` expresses the image of coordinate ``i``; apply with
    :func:`~ckforms.polyalg.substitute_linear`.
    """
    rank = g.torus_rank
    for blocks in product(*(list(_factor_elements(f)) for f in g.factors)):
        yield _block_diagonal(list(blocks), rank)


def weyl_sample(g: GroupSpec, count: int, seed: int = 0) -> list[Matrix]:
    """``count`` pseudo-random Weyl group elements (reproducible from ``seed``)."""
    rng = random.Random(seed)
    rank = g.torus_rank
    return [
        _block_diagonal([_random_factor_element(f, rng) for f in g.factors], rank)
        for _ in range(count)
    ]
