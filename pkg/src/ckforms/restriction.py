"""Torus embeddings and the restriction maps they induce on invariant rings."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .liegroups import (
    ClassicalFactor,
    GroupSpec,
    defining_weights,
    format_generator_monomial,
    generator_monomials,
    invariant_generators,
)
from .polyalg import (
    Coefficient,
    Polynomial,
    format_linear_combination,
    kernel_basis,
    monomial_index,
    rank,
    substitute_linear,
)


@dataclass(frozen=True)
class TorusMap:
    """Integer matrix of a torus embedding: ambient ``x_i <- sum_j matrix[i][j] * y_j``."""

    matrix: tuple[tuple[int, ...], ...]
    sub_rank: int

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.matrix)
        object.__setattr__(self, "matrix", rows)
        if not isinstance(self.sub_rank, int) or self.sub_rank < 0:
            raise ValueError("sub_rank must be a non-negative integer")
        for r in rows:
            if len(r) != self.sub_rank:
                raise ValueError(
                    f"torus map row has {len(r)} entries, expected {self.sub_rank}"
                )
            for c in r:
                if not isinstance(c, int) or isinstance(c, bool):
                    raise ValueError("torus map entries must be integers")
        columns = [{i: r[j] for i, r in enumerate(rows) if r[j]} for j in range(self.sub_rank)]
        if rank(columns) != self.sub_rank:
            raise ValueError("torus map not injective")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], sub_rank: int | None = None) -> "TorusMap":
        rows = [tuple(r) for r in rows]
        if sub_rank is None:
            if not rows:
                raise ValueError("sub_rank is required for a map with no rows")
            sub_rank = len(rows[0])
        return cls(tuple(rows), sub_rank)

    @classmethod
    def identity(cls, n: int) -> "TorusMap":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @property
    def ambient_rank(self) -> int:
        return len(self.matrix)

    def compose(self, inner: "TorusMap") -> "TorusMap":
        """``self`` after ``inner``: maps ``inner``'s source into ``self``'s target."""
        if inner.ambient_rank != self.sub_rank:
            raise ValueError(
                f"cannot compose: inner lands in rank {inner.ambient_rank}, "
                f"outer starts from rank {self.sub_rank}"
            )
        rows = tuple(
            tuple(sum(r[k] * inner.matrix[k][j] for k in range(self.sub_rank)) for j in range(inner.sub_rank))
            for r in self.matrix
        )
        return TorusMap(rows, inner.sub_rank)

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.matrix]


# -- building embeddings ------------------------------------------------------
#
# An embedding of a product ``sub`` into a product ``ambient`` is described by
# ``hosts``: for each ambient factor, the list of ``(sub factor index, sign)``
# whose defining representations are stacked block-diagonally inside it.  A sign
# of -1 composes with complex conjugation on that block.


def conjugation_sign(f: ClassicalFactor) -> int:
    """Sign by which complex conjugation acts on the factor's torus coordinates."""
    return 1 if f.is_orthogonal else -1


def _contribution(sub: ClassicalFactor, host: ClassicalFactor) -> tuple[list[Polynomial], int]:
    """Coordinates ``sub`` feeds into ``host``, and the room it occupies there."""
    if host.family in ("U", "SU"):
        w = defining_weights(sub)
        return w, len(w)
    if host.is_orthogonal:
        if sub.is_orthogonal:
            r = sub.torus_rank
            return [Polynomial.variable(r, i) for i in range(r)], sub.n
        if sub.family in ("U", "SU"):
            return defining_weights(sub), 2 * sub.n
    if host.family == "Sp":
        if sub.family == "Sp":
            r = sub.torus_rank
            return [Polynomial.variable(r, i) for i in range(r)], sub.n
        if sub.family in ("U", "SU"):
            return defining_weights(sub), sub.n
    raise ValueError(f"no standard embedding of {sub} into {host}")


def embedding(
    sub: GroupSpec,
    ambient: GroupSpec,
    hosts: Sequence[Sequence[tuple[int, int]]],
) -> TorusMap:
    """Torus map of a block embedding of ``sub`` into ``ambient``.

    Unused room in a host is padded with zero coordinates, placed last.
    """
    if len(hosts) != len(ambient.factors):
        raise ValueError("need one host list per ambient factor")
    rank_sub = sub.torus_rank
    rows: list[tuple[int, ...]] = []
    for host, blocks in zip(ambient.factors, hosts):
        forms: list[Polynomial] = []
        room = 0
        for index, sign in blocks:
            if not 0 <= index < len(sub.factors):
                raise ValueError(f"sub factor index {index} out of range")
            if sign not in (1, -1):
                raise ValueError("block sign must be +1 or -1")
            f = sub.factors[index]
            local, size = _contribution(f, host)
            off = sub.offsets[index]
            forms += [form.embed(rank_sub, off) * sign for form in local]
            room += size
        capacity = host.n
        if room > capacity:
            raise ValueError(f"blocks of size {room} do not fit into {host}")
        if host.family in ("U", "SU"):
            forms += [Polynomial.zero(rank_sub)] * (host.n - len(forms))
            if host.family == "SU":
                if not sum(forms, Polynomial.zero(rank_sub)).is_zero():
                    raise ValueError(f"blocks are not trace-free, cannot land in {host}")
                forms = forms[:-1]
        else:
            forms += [Polynomial.zero(rank_sub)] * (host.torus_rank - len(forms))
        for form in forms:
            row = [0] * rank_sub
            for mono, c in form.terms.items():
                row[mono.index(1)] = int(c)
            rows.append(tuple(row))
    return TorusMap(tuple(rows), rank_sub)


def builtin_torus_map(kind: str, **params) -> TorusMap:
    """Standard torus embeddings.

    kinds:
      ``identity`` (``rank``);
      ``block`` (``sub``, ``ambient``): all of ``sub`` stacked into the single
      factor ``ambient``, e.g. ``SO(p)xSO(q)`` in ``SO(p+q)``;
      ``diagonal_conjugate`` (``n``): ``U(n)`` in ``U(n)xU(n)`` as ``A -> (A, conj A)``;
      ``diagonal`` (``factor``): ``K`` in ``KxK`` as ``A -> (A, A)``;
      ``real_form`` (``n``, ``target`` in {"U", "SU"}): ``SO(n)`` in ``U(n)``/``SU(n)``;
      ``quaternionic`` (``n``, ``target``): ``Sp(n)`` in ``U(2n)``/``SU(2n)``;
      ``embedding`` (``sub``, ``ambient``, ``hosts``): the general form.
    """
    if kind == "identity":
        return TorusMap.identity(params["rank"])
    if kind == "block":
        sub, ambient = params["sub"], params["ambient"]
        if isinstance(ambient, ClassicalFactor):
            ambient = GroupSpec.of(ambient)
        return embedding(sub, ambient, [[(i, 1) for i in range(len(sub.factors))]])
    if kind == "diagonal_conjugate":
        n = params["n"]
        f = ClassicalFactor("U", n)
        return embedding(GroupSpec.of(f), GroupSpec.of(f, f), [[(0, 1)], [(0, -1)]])
    if kind == "diagonal":
        f = params["factor"]
        return embedding(GroupSpec.of(f), GroupSpec.of(f, f), [[(0, 1)], [(0, 1)]])
    if kind == "real_form":
        n, target = params["n"], params.get("target", "SU")
        return embedding(
            GroupSpec.of(ClassicalFactor.of("SO", n)), GroupSpec.of(ClassicalFactor(target, n)), [[(0, 1)]]
        )
    if kind == "quaternionic":
        n, target = params["n"], params.get("target", "SU")
        return embedding(
            GroupSpec.of(ClassicalFactor("Sp", n)), GroupSpec.of(ClassicalFactor(target, 2 * n)), [[(0, 1)]]
        )
    if kind == "embedding":
        return embedding(params["sub"], params["ambient"], params["hosts"])
    raise ValueError(f"unknown embedding kind {kind!r}")


def restrict_generator(gen, m: TorusMap) -> Polynomial:
    return substitute_linear(gen.torus_poly, m)


class MonomialImages:
    """Images of generator monomials of ``group`` under a torus map, memoized.

    Each monomial is computed from a smaller one times a single restricted
    generator, so a whole graded piece costs one multiplication per element.
    """

    def __init__(self, group: GroupSpec, m: TorusMap):
        if m.ambient_rank != group.torus_rank:
            raise ValueError(
                f"dimension mismatch: map has {m.ambient_rank} rows, {group} has torus rank {group.torus_rank}"
            )
        self.group = group
        self.map = m
        self.generators = [restrict_generator(g, m) for g in invariant_generators(group)]
        self._memo: dict[tuple[int, ...], Polynomial] = {}

    def __call__(self, exps: tuple[int, ...]) -> Polynomial:
        hit = self._memo.get(exps)
        if hit is not None:
            return hit
        i = next((k for k, a in enumerate(exps) if a), None)
        if i is None:
            out = Polynomial.constant(self.map.sub_rank, 1)
        else:
            smaller = exps[:i] + (exps[i] - 1,) + exps[i + 1 :]
            out = self(smaller) * self.generators[i]
        self._memo[exps] = out
        return out


def _sparse_coords(p: Polynomial, d: int) -> dict[int, Coefficient]:
    index = monomial_index(p.num_vars, d)
    return {index[m]: c for m, c in p.terms.items()}


@dataclass(frozen=True)
class KernelElement:
    """A combination of degree-``degree`` generator monomials of ``group``."""

    group: GroupSpec
    degree: int
    coeffs: tuple[Coefficient, ...]
    pretty: str = field(default="", compare=False)

    def __post_init__(self):
        monos = generator_monomials(self.group, self.degree)
        if len(self.coeffs) != len(monos):
            raise ValueError(
                f"expected {len(monos)} coefficients for degree {self.degree}, got {len(self.coeffs)}"
            )
        if not self.pretty:
            object.__setattr__(self, "pretty", self._render())

    @property
    def coh_degree(self) -> int:
        return 2 * self.degree

    def terms(self) -> list[tuple[tuple[int, ...], Coefficient]]:
        monos = generator_monomials(self.group, self.degree)
        return [(m, c) for m, c in zip(monos, self.coeffs) if c]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _render(self) -> str:
        return format_linear_combination(
            (format_generator_monomial(self.group, m), c) for m, c in self.terms()
        )

    def coefficient_strings(self) -> dict[str, str]:
        """Monomial name -> exact coefficient as ``"p/q"`` (or an integer string)."""
        return {
            format_generator_monomial(self.group, m): str(Fraction(c)) for m, c in self.terms()
        }

    def torus_poly(self) -> Polynomial:
        """Expansion in the group's torus coordinates, built from scratch."""
        gens = invariant_generators(self.group)
        total = Polynomial.zero(self.group.torus_rank)
        for exps, c in self.terms():
            term = Polynomial.constant(self.group.torus_rank, c)
            for g, a in zip(gens, exps):
                if a:
                    term = term * g.torus_poly**a
            total = total + term
        return total

    @classmethod
    def parse(cls, group: GroupSpec, text: str) -> "KernelElement":
        """Read a witness written as ``c2@1 - c2@2`` or ``1/2*p1^2 + e``."""
        names = {g.name: i for i, g in enumerate(invariant_generators(group))}
        ngens = len(names)
        found: dict[tuple[int, ...], Fraction] = {}
        tokens = re.findall(r"\s*([+-]?)\s*([^+-]+)", text.strip())
        if not tokens or "".join(s + b for s, b in tokens).replace(" ", "") != text.replace(" ", ""):
            raise ValueError(f"cannot parse witness {text!r}")
        degree = None
        for sign, body in tokens:
            coeff = Fraction(-1 if sign == "-" else 1)
            exps = [0] * ngens
            for part in body.strip().split("*"):
                part = part.strip()
                if re.fullmatch(r"\d+(/\d+)?", part):
                    coeff *= Fraction(part)
                    continue
                base, _, power = part.partition("^")
                if base not in names:
                    raise ValueError(f"unknown generator {base!r} for {group}")
                exps[names[base]] += int(power) if power else 1
            exps_t = tuple(exps)
            gens = invariant_generators(group)
            d = sum(a * g.poly_degree for a, g in zip(exps_t, gens))
            if degree is None:
                degree = d
            elif d != degree:
                raise ValueError("witness is not homogeneous")
            found[exps_t] = found.get(exps_t, 0) + coeff
        monos = generator_monomials(group, degree)
        coeffs = tuple(_plain(found.get(m, 0)) for m in monos)
        return cls(group, degree, coeffs)


def _plain(c) -> Coefficient:
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def restriction_vectors(h: GroupSpec, k_torus: TorusMap, d: int, images: MonomialImages | None = None):
    """Sparse coordinates of every restricted degree-``d`` generator monomial."""
    images = images or MonomialImages(h, k_torus)
    return [_sparse_coords(images(m), d) for m in generator_monomials(h, d)]


def kernel_of_restriction(
    h: GroupSpec, k_torus: TorusMap, d: int, images: MonomialImages | None = None
) -> list[KernelElement]:
    """Basis of the degree-``d`` kernel of restriction to the ``k_torus`` torus.

    The basis is in reduced echelon form over the generator-monomial order.
    """
    if d < 1:
        raise ValueError("degree must be positive")
    vectors = restriction_vectors(h, k_torus, d, images)
    return [KernelElement(h, d, tuple(c)) for c in kernel_basis(vectors)]
