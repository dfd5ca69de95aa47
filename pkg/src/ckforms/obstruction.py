"""The graded non-containment test and its verdicts.

For a pair ``(G, H)`` the search walks polynomial degrees ``d = 1, 2, ...`` and
compares two subspaces of the degree-``d`` Weyl invariants of ``H_U``:

* the kernel of restriction to the maximal torus of ``K_H``;
* the degree-``d`` piece of the ideal generated by restricted ``G_U`` invariants.

A kernel element outside the ideal piece is a witness: ``G/H`` then admits no
compact Clifford-Klein form.  Running out of degrees proves nothing.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .liegroups import GroupSpec, generator_monomials, hilbert_dimension, invariant_generators
from .polyalg import Echelon, GradedVector, Polynomial, in_span, substitute_linear, to_graded_vector
from .restriction import (
    KernelElement,
    MonomialImages,
    TorusMap,
    kernel_of_restriction,
    restrict_generator,
    restriction_vectors,
)
from .polyalg import rank as vector_rank

DEFAULT_MAX_DEGREE = 12


class PairSpecError(ValueError):
    """Invalid pair data; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class PairSpec:
    id: str
    g_u: GroupSpec
    h_u: GroupSpec
    map_h_in_g: TorusMap
    map_kh_in_h: TorusMap
    rank_g: int
    rank_h: int
    rank_kg: int
    rank_kh: int
    complexification: bool = False
    notes: str = ""

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.map_h_in_g.ambient_rank != self.g_u.torus_rank:
            raise PairSpecError(
                "map_h_in_g",
                f"has {self.map_h_in_g.ambient_rank} rows but g_u has torus rank {self.g_u.torus_rank}",
            )
        if self.map_h_in_g.sub_rank != self.h_u.torus_rank:
            raise PairSpecError(
                "map_h_in_g",
                f"has {self.map_h_in_g.sub_rank} columns but h_u has torus rank {self.h_u.torus_rank}",
            )
        if self.map_kh_in_h.ambient_rank != self.h_u.torus_rank:
            raise PairSpecError(
                "map_kh_in_h",
                f"has {self.map_kh_in_h.ambient_rank} rows but h_u has torus rank {self.h_u.torus_rank}",
            )
        for name in ("rank_g", "rank_h", "rank_kg", "rank_kh"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise PairSpecError(name, "must be a non-negative integer")
        if self.rank_g != self.g_u.torus_rank:
            raise PairSpecError("rank_g", f"is {self.rank_g} but g_u has torus rank {self.g_u.torus_rank}")
        if self.rank_h != self.h_u.torus_rank:
            raise PairSpecError("rank_h", f"is {self.rank_h} but h_u has torus rank {self.h_u.torus_rank}")
        if self.rank_kh != self.map_kh_in_h.sub_rank:
            raise PairSpecError(
                "rank_kh", f"is {self.rank_kh} but map_kh_in_h has {self.map_kh_in_h.sub_rank} columns"
            )
        if self.rank_kg > self.rank_g:
            raise PairSpecError("rank_kg", f"{self.rank_kg} exceeds rank_g {self.rank_g}")
        if self.rank_kh > self.rank_kg:
            raise PairSpecError("rank_kh", f"{self.rank_kh} exceeds rank_kg {self.rank_kg}")
        try:
            self.map_h_in_g.compose(self.map_kh_in_h)
        except ValueError as exc:
            raise PairSpecError("map_kh_in_h", f"composite torus map invalid ({exc})") from None


class Verdict(str, enum.Enum):
    OBSTRUCTION_FOUND = "obstruction_found"
    INCONCLUSIVE = "inconclusive"
    INAPPLICABLE = "inapplicable"


class Applicability(str, enum.Enum):
    APPLICABLE = "applicable"
    EQUAL_RANK_HK = "equal_rank_hk"
    COMPLEXIFICATION = "complexification"


@dataclass(frozen=True)
class Certificate:
    restricts_to_zero: bool
    outside_ideal: bool

    @property
    def valid(self) -> bool:
        return self.restricts_to_zero and self.outside_ideal


@dataclass(frozen=True)
class DegreeStats:
    degree: int
    hilbert_dim: int
    kernel_dim: int
    image_rank: int
    ideal_rank: int

    @property
    def coh_degree(self) -> int:
        return 2 * self.degree


@dataclass(frozen=True)
class ObstructionResult:
    verdict: Verdict
    max_degree: int
    witness: KernelElement | None = None
    degree: int | None = None
    reason: Applicability | None = None
    certificate: Certificate | None = None
    rank_criterion: bool = False
    stats: tuple[DegreeStats, ...] = field(default=())


def rank_criterion(p: PairSpec) -> bool:
    """Equal ranks of ``G`` and ``H`` together with ``rank K_G > rank K_H``."""
    return p.rank_g == p.rank_h and p.rank_kg > p.rank_kh


def applicability_precheck(p: PairSpec) -> Applicability:
    # The complexification flag is checked first: SL(2,C)/SL(2,R) also has
    # rank H = rank K_H, but the flag is the more specific statement.
    if p.complexification:
        return Applicability.COMPLEXIFICATION
    if p.rank_h == p.rank_kh:
        return Applicability.EQUAL_RANK_HK
    return Applicability.APPLICABLE


class _PairContext:
    """Memoized expansions for one search; never shared with verification."""

    def __init__(self, p: PairSpec):
        self.pair = p
        self.h_monomials = MonomialImages(p.h_u, TorusMap.identity(p.h_u.torus_rank))
        self.k_images = MonomialImages(p.h_u, p.map_kh_in_h)
        self.restricted_g = [
            (g, restrict_generator(g, p.map_h_in_g)) for g in invariant_generators(p.g_u)
        ]

    def ideal_vectors(self, d: int) -> list[GradedVector]:
        out = []
        for _, rho in self.restricted_g:
            if rho.is_zero():
                continue
            e = rho.degree()
            if e > d:
                continue
            for b in generator_monomials(self.pair.h_u, d - e):
                out.append(to_graded_vector(rho * self.h_monomials(b), d))
        return out


def ideal_piece(p: PairSpec, d: int) -> list[GradedVector]:
    """Spanning vectors of the degree-``d`` piece of the ideal, in ``H_U`` torus monomials.

    For each ambient generator with non-zero restriction of degree ``e <= d``,
    the restriction times every generator monomial of ``H_U`` of degree ``d - e``.
    """
    if d < 1:
        raise ValueError("degree must be positive")
    return _PairContext(p).ideal_vectors(d)


def _fresh_ideal_vectors(p: PairSpec, d: int) -> list[GradedVector]:
    gens_h = invariant_generators(p.h_u)
    out = []
    for g in invariant_generators(p.g_u):
        rho = substitute_linear(g.torus_poly, p.map_h_in_g)
        if rho.is_zero() or rho.degree() > d:
            continue
        for b in generator_monomials(p.h_u, d - rho.degree()):
            term = rho
            for gen, a in zip(gens_h, b):
                if a:
                    term = term * gen.torus_poly**a
            out.append(to_graded_vector(term, d))
    return out


def verify_witness(p: PairSpec, w: KernelElement) -> bool:
    """Re-check a witness from scratch: it restricts to zero and escapes the ideal."""
    if w.group != p.h_u or w.is_zero():
        return False
    poly = w.torus_poly()
    if not substitute_linear(poly, p.map_kh_in_h).is_zero():
        return False
    return not in_span(to_graded_vector(poly, w.degree), _fresh_ideal_vectors(p, w.degree))


def check_obstruction(
    p: PairSpec, max_degree: int = DEFAULT_MAX_DEGREE, *, force: bool = False
) -> ObstructionResult:
    """Search degrees ``1..max_degree`` for a witness.

    With ``force`` the applicability precheck is reported but does not stop
    the search.
    """
    if max_degree < 1:
        raise ValueError("max_degree must be at least 1")
    applicability = applicability_precheck(p)
    by_rank = rank_criterion(p)
    if applicability is not Applicability.APPLICABLE and not force:
        return ObstructionResult(
            Verdict.INAPPLICABLE, max_degree, reason=applicability, rank_criterion=by_rank
        )
    ctx = _PairContext(p)
    stats = []
    for d in range(1, max_degree + 1):
        hdim = hilbert_dimension(p.h_u, d)
        kernel = kernel_of_restriction(p.h_u, p.map_kh_in_h, d, ctx.k_images)
        ideal = Echelon()
        for v in ctx.ideal_vectors(d):
            ideal.insert(v.as_dict())
        stats.append(DegreeStats(d, hdim, len(kernel), hdim - len(kernel), ideal.rank))
        for k in kernel:
            vec = to_graded_vector(k.torus_poly(), d)
            if ideal.contains(vec.as_dict()):
                continue
            cert = Certificate(
                restricts_to_zero=substitute_linear(k.torus_poly(), p.map_kh_in_h).is_zero(),
                outside_ideal=True,
            )
            return ObstructionResult(
                Verdict.OBSTRUCTION_FOUND,
                max_degree,
                witness=k,
                degree=d,
                reason=applicability if applicability is not Applicability.APPLICABLE else None,
                certificate=cert,
                rank_criterion=by_rank,
                stats=tuple(stats),
            )
    return ObstructionResult(
        Verdict.INCONCLUSIVE,
        max_degree,
        reason=applicability if applicability is not Applicability.APPLICABLE else None,
        rank_criterion=by_rank,
        stats=tuple(stats),
    )


def image_rank(p: PairSpec, d: int) -> int:
    """Rank of the restriction map on the degree-``d`` invariants of ``H_U``."""
    return vector_rank(restriction_vectors(p.h_u, p.map_kh_in_h, d))
