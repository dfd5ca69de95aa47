"""Built-in pairs, the two enlargement rules, and the pair-file format.

Every disconnected group is replaced by its identity component (``O(p,q)`` by
``SO_o(p,q)`` and so on); the existence question for compact quotients does
not see the difference.

Complex groups ``G`` are handled through ``G_C = G x conj(G)``: ``G_U`` has a
holomorphic and an antiholomorphic copy of each compact factor, holomorphic
copies first.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

from .liegroups import SO, SU, ClassicalFactor, GroupSpec, Sp, U, invariant_generators
from .obstruction import PairSpec, PairSpecError, Verdict
from .restriction import KernelElement, TorusMap, conjugation_sign, embedding

MAX_H_RANK = 8
MAX_G_RANK = 12


@dataclass(frozen=True)
class Expected:
    verdict: Verdict
    witness: str | None = None
    degree: int | None = None
    reason: str | None = None
    # a different, also valid, witness named in the literature for this pair
    alt_witness: str | None = None
    alt_degree: int | None = None
    # the verdict is predicted but not worked out in the source
    tentative: bool = False


@dataclass(frozen=True)
class CatalogEntry:
    pair: PairSpec
    expected: Expected
    source: str
    description: str = ""
    family: str = ""
    params: tuple[int, ...] = ()
    aliases: tuple[str, ...] = ()
    annotations: tuple[str, ...] = field(default=())

    @property
    def id(self) -> str:
        return self.pair.id


def _family_id(name: str, params: Sequence[int]) -> str:
    return f"{name}({','.join(str(p) for p in params)})"


def _pair(
    pid: str,
    g_u: GroupSpec,
    h_u: GroupSpec,
    h_hosts,
    k_h: GroupSpec,
    k_hosts,
    rank_kg: int,
    *,
    complexification: bool = False,
    notes: str = "",
) -> PairSpec:
    if h_u.torus_rank > MAX_H_RANK or g_u.torus_rank > MAX_G_RANK:
        raise ValueError(
            f"{pid}: torus ranks {g_u.torus_rank}/{h_u.torus_rank} exceed the desk-scale bounds "
            f"{MAX_G_RANK}/{MAX_H_RANK}"
        )
    return PairSpec(
        id=pid,
        g_u=g_u,
        h_u=h_u,
        map_h_in_g=embedding(h_u, g_u, h_hosts),
        map_kh_in_h=embedding(k_h, h_u, k_hosts),
        rank_g=g_u.torus_rank,
        rank_h=h_u.torus_rank,
        rank_kg=rank_kg,
        rank_kh=k_h.torus_rank,
        complexification=complexification,
        notes=notes,
    )


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ValueError(message)


# -- families -----------------------------------------------------------------


def _gl2n_glnc(n: int) -> tuple[PairSpec, str]:
    _require(n >= 1, "n must be positive")
    pid = _family_id("gl2n-glnc", (n,))
    pair = _pair(
        pid,
        GroupSpec.of(U(2 * n)),
        GroupSpec.of(U(n), U(n)),
        [[(0, 1), (1, 1)]],
        GroupSpec.of(U(n)),
        [[(0, 1)], [(0, -1)]],
        rank_kg=n,
    )
    return pair, f"GL({2 * n},R)/GL({n},C)"


def _sl_pq_so_pq(p: int, q: int) -> tuple[PairSpec, str]:
    _require(p >= 1 and q >= 1, "p and q must be positive")
    n = p + q
    pid = _family_id("sl-pq-so-pq", (p, q))
    pair = _pair(
        pid,
        GroupSpec.of(SU(n)),
        GroupSpec.of(SO(n)),
        [[(0, 1)]],
        GroupSpec.of(SO(p), SO(q)),
        [[(0, 1), (1, 1)]],
        rank_kg=n // 2,
        notes="SO(p,q) replaced by its identity component",
    )
    return pair, f"SL({n},R)/SO({p},{q})"


def _o_nn_o_nc(n: int) -> tuple[PairSpec, str]:
    _require(n >= 2, "n must be at least 2")
    pid = _family_id("o-nn-o-nc", (n,))
    pair = _pair(
        pid,
        GroupSpec.of(SO(2 * n)),
        GroupSpec.of(SO(n), SO(n)),
        [[(0, 1), (1, 1)]],
        GroupSpec.of(SO(n)),
        [[(0, 1)], [(0, 1)]],
        rank_kg=2 * (n // 2),
        notes="O(n,n) and O(n,C) replaced by identity components",
    )
    return pair, f"O({n},{n})/O({n},C)"


def _o_blocks(*pq: int, name: str = "o-blocks") -> tuple[PairSpec, str]:
    _require(len(pq) >= 2 and len(pq) % 2 == 0, "need parameters p1,q1,...,pk,qk")
    blocks = list(zip(pq[0::2], pq[1::2]))
    _require(all(p >= 0 and q >= 0 and p + q >= 1 for p, q in blocks), "each block needs p+q >= 1")
    big_p, big_q = sum(p for p, _ in blocks), sum(q for _, q in blocks)
    h_factors = [SO(p + q) for p, q in blocks]
    k_factors, k_hosts = [], []
    for p, q in blocks:
        hosted = []
        for size in (p, q):
            if size:
                hosted.append((len(k_factors), 1))
                k_factors.append(SO(size))
        k_hosts.append(hosted)
    if not k_factors:
        k_factors = [SO(1)]
    pid = _family_id(name, pq)
    pair = _pair(
        pid,
        GroupSpec.of(SO(big_p + big_q)),
        GroupSpec(tuple(h_factors)),
        [[(i, 1) for i in range(len(blocks))]],
        GroupSpec(tuple(k_factors)),
        k_hosts,
        rank_kg=big_p // 2 + big_q // 2,
        notes="orthogonal groups replaced by identity components",
    )
    inner = "x".join(f"O({p},{q})" for p, q in blocks)
    return pair, f"O({big_p},{big_q})/({inner})"


def _o_pq_rs(p: int, q: int, r: int, s: int) -> tuple[PairSpec, str]:
    return _o_blocks(p, q, r, s, name="o-pq-rs")


def _sl_r_blocks(*ns: int) -> tuple[PairSpec, str]:
    _require(len(ns) >= 1 and all(n >= 2 for n in ns), "block sizes must be at least 2")
    total = sum(ns)
    pid = _family_id("sl-r-blocks", ns)
    pair = _pair(
        pid,
        GroupSpec.of(SU(total)),
        GroupSpec(tuple(SU(n) for n in ns)),
        [[(i, 1) for i in range(len(ns))]],
        GroupSpec(tuple(SO(n) for n in ns)),
        [[(i, 1)] for i in range(len(ns))],
        rank_kg=total // 2,
    )
    inner = "x".join(f"SL({n},R)" for n in ns)
    return pair, f"SL({total},R)/({inner})"


def _complex_blocks(
    name: str, factor: Callable[[int], ClassicalFactor], label: str, ns: Sequence[int], min_n: int
) -> tuple[PairSpec, str]:
    _require(len(ns) >= 1 and all(n >= min_n for n in ns), f"block sizes must be at least {min_n}")
    total = sum(ns)
    k = len(ns)
    big = factor(total)
    h_holo = [factor(n) for n in ns]
    h_u = GroupSpec(tuple(h_holo + h_holo))
    k_hosts = [[(i, 1)] for i in range(k)] + [[(i, conjugation_sign(h_holo[i]))] for i in range(k)]
    pid = _family_id(name, ns)
    rank_kg = big.torus_rank
    pair = _pair(
        pid,
        GroupSpec.of(big, big),
        h_u,
        [[(i, 1) for i in range(k)], [(k + i, 1) for i in range(k)]],
        GroupSpec(tuple(h_holo)),
        k_hosts,
        rank_kg=rank_kg,
        notes="complex groups realized as G x conj(G); identity components",
    )
    inner = "x".join(f"{label}({n},C)" for n in ns)
    return pair, f"{label}({total},C)/({inner})"


def _sl_c_blocks(*ns: int):
    return _complex_blocks("sl-c-blocks", SU, "SL", ns, 2)


def _o_c_blocks(*ns: int):
    return _complex_blocks("o-c-blocks", SO, "O", ns, 1)


def _sp_c_blocks(*ns: int):
    return _complex_blocks("sp-c-blocks", Sp, "Sp", ns, 1)


def _sl_h_blocks(*ns: int) -> tuple[PairSpec, str]:
    _require(len(ns) >= 1 and all(n >= 1 for n in ns), "block sizes must be positive")
    total = sum(ns)
    pid = _family_id("sl-h-blocks", ns)
    pair = _pair(
        pid,
        GroupSpec.of(SU(2 * total)),
        GroupSpec(tuple(SU(2 * n) for n in ns)),
        [[(i, 1) for i in range(len(ns))]],
        GroupSpec(tuple(Sp(n) for n in ns)),
        [[(i, 1)] for i in range(len(ns))],
        rank_kg=total,
    )
    inner = "x".join(f"SL({n},H)" for n in ns)
    return pair, f"SL({total},H)/({inner})"


def _u_prq_upq_ur(p: int, q: int, r: int) -> tuple[PairSpec, str]:
    _require(p >= 1 and q >= 1 and r >= 1, "p, q, r must be positive")
    pid = _family_id("u-prq-upq-ur", (p, q, r))
    pair = _pair(
        pid,
        GroupSpec.of(U(p + q + r)),
        GroupSpec.of(U(p + q), U(r)),
        [[(0, 1), (1, 1)]],
        GroupSpec.of(U(p), U(q), U(r)),
        [[(0, 1), (1, 1)], [(2, 1)]],
        rank_kg=p + q + r,
    )
    return pair, f"U({p + r},{q})/(U({p},{q})xU({r}))"


def _sl_c_complexification(n: int) -> tuple[PairSpec, str]:
    _require(n >= 2, "n must be at least 2")
    pid = _family_id("sl-c-complexification", (n,))
    pair = _pair(
        pid,
        GroupSpec.of(SU(n), SU(n)),
        GroupSpec.of(SU(n)),
        [[(0, 1)], [(0, -1)]],
        GroupSpec.of(SO(n)),
        [[(0, 1)]],
        rank_kg=n - 1,
        complexification=True,
        notes="G is the complexification of H",
    )
    return pair, f"SL({n},C)/SL({n},R)"


FAMILIES: dict[str, Callable[..., tuple[PairSpec, str]]] = {
    "gl2n-glnc": _gl2n_glnc,
    "sl-pq-so-pq": _sl_pq_so_pq,
    "o-nn-o-nc": _o_nn_o_nc,
    "o-pq-rs": _o_pq_rs,
    "o-blocks": _o_blocks,
    "sl-r-blocks": _sl_r_blocks,
    "sl-c-blocks": _sl_c_blocks,
    "sl-h-blocks": _sl_h_blocks,
    "o-c-blocks": _o_c_blocks,
    "sp-c-blocks": _sp_c_blocks,
    "u-prq-upq-ur": _u_prq_upq_ur,
    "sl-c-complexification": _sl_c_complexification,
}

FAMILY_ARITY: dict[str, tuple[str, ...] | None] = {
    "gl2n-glnc": ("n",),
    "sl-pq-so-pq": ("p", "q"),
    "o-nn-o-nc": ("n",),
    "o-pq-rs": ("p", "q", "r", "s"),
    "o-blocks": None,
    "sl-r-blocks": None,
    "sl-c-blocks": None,
    "sl-h-blocks": None,
    "o-c-blocks": None,
    "sp-c-blocks": None,
    "u-prq-upq-ur": ("p", "q", "r"),
    "sl-c-complexification": ("n",),
}


def build_pair(family: str, params: Sequence[int]) -> tuple[PairSpec, str]:
    """Instantiate a family; raises ``KeyError`` for unknown families, ``ValueError`` for bad parameters."""
    if family not in FAMILIES:
        raise KeyError(family)
    arity = FAMILY_ARITY[family]
    if arity is not None and len(params) != len(arity):
        raise ValueError(f"{family} takes parameters {', '.join(arity)}")
    return FAMILIES[family](*params)


def _found(witness: str, degree: int, **kw) -> Expected:
    return Expected(Verdict.OBSTRUCTION_FOUND, witness, degree, **kw)


def _inapplicable(reason: str) -> Expected:
    return Expected(Verdict.INAPPLICABLE, reason=reason)


# (family, params, expected, source, aliases, annotations)
_BUILTINS = [
    ("gl2n-glnc", (2,), _found("c2@1 - c2@2", 2), "Cor 1.4 (1)", ("gl4r-gl2c",), ()),
    ("gl2n-glnc", (3,), _found("c2@1 - c2@2", 2), "Cor 1.4 (1)", ("gl6r-gl3c",), ()),
    ("sl-pq-so-pq", (1, 1), _found("e", 1), "Cor 1.4 (2)", ("sl2r-so11",),
     ("also obstructed by the rank criterion",)),
    ("sl-pq-so-pq", (1, 3), _found("e", 2), "Cor 1.4 (2)", ("sl4r-so13",),
     ("SL(2p,R)/SO(p,p) and SL(2p+1,R)/SO(p,p+1) were known by other methods",)),
    ("sl-pq-so-pq", (3, 3), _found("e", 3), "Cor 1.4 (2)", ("sl6r-so33",), ()),
    ("o-nn-o-nc", (2,), _found("e@1 - e@2", 1, alt_witness="e@1^2 - e@2^2", alt_degree=2),
     "Cor 1.4 (3)", ("o22-o2c",), ("even n was known by other methods",)),
    ("o-nn-o-nc", (3,), _found("p1@1 - p1@2", 2), "Cor 1.4 (3)", ("o33-o3c",), ()),
    ("o-pq-rs", (1, 1, 1, 0), _found("e@1", 1), "Cor 1.4 (4)", (), ()),
    ("o-pq-rs", (1, 3, 1, 0), _found("e@1", 2), "Cor 1.4 (4)", (), ()),
    ("o-pq-rs", (1, 1, 2, 0), _found("e@1", 1), "Cor 1.4 (4)", (), ()),
    ("sl-r-blocks", (3, 3), _found("c3@1", 3), "Cor 1.5 (1)", ("sl6r-sl3r-sl3r",), ()),
    ("sl-r-blocks", (3, 3, 2), _found("c3@1", 3), "Cor 1.5 (1)", (), ()),
    ("sl-c-blocks", (2, 2), _found("c2@1 - c2@3", 2), "Cor 1.5 (2)", (), ()),
    ("sl-h-blocks", (2, 2), _found("c3@1", 3), "Cor 1.5 (3)", (), ()),
    ("o-blocks", (1, 1, 2, 1, 1, 0), _found("e@1", 1), "Cor 1.5 (4)", (), ()),
    ("o-c-blocks", (2, 2), _found("e@1 - e@3", 1), "Remark 1.8", (), ("known by other methods",)),
    ("o-c-blocks", (2, 1), _found("e@1 - e@3", 1, tentative=True), "Remark 1.8",
     (), ("expected per the remark (n1 even, n2 = 1); no worked proof there",)),
    ("sp-c-blocks", (1, 1), _found("q1@1 - q1@3", 2), "Remark 1.8", (), ("known by other methods",)),
    ("sp-c-blocks", (2, 2), _found("q1@1 - q1@3", 2), "Remark 1.8", (), ()),
    ("u-prq-upq-ur", (1, 1, 1), _inapplicable("equal_rank_hk"), "Example 6.3 (1)", (),
     ("no compact quotient by the Calabi-Markus phenomenon, which this test cannot see",)),
    ("sl-c-complexification", (2,), _inapplicable("complexification"), "Example 6.3 (2)",
     ("sl2c-sl2r",), ("no compact quotient by the Calabi-Markus phenomenon, which this test cannot see",)),
    ("sl-c-complexification", (3,), _inapplicable("complexification"), "Example 6.3 (2)", (), ()),
]


def make_entry(family: str, params: Sequence[int], expected: Expected, source: str,
               aliases: Sequence[str] = (), annotations: Sequence[str] = ()) -> CatalogEntry:
    pair, description = build_pair(family, tuple(params))
    return CatalogEntry(
        pair=pair,
        expected=expected,
        source=source,
        description=description,
        family=family,
        params=tuple(params),
        aliases=tuple(aliases),
        annotations=tuple(annotations),
    )


def builtin_entries() -> list[CatalogEntry]:
    """Every built-in pair, including the enlarged variants of ``sl-r-blocks(3,3)``."""
    entries = [make_entry(*row) for row in _BUILTINS]
    base = next(e for e in entries if e.id == "sl-r-blocks(3,3)")
    su8 = GroupSpec.of(SU(8))
    six_in_eight = embedding(base.pair.g_u, su8, [[(0, 1)]])
    enlarged = enlarge_ambient(base, su8, six_in_eight, rank_kg=4)
    entries.append(enlarged)
    extra = GroupSpec.of(SU(2))
    h_in_g = embedding(enlarged.pair.h_u * extra, su8, [[(0, 1), (1, 1), (2, 1)]])
    kh_extra = embedding(GroupSpec.of(SO(2)), extra, [[(0, 1)]])
    entries.append(append_central_factor(enlarged, extra, h_in_g, kh_extra))
    return entries


def find_entry(selector: str, entries: Sequence[CatalogEntry] | None = None) -> CatalogEntry:
    for e in entries if entries is not None else builtin_entries():
        if selector == e.id or selector in e.aliases:
            return e
    raise KeyError(selector)


# -- enlargement rules --------------------------------------------------------


def lift_witness(name: str, old: GroupSpec, new: GroupSpec) -> str:
    """Rename a witness of ``old`` as an element of ``new = old x extra``."""
    w = KernelElement.parse(old, name)
    n_old = len(invariant_generators(old))
    n_new = len(invariant_generators(new))
    from .liegroups import generator_monomials

    lifted = {}
    for exps, c in w.terms():
        lifted[exps + (0,) * (n_new - n_old)] = c
    coeffs = tuple(lifted.get(m, 0) for m in generator_monomials(new, w.degree))
    return KernelElement(new, w.degree, coeffs).pretty


def enlarge_ambient(
    e: CatalogEntry, bigger: GroupSpec, new_map: TorusMap, *, rank_kg: int | None = None
) -> CatalogEntry:
    """Replace ``G`` by a larger group containing it; the ideal can only shrink.

    ``new_map`` embeds the old ambient torus into ``bigger``'s torus.  ``rank_kg``
    is the rank of the new maximal compact subgroup (defaults to the old one).
    """
    old = e.pair
    if new_map.sub_rank != old.g_u.torus_rank or new_map.ambient_rank != bigger.torus_rank:
        raise ValueError(
            f"rank mismatch: map is {new_map.ambient_rank}x{new_map.sub_rank}, "
            f"need {bigger.torus_rank}x{old.g_u.torus_rank}"
        )
    if bigger == old.g_u and new_map == TorusMap.identity(bigger.torus_rank):
        return e
    pair = replace(
        old,
        id=f"{old.id}+{bigger}",
        g_u=bigger,
        map_h_in_g=new_map.compose(old.map_h_in_g),
        rank_g=bigger.torus_rank,
        rank_kg=old.rank_kg if rank_kg is None else rank_kg,
        notes=f"{old.notes}; ambient enlarged to {bigger}".strip("; "),
    )
    return replace(
        e,
        pair=pair,
        source=f"{e.source} + Prop 5.2 (1)",
        description=f"{e.description} with ambient {bigger}",
        aliases=(),
    )


def append_central_factor(
    e: CatalogEntry,
    extra: GroupSpec,
    map_h_in_g: TorusMap,
    extra_kh_map: TorusMap | None = None,
) -> CatalogEntry:
    """Replace ``H`` by ``H x H'``; a witness ``w`` lifts to ``w (x) 1``.

    ``map_h_in_g`` is the combined embedding of ``H_U x H'_U`` into ``G_U``;
    ``extra_kh_map`` embeds the torus of ``K_{H'}`` into that of ``H'_U``
    (defaults to the identity, i.e. ``H'`` compact).
    """
    old = e.pair
    h_u = old.h_u * extra
    if extra_kh_map is None:
        extra_kh_map = TorusMap.identity(extra.torus_rank)
    if h_u.torus_rank > old.g_u.torus_rank:
        raise ValueError(f"rank overflow: {h_u} does not fit into {old.g_u}")
    if map_h_in_g.sub_rank != h_u.torus_rank or map_h_in_g.ambient_rank != old.g_u.torus_rank:
        raise ValueError("rank mismatch in the combined embedding")
    if extra_kh_map.ambient_rank != extra.torus_rank:
        raise ValueError("rank mismatch in the extra compact torus map")
    kh = old.map_kh_in_h
    rows = [r + (0,) * extra_kh_map.sub_rank for r in kh.matrix]
    rows += [(0,) * kh.sub_rank + r for r in extra_kh_map.matrix]
    pair = replace(
        old,
        id=f"{old.id}+{extra}",
        h_u=h_u,
        map_h_in_g=map_h_in_g,
        map_kh_in_h=TorusMap(tuple(rows), kh.sub_rank + extra_kh_map.sub_rank),
        rank_h=h_u.torus_rank,
        rank_kh=old.rank_kh + extra_kh_map.sub_rank,
        notes=f"{old.notes}; central factor {extra} appended".strip("; "),
    )
    expected = e.expected
    if expected.verdict is Verdict.OBSTRUCTION_FOUND and expected.witness:
        expected = replace(
            expected,
            witness=lift_witness(expected.witness, old.h_u, h_u),
            alt_witness=(
                lift_witness(expected.alt_witness, old.h_u, h_u) if expected.alt_witness else None
            ),
        )
    return replace(
        e,
        pair=pair,
        expected=expected,
        source=f"{e.source} + Prop 5.2 (2)",
        description=f"{e.description} with central factor {extra}",
        aliases=(),
    )


# -- pair-spec files ----------------------------------------------------------


def _group_to_json(g: GroupSpec) -> list[dict]:
    return [{"family": f.public_family, "n": f.n} for f in g.factors]


def pair_to_dict(p: PairSpec) -> dict:
    return {
        "id": p.id,
        "g_u": _group_to_json(p.g_u),
        "h_u": _group_to_json(p.h_u),
        "map_h_in_g": p.map_h_in_g.to_lists(),
        "map_kh_in_h": p.map_kh_in_h.to_lists(),
        "ranks": {"g": p.rank_g, "h": p.rank_h, "kg": p.rank_kg, "kh": p.rank_kh},
        "flags": {"complexification": p.complexification},
        "notes": p.notes,
    }


def dump_pair(p: PairSpec) -> str:
    return json.dumps(pair_to_dict(p), indent=2, sort_keys=True) + "\n"


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _group_from_json(name: str, raw) -> GroupSpec:
    if not isinstance(raw, list) or not raw:
        raise PairSpecError(name, "schema violation: expected a non-empty list of factors")
    factors = []
    for i, item in enumerate(raw):
        where = f"{name}[{i}]"
        if not isinstance(item, dict) or set(item) != {"family", "n"}:
            raise PairSpecError(where, "schema violation: expected {\"family\": str, \"n\": int}")
        fam, n = item["family"], item["n"]
        if fam not in ("U", "SU", "SO", "Sp") or not _is_int(n):
            raise PairSpecError(where, "schema violation: family must be U|SU|SO|Sp and n an integer")
        try:
            factors.append(ClassicalFactor.of(fam, n))
        except ValueError as exc:
            raise PairSpecError(where, str(exc)) from None
    return GroupSpec(tuple(factors))


def _map_from_json(name: str, raw, ambient_rank: int, sub_rank: int) -> TorusMap:
    if not isinstance(raw, list) or not all(isinstance(r, list) for r in raw):
        raise PairSpecError(name, "schema violation: expected a list of integer rows")
    if not all(_is_int(c) for r in raw for c in r):
        raise PairSpecError(name, "schema violation: entries must be integers")
    if len(raw) != ambient_rank:
        raise PairSpecError(name, f"has {len(raw)} rows, expected {ambient_rank} (ambient torus rank)")
    for r in raw:
        if len(r) != sub_rank:
            raise PairSpecError(name, f"row {r} has {len(r)} columns, expected {sub_rank}")
    try:
        return TorusMap(tuple(tuple(r) for r in raw), sub_rank)
    except ValueError as exc:
        raise PairSpecError(name, str(exc)) from None


_KEYS = {"id", "g_u", "h_u", "map_h_in_g", "map_kh_in_h", "ranks", "flags", "notes"}
_REQUIRED = {"id", "g_u", "h_u", "map_h_in_g", "map_kh_in_h", "ranks"}


def load_pair(text: str) -> PairSpec:
    """Parse and fully validate a pair-spec JSON document."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PairSpecError("document", f"schema violation: not valid JSON ({exc.msg})") from None
    if not isinstance(raw, dict):
        raise PairSpecError("document", "schema violation: expected a JSON object")
    missing = sorted(_REQUIRED - set(raw))
    if missing:
        raise PairSpecError(missing[0], "schema violation: missing required field")
    unknown = sorted(set(raw) - _KEYS)
    if unknown:
        raise PairSpecError(unknown[0], "schema violation: unknown field")
    if not isinstance(raw["id"], str) or not raw["id"]:
        raise PairSpecError("id", "schema violation: expected a non-empty string")
    g_u = _group_from_json("g_u", raw["g_u"])
    h_u = _group_from_json("h_u", raw["h_u"])
    ranks = raw["ranks"]
    if not isinstance(ranks, dict) or set(ranks) != {"g", "h", "kg", "kh"}:
        raise PairSpecError("ranks", "schema violation: expected keys g, h, kg, kh")
    for key, v in ranks.items():
        if not _is_int(v) or v < 0:
            raise PairSpecError(f"rank_{key}", "schema violation: must be a non-negative integer")
    flags = raw.get("flags", {})
    if not isinstance(flags, dict) or set(flags) - {"complexification"}:
        raise PairSpecError("flags", "schema violation: only 'complexification' is recognized")
    complexification = flags.get("complexification", False)
    if not isinstance(complexification, bool):
        raise PairSpecError("flags.complexification", "schema violation: expected a boolean")
    notes = raw.get("notes", "")
    if not isinstance(notes, str):
        raise PairSpecError("notes", "schema violation: expected a string")
    map_h = _map_from_json("map_h_in_g", raw["map_h_in_g"], g_u.torus_rank, h_u.torus_rank)
    kh_rows = raw["map_kh_in_h"]
    kh_cols = len(kh_rows[0]) if isinstance(kh_rows, list) and kh_rows and isinstance(kh_rows[0], list) else ranks["kh"]
    if kh_cols != ranks["kh"]:
        raise PairSpecError(
            "rank_kh", f"is {ranks['kh']} but map_kh_in_h has {kh_cols} columns"
        )
    map_kh = _map_from_json("map_kh_in_h", kh_rows, h_u.torus_rank, kh_cols)
    return PairSpec(
        id=raw["id"],
        g_u=g_u,
        h_u=h_u,
        map_h_in_g=map_h,
        map_kh_in_h=map_kh,
        rank_g=ranks["g"],
        rank_h=ranks["h"],
        rank_kg=ranks["kg"],
        rank_kh=ranks["kh"],
        complexification=complexification,
        notes=notes,
    )
