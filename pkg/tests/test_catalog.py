import json
from dataclasses import replace

import pytest

from ckforms.catalog import (
    FAMILIES,
    append_central_factor,
    build_pair,
    builtin_entries,
    dump_pair,
    enlarge_ambient,
    find_entry,
    load_pair,
    pair_to_dict,
)
from ckforms.liegroups import SO, SU, GroupSpec, U
from ckforms.obstruction import PairSpecError, Verdict, check_obstruction, verify_witness
from ckforms.restriction import KernelElement, TorusMap, embedding

ENTRIES = builtin_entries()


def test_required_instances_present():
    ids = {e.id for e in ENTRIES}
    for required in [
        "gl2n-glnc(2)",
        "gl2n-glnc(3)",
        "sl-pq-so-pq(1,1)",
        "sl-pq-so-pq(1,3)",
        "sl-pq-so-pq(3,3)",
        "o-nn-o-nc(2)",
        "o-nn-o-nc(3)",
        "sl-r-blocks(3,3)",
        "sl-c-blocks(2,2)",
        "sl-h-blocks(2,2)",
        "o-c-blocks(2,2)",
        "sp-c-blocks(1,1)",
        "sp-c-blocks(2,2)",
        "u-prq-upq-ur(1,1,1)",
        "sl-c-complexification(2)",
    ]:
        assert required in ids
    assert any(e.family == "o-pq-rs" for e in ENTRIES)
    assert any(e.family == "o-blocks" for e in ENTRIES)


def test_entries_are_unique_and_well_formed():
    ids = [e.id for e in ENTRIES]
    aliases = [a for e in ENTRIES for a in e.aliases]
    assert len(set(ids + aliases)) == len(ids) + len(aliases)
    for e in ENTRIES:
        assert e.expected.verdict in set(Verdict)
        assert e.source and e.description
        assert e.pair.h_u.torus_rank <= 8


def test_expected_examples():
    e = find_entry("sl-pq-so-pq(1,3)")
    assert (e.expected.verdict, e.expected.witness, e.expected.degree) == (Verdict.OBSTRUCTION_FOUND, "e", 2)
    assert find_entry("sl-c-complexification(2)").expected.verdict is Verdict.INAPPLICABLE
    # the literature's witness for O(2,2)/O(2,C) is stored alongside the one found first
    o22 = find_entry("o-nn-o-nc(2)")
    assert o22.expected.alt_witness == "e@1^2 - e@2^2"
    with pytest.raises(KeyError):
        find_entry("nope")


def test_family_parameter_errors():
    with pytest.raises(ValueError):
        build_pair("sl-pq-so-pq", (0, 3))
    with pytest.raises(ValueError):
        build_pair("sl-pq-so-pq", (1,))
    with pytest.raises(ValueError):
        build_pair("sl-pq-so-pq", (9, 9))  # beyond the desk-scale bounds
    with pytest.raises(KeyError):
        build_pair("no-such-family", (1,))
    for name in FAMILIES:
        assert name in {e.family for e in ENTRIES}


def test_tentative_remark_instance_is_obstructed():
    e = find_entry("o-c-blocks(2,1)")
    assert e.expected.tentative
    # only the verdict is asserted for this instance
    assert check_obstruction(e.pair).verdict is Verdict.OBSTRUCTION_FOUND


# -- enlargement rules --------------------------------------------------------


def test_identity_enlargement_is_identity():
    e = find_entry("sl-r-blocks(3,3)")
    same = enlarge_ambient(e, e.pair.g_u, TorusMap.identity(e.pair.g_u.torus_rank))
    assert same == e


def test_enlargement_rank_mismatch():
    e = find_entry("sl-r-blocks(3,3)")
    with pytest.raises(ValueError, match="rank mismatch"):
        enlarge_ambient(e, GroupSpec.of(SU(8)), TorusMap.identity(5))


def _enlargeable():
    for e in ENTRIES:
        if e.expected.verdict is not Verdict.OBSTRUCTION_FOUND or len(e.pair.g_u.factors) != 1:
            continue
        f = e.pair.g_u.factors[0]
        if f.family in ("U", "SU") and f.n <= 6:
            yield e, GroupSpec.of(type(f)(f.family, f.n + 2))
        elif f.is_orthogonal and f.n <= 7:
            yield e, GroupSpec.of(SO(f.n + 2))


@pytest.mark.parametrize("pair", list(_enlargeable()), ids=lambda p: f"{p[0].id}->{p[1]}")
def test_enlargement_never_loses_the_obstruction(pair):
    e, bigger = pair
    m = embedding(e.pair.g_u, bigger, [[(0, 1)]])
    big = enlarge_ambient(e, bigger, m, rank_kg=e.pair.rank_kg + 1)
    assert big.pair.g_u == bigger and big.pair.h_u == e.pair.h_u
    r = check_obstruction(big.pair)
    assert r.verdict is Verdict.OBSTRUCTION_FOUND
    assert r.degree <= e.expected.degree
    w = KernelElement.parse(big.pair.h_u, e.expected.witness)
    assert verify_witness(big.pair, w)


def test_sl8_enlargement_keeps_c3_witness():
    e = find_entry("sl-r-blocks(3,3)+SU(8)")
    r = check_obstruction(e.pair)
    assert (r.verdict, r.witness.pretty, r.degree) == (Verdict.OBSTRUCTION_FOUND, "c3@1", 3)


def test_append_central_factor_lifts_witness():
    base = find_entry("sl-pq-so-pq(1,3)")
    # SO(4) x SU(2) does not fit into SU(4); enlarge the ambient first
    su6 = GroupSpec.of(SU(6))
    bigger = enlarge_ambient(base, su6, embedding(base.pair.g_u, su6, [[(0, 1)]]), rank_kg=3)
    with pytest.raises(ValueError):
        # a U(1) block is not trace-free inside SU(6)
        embedding(base.pair.h_u * GroupSpec.of(U(1)), su6, [[(0, 1), (1, 1)]])
    extra = GroupSpec.of(SU(2))
    h_u = base.pair.h_u * extra
    m = embedding(h_u, su6, [[(0, 1), (1, 1)]])
    grown = append_central_factor(bigger, extra, m)
    assert grown.expected.witness == "e@1"
    r = check_obstruction(grown.pair)
    assert (r.verdict, r.witness.pretty) == (Verdict.OBSTRUCTION_FOUND, "e@1")
    assert verify_witness(grown.pair, KernelElement.parse(grown.pair.h_u, "e@1"))


def test_append_rank_zero_factor_keeps_verdict():
    e = find_entry("o-pq-rs(1,3,1,0)")
    extra = GroupSpec.of(SO(1))
    grown = append_central_factor(e, extra, e.pair.map_h_in_g, TorusMap((), 0))
    r0, r1 = check_obstruction(e.pair), check_obstruction(grown.pair)
    assert (r0.verdict, r0.witness.pretty, r0.degree) == (r1.verdict, r1.witness.pretty, r1.degree)


def test_append_rank_overflow():
    e = find_entry("sl-pq-so-pq(1,3)")
    with pytest.raises(ValueError, match="rank overflow"):
        append_central_factor(e, GroupSpec.of(U(3)), e.pair.map_h_in_g)


def test_appended_sl2_factor_entry():
    e = find_entry("sl-r-blocks(3,3)+SU(8)+SU(2)")
    assert e.expected.witness == "c3@1"
    assert str(e.pair.h_u) == "SU(3)xSU(3)xSU(2)"
    r = check_obstruction(e.pair)
    assert (r.verdict, r.witness.pretty, r.degree) == (Verdict.OBSTRUCTION_FOUND, "c3@1", 3)


# -- pair-spec files ----------------------------------------------------------


@pytest.mark.parametrize("entry", ENTRIES, ids=[e.id for e in ENTRIES])
def test_dump_load_roundtrip(entry):
    text = dump_pair(entry.pair)
    assert load_pair(text) == entry.pair
    assert dump_pair(load_pair(text)) == text


def _gl4_dict():
    return pair_to_dict(find_entry("gl4r-gl2c").pair)


def _error(doc) -> PairSpecError:
    with pytest.raises(PairSpecError) as err:
        load_pair(json.dumps(doc))
    return err.value


def test_zero_column_map_rejected():
    doc = _gl4_dict()
    doc["map_kh_in_h"] = [[r[0], 0] for r in doc["map_kh_in_h"]]
    err = _error(doc)
    assert "torus map not injective" in str(err) and err.field == "map_kh_in_h"


def test_rank_kh_mismatch_names_rank_kh():
    doc = _gl4_dict()
    doc["ranks"]["kh"] = 1
    err = _error(doc)
    assert err.field == "rank_kh" and "rank_kh" in str(err)


def test_schema_violations_are_named():
    doc = _gl4_dict()
    del doc["g_u"]
    assert _error(doc).field == "g_u"
    doc = _gl4_dict()
    doc["h_u"][0]["family"] = "G2"
    assert _error(doc).field == "h_u[0]"
    doc = _gl4_dict()
    doc["surprise"] = 1
    assert _error(doc).field == "surprise"
    doc = _gl4_dict()
    doc["map_h_in_g"][0][0] = 0.5
    assert _error(doc).field == "map_h_in_g"
    doc = _gl4_dict()
    doc["ranks"]["g"] = 3
    assert _error(doc).field == "rank_g"
    with pytest.raises(PairSpecError, match="schema violation"):
        load_pair("{not json")
    # the three failure kinds produce distinct messages
    msgs = {
        str(_error({**_gl4_dict(), "g_u": []})).split(":")[1],
        str(_error({**_gl4_dict(), "ranks": {"g": 4, "h": 4, "kg": 2, "kh": 1}})).split(":")[1],
    }
    assert len(msgs) == 2


def test_loaded_spec_checks_like_builtin():
    pair = load_pair(dump_pair(find_entry("gl4r-gl2c").pair))
    r = check_obstruction(pair)
    assert r.witness.pretty == "c2@1 - c2@2"
    assert replace(pair, notes="changed").notes == "changed"
