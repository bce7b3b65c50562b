import itertools

import pytest

from d0lbs.bispecial import (
    BSTriplet,
    f_image,
    f_image_n,
    f_preimage,
    f_preimages,
    generate_bispecials,
    is_bs_triplet,
    is_initial,
    make_triplet,
    oracle_difference,
    replace_empty_centers,
)
from d0lbs.core import word
from d0lbs.forky import PPair
from d0lbs.gallery import ACCEPTED, EXTRA
from d0lbs.language import factor_closure
from d0lbs.pipeline import Limits, run_pipeline

from conftest import analysis, closure, graphs_of, random_circular_systems


def key(left, center, right):
    return (PPair.of("L", *left), word(center), PPair.of("R", *right))


PHI_S_INITIAL = {
    key(("0", "01"), "", ("1", "2")), key(("0", "01"), "", ("0", "2")),
    key(("0", "012"), "", ("0", "1")), key(("0", "012"), "", ("0", "2")),
    key(("0", "012"), "", ("1", "2")), key(("0", "22"), "", ("0", "1")),
    key(("2", "01"), "", ("0", "2")), key(("0", "012"), "0", ("0", "1")),
}

# ((0,012),1,(0,1)) is a tempting sixth entry but is not a triplet; see test_centre_one_variant_is_not_a_triplet
PHI_S_NONEMPTY = {
    key(("2", "01"), "2", ("0", "2")), key(("2", "01"), "20", ("0", "1")),
    key(("0", "22"), "012", ("0", "2")), key(("0", "22"), "0120", ("0", "1")),
    key(("0", "012"), "012", ("0", "2")), key(("0", "012"), "0", ("0", "1")),
}

PHI_E_REFERENCE = {
    key(("0", "1"), "121", ("0", "1")), key(("0", "1"), "12", ("0", "1")),
    key(("0", "1"), "21", ("0", "1")), key(("0", "1"), "2", ("0", "1")),
    key(("1", "2"), "1", ("1", "2")), key(("0", "2"), "1", ("1", "2")),
    key(("0", "2"), "1", ("0", "2")), key(("1", "2"), "0", ("1", "2")),
}


def test_phi_s_initial_triplets():
    rep = analysis("phi_s")
    assert {t.key for t in rep.initial} == PHI_S_INITIAL
    assert {t.key for t in rep.initial_nonempty} == PHI_S_NONEMPTY


def test_phi_s_coincidences():
    rep = analysis("phi_s")
    G = graphs_of(rep)
    by_key = {t.key: t for t in rep.initial}
    for a, b in [(key(("0", "012"), "", ("0", "1")), key(("0", "012"), "", ("1", "2"))),
                 (key(("0", "01"), "", ("0", "2")), key(("2", "01"), "", ("0", "2")))]:
        assert f_image(G, by_key[a]).key == f_image(G, by_key[b]).key


def test_centre_one_variant_is_not_a_triplet():
    F = closure("phi_s", 20)
    assert make_triplet(F, PPair.of("L", "0", "012"), word("1"), PPair.of("R", "0", "1")) is None


def test_phi_e_initial_triplets_contain_reference_list():
    rep = analysis("phi_e")
    got = {t.key for t in rep.initial_nonempty}
    assert PHI_E_REFERENCE <= got
    assert got - PHI_E_REFERENCE == {key(("1", "2"), "1", ("0", "2"))}


def test_extra_phi_e_triplet_is_genuine():
    rep = analysis("phi_e")
    F = closure("phi_e", 30)
    G = graphs_of(rep)
    t = make_triplet(F, PPair.of("L", "1", "2"), word("1"), PPair.of("R", "0", "2"))
    assert t is not None and is_bs_triplet(F, t) and is_initial(F, t)
    assert {w for o in t.orientations for w in t.words_for(o)} == {word("112"), word("210")}
    # no edge enters (1,2) in GL, so it is not an f-image of anything
    assert G.left.in_edges(t.left) == []


def test_f_image_golden():
    rep = analysis("phi_s")
    F = closure("phi_s", 30)
    t = make_triplet(F, PPair.of("L", "0", "012"), word("0"), PPair.of("R", "0", "1"))
    u = f_image(graphs_of(rep), t)
    assert u.key == key(("0", "22"), "0120012", ("0", "2"))
    assert is_bs_triplet(F, u)


@pytest.mark.parametrize("name", ACCEPTED + EXTRA)
def test_compact_form(name):
    rep = analysis(name)
    G = graphs_of(rep)
    for t in rep.initial:
        u = t
        for n in range(1, 7):
            u = f_image(G, u)
            assert f_image_n(G, t, n) == u


@pytest.mark.parametrize("name", ACCEPTED + EXTRA)
def test_initial_triplets_are_short_and_realised(name):
    rep = analysis(name)
    F = closure(name, 64)
    d = rep.classification.delay.value
    assert rep.initial
    for t in rep.initial:
        assert len(t.center) <= d and is_bs_triplet(F, t) and is_initial(F, t)


@pytest.mark.parametrize("name", ACCEPTED + EXTRA)
def test_generated_records_are_triplets(name):
    rep = analysis(name, "bispecial")
    F = closure(name, 130)
    for r in rep.records:
        assert is_bs_triplet(F, r.triplet)
        assert r.n > 0 or r.triplet == rep.initial[r.initial_id]


def _non_initial_pool():
    pool = []
    for name in ACCEPTED + EXTRA:
        rep = analysis(name, "forky")
        F = closure(name, 130)
        pool.append((rep.system, F, graphs_of(rep), 100))
    for sys in random_circular_systems(25):
        rep = run_pipeline(sys, Limits(horizon=40, delay_cap=10), until="forky")
        pool.append((sys, factor_closure(sys, 60), graphs_of(rep), 40))
    for sys, F, G, max_len in pool:
        for n in range(max_len + 1):
            for v in F.of_length(n):
                if not F.is_bispecial(v):
                    continue
                for left, right in itertools.product(G.left.vertices, G.right.vertices):
                    if n + left.max_len() + right.max_len() > F.horizon:
                        continue
                    t = make_triplet(F, left, v, right)
                    if t is not None and not is_initial(F, t):
                        yield sys, F, G, t


def test_preimage_round_trip():
    count = 0
    for sys, F, G, t in _non_initial_pool():
        pre = f_preimages(F, G, t)
        assert pre, t.render(sys)
        covered = set()
        for p in pre:
            img = f_image(G, p)
            assert img.key == t.key and set(img.orientations) <= set(t.orientations)
            covered |= set(img.orientations)
        assert covered == set(t.orientations)
        first = f_preimage(F, G, t)
        if first.orientations == tuple(o ^ (G.left.edge(first.left).crossed ^ G.right.edge(first.right).crossed)
                                       for o in t.orientations):
            assert f_image(G, first) == t
        # the forward map lands back among the preimages
        u = f_image(G, t)
        if len(u.center) + 20 <= F.horizon:
            assert t.key in {p.key for p in f_preimages(F, G, u)}
        count += 1
    assert count >= 500


def test_empty_centre_can_map_to_initial():
    rep = analysis("phi_p", "forky")
    F = closure("phi_p", 40)
    G = graphs_of(rep)
    sym = rep.system.parse_word
    t = make_triplet(F, PPair("L", sym("1"), sym("4")), b"", PPair("R", sym("2"), sym("4")))
    u = f_image(G, t)
    assert not is_initial(F, t) and is_initial(F, u)
    assert t.key in {p.key for p in f_preimages(F, G, u)}


def test_f_image_is_not_injective():
    rep = analysis("phi_p", "forky")
    F = closure("phi_p", 40)
    G = graphs_of(rep)
    sym = rep.system.parse_word
    a = make_triplet(F, PPair("L", sym("1"), sym("4")), sym("1211"), PPair("R", sym("1"), sym("3")))
    b = make_triplet(F, PPair("L", sym("2"), sym("4")), sym("1211"), PPair("R", sym("1"), sym("3")))
    assert not is_initial(F, a) and not is_initial(F, b)
    assert f_image(G, a) == f_image(G, b)
    assert {p.key for p in f_preimages(F, G, f_image(G, a))} >= {a.key, b.key}


@pytest.mark.parametrize("name", EXTRA)
def test_oracle_on_more_systems(name):
    rep = analysis(name, "bispecial")
    missing, extra = oracle_difference(closure(name, 62), rep.records, 60)
    assert not missing and not extra


def test_oracle_on_random_systems():
    for sys in random_circular_systems(40, seed=11):
        rep = run_pipeline(sys, Limits(horizon=40, delay_cap=10, max_len=30), until="bispecial")
        missing, extra = oracle_difference(factor_closure(sys, 32), rep.records, 30)
        assert not missing and not extra, [sys.render(im) for im in sys.morphism.images]


def test_replacement_keeps_nonempty_and_drops_duplicates():
    rep = analysis("phi_s")
    G = graphs_of(rep)
    out = replace_empty_centers(G, rep.initial + rep.initial)
    assert out == replace_empty_centers(G, rep.initial)
    assert all(t.center for t in out)


def test_generation_stops_at_max_len():
    rep = analysis("thue_morse")
    recs = generate_bispecials(rep.initial, graphs_of(rep), None, max_len=10)
    assert recs and all(len(r.center) <= 10 for r in recs)


def test_triplet_validation():
    with pytest.raises(ValueError):
        BSTriplet(PPair.of("R", "0", "1"), b"", PPair.of("R", "0", "1"))
    with pytest.raises(ValueError):
        BSTriplet(PPair.of("L", "0", "1"), b"", PPair.of("R", "0", "1"), (2,))
