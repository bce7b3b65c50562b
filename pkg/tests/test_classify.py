import pytest
from hypothesis import assume, given, settings, strategies as st

from d0lbs.classify import (
    CIRCULAR_NON_PUSHY,
    REJECTED,
    bounded_run_length,
    circularity_report,
    growth_constant,
    injectivity_check,
    interpretations,
    is_pushy,
    synchronizing_cuts,
    synchronizing_delay,
)
from d0lbs.core import PreconditionError, apply, classify_letters, make_system, word
from d0lbs.gallery import ACCEPTED, EXTRA, REJECTED as REJECTED_NAMES, system
from d0lbs.language import factor_closure

from conftest import closure, fixed_point_systems

DELAYS = {"thue_morse": 4, "chacon": 5, "phi_e": 2, "phi_s": 3, "phi_p": 5}


@pytest.mark.parametrize("name", sorted(DELAYS))
def test_delays(name):
    d = synchronizing_delay(system(name), closure(name, 64))
    assert d.certified and d.value == DELAYS[name]
    assert str(d) == f"Certified({DELAYS[name]})"


@pytest.mark.parametrize("name", sorted(DELAYS))
def test_delay_is_minimal_and_persistent(name):
    F = closure(name, 64)
    d = DELAYS[name]
    for n in range(d, d + 4):
        assert all(synchronizing_cuts(F, w) for w in F.of_length(n))
    assert any(not synchronizing_cuts(F, w) for w in F.of_length(d - 1))


def test_delay_cap_needs_horizon():
    with pytest.raises(PreconditionError):
        synchronizing_delay(system("phi_s"), closure("phi_s", 10), cap=30)


def test_sync_cuts_examples():
    F = closure("phi_e", 20)
    assert synchronizing_cuts(F, word("210")) == {1}
    assert synchronizing_cuts(F, word("1")) == frozenset()
    assert synchronizing_cuts(F, word("2112")) == {1, 4}


@pytest.mark.parametrize("name", ACCEPTED + EXTRA[:2])
def test_interpretations_are_exactly_the_windows(name):
    sys = system(name)
    m = sys.morphism
    F = closure(name, 20)
    for n in range(1, 7):
        for w in F.of_length(n):
            got = {(it.cover, it.offset) for it in interpretations(F, w)}
            want = set()
            for k in range(1, n + 1):
                for z in F.of_length(k):
                    im = apply(m, z)
                    head, last = len(m.images[z[0]]), len(im) - len(m.images[z[-1]])
                    for off in range(head):
                        if off + n <= len(im) and off + n > last and im[off:off + n] == w:
                            want.add((z, off))
            assert got == want, sys.render(w)


@given(st.sampled_from(ACCEPTED), st.data())
@settings(max_examples=80)
def test_cut_persistence(name, data):
    F = closure(name, 40)
    n = data.draw(st.integers(1, 20))
    w = data.draw(st.sampled_from(F.of_length(n)))
    a = data.draw(st.sampled_from(sorted(F.lext(w))))
    ext = bytes([a]) + w
    b = data.draw(st.sampled_from(sorted(F.rext(ext))))
    ext = ext + bytes([b])
    inner = synchronizing_cuts(F, w)
    outer = synchronizing_cuts(F, ext)
    assert {c + 1 for c in inner} <= outer


@pytest.mark.parametrize("name", ACCEPTED + EXTRA)
def test_accepted_systems(name):
    rep = circularity_report(system(name), closure(name, 64))
    assert rep.verdict == CIRCULAR_NON_PUSHY and rep.accepted
    assert not rep.pushy.pushy and not rep.repetitiveness.evidence


def test_negative_verdicts():
    pushy = circularity_report(system("pushy"), closure("pushy", 64))
    assert pushy.pushy.pushy and pushy.verdict == REJECTED
    for name in REJECTED_NAMES:
        rep = circularity_report(system(name), closure(name, 64))
        assert rep.verdict == REJECTED and not rep.accepted
        assert rep.repetitiveness.evidence and rep.repetitiveness.witness == word("1")
        if name != "pushy":
            assert not rep.pushy.pushy


def test_growth_constants():
    assert growth_constant(system("thue_morse"), closure("thue_morse", 64)) == 1
    assert growth_constant(system("chacon"), closure("chacon", 64)) == 2
    assert growth_constant(system("phi_s"), closure("phi_s", 64)) == 2


def test_q_values():
    assert is_pushy(system("chacon")).q == 1
    assert is_pushy(system("thue_morse")).q == 0
    assert is_pushy(make_system(["0120", "1", "2"], "0")).q == 2
    pushy = is_pushy(make_system(["0121", "2", "2"], "0"))
    assert pushy.pushy and pushy.witness_letter == 0 and pushy.side == "L"


@given(fixed_point_systems(max_letters=3, max_image=3))
@settings(max_examples=80)
def test_pushy_matches_run_growth(sys):
    m = sys.morphism
    n = m.size
    classes = classify_letters(sys)
    runs = []
    w = sys.axiom
    for _ in range(15):
        w = apply(m, w)
        if len(w) > 200_000:
            break
        runs.append(bounded_run_length(w, classes))
    assume(len(runs) >= 3 * n + 3)
    # images of bounded blocks are bounded blocks at least as long
    assert all(x <= y for x, y in zip(runs, runs[1:]))
    v = is_pushy(sys)
    if v.pushy:
        # the bounded tail grows by a letter at least once per lap of the cycle
        assert runs[-1] >= (len(runs) - n) // n
    elif runs[-1] == runs[-2] == runs[-3]:
        assert v.q == runs[-1]


def test_injectivity():
    good = injectivity_check(system("phi_s"), closure("phi_s", 20))
    assert good.certified
    sys = make_system(["001", "001001"], "0")
    bad = injectivity_check(sys, factor_closure(sys, 12))
    assert not bad.certified
    u, v = bad.counterexample
    assert u != v and apply(sys.morphism, u) == apply(sys.morphism, v)

