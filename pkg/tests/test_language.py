import pytest
from hypothesis import given, settings, strategies as st

from d0lbs.core import LimitExceeded, PreconditionError, apply, make_system, word
from d0lbs.gallery import system
from d0lbs.language import (
    bispecial_bruteforce,
    complexity,
    critical_exponent_estimate,
    factor_closure,
    index_of,
    special_factors,
)

from conftest import closure, fixed_point_systems


def factors_upto(w: bytes, h: int) -> set:
    out = {b""}
    for n in range(1, h + 1):
        out.update(w[i:i + n] for i in range(len(w) - n + 1))
    return out


@given(fixed_point_systems(max_image=3), st.integers(2, 7))
@settings(max_examples=60)
def test_closure_matches_iterates(sys, h):
    """Soundness always; completeness once the factor sets of iterates repeat.

    The length-<=h factors of phi^k(a) are a function of those of
    phi^{k-1}(a), so a repeat means the union has stopped growing.
    """
    F = factor_closure(sys, h)
    stored = set().union(*F.by_length)
    w = sys.axiom
    seen = [factors_upto(w, h)]
    complete = False
    for _ in range(12):
        w = apply(sys.morphism, w)
        if len(w) > 40_000:
            break
        cur = factors_upto(w, h)
        if cur in seen:
            complete = True
            break
        seen.append(cur)
    union = set().union(*seen)
    assert union <= stored
    if complete:
        assert union == stored


@given(fixed_point_systems(max_image=3), st.integers(2, 6), st.integers(1, 5))
@settings(max_examples=40)
def test_closure_monotone_in_horizon(sys, h, extra):
    small = factor_closure(sys, h)
    big = factor_closure(sys, h + extra)
    assert small.by_length == big.by_length[:h + 1]


def test_complexity_values():
    tm = closure("thue_morse", 12)
    assert [complexity(tm, n) for n in range(11)] == [1, 2, 4, 6, 10, 12, 16, 20, 22, 24, 28]
    fib = closure("fibonacci", 30)
    assert all(complexity(fib, n) == n + 1 for n in range(31))


def test_extension_queries():
    F = closure("phi_e", 10)
    assert F.lext(word("1")) == {0, 1, 2}
    assert F.rext(word("1")) == {0, 1, 2}
    assert F.is_bispecial(b"")
    with pytest.raises(PreconditionError):
        F.lext(bytes(10))
    with pytest.raises(PreconditionError):
        bytes(11) in F


def test_extensions_agree_with_membership():
    F = closure("phi_s", 12)
    for n in range(11):
        for w in F.of_length(n):
            assert F.lext(w) == {a for a in range(3) if bytes([a]) + w in F}
            assert F.rext(w) == {a for a in range(3) if w + bytes([a]) in F}


def test_bruteforce_bispecials_by_definition():
    F = closure("phi_p", 14)
    bs = bispecial_bruteforce(F, 12)
    for n in range(13):
        for w in F.of_length(n):
            assert (w in bs) == (len(F.lext(w)) > 1 and len(F.rext(w)) > 1)
    ls = special_factors(F, 6, "L")
    assert ls[0] == b"" and all(F.is_left_special(w) for w in ls)


def test_lext_of_p_letters():
    F = closure("phi_p", 8)
    sym = system("phi_p").symbols
    got = {sym[a]: {sym[b] for b in F.lext(bytes([a]))} for a in range(5)}
    assert got == {"1": set("12345"), "2": set("145"), "3": set("145"), "4": set("123"), "5": set("123")}


def test_budget_exceeded_carries_partial():
    with pytest.raises(LimitExceeded) as info:
        factor_closure(system("phi_p"), 40, budget=2000)
    assert info.value.partial is not None


def test_index_and_exponent():
    tm = closure("thue_morse", 40)
    assert index_of(tm, word("0")).value == 2
    assert index_of(tm, word("01")).value == 2  # overlap-free
    ex = critical_exponent_estimate(tm)
    assert ex.estimate == 2 and not ex.unbounded_evidence
    d = factor_closure(make_system(["01", "11"], "0"), 40)
    ex = critical_exponent_estimate(d)
    assert ex.unbounded_evidence and ex.witness == word("1")


def test_index_horizon_flag():
    d = factor_closure(make_system(["01", "11"], "0"), 10)
    idx = index_of(d, word("1"), cap=20)
    assert idx.hit_horizon and not idx.hit_cap and idx.value == 10
