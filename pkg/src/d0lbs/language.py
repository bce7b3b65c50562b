"""Exact bounded-horizon factor languages and the queries built on them."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .core import (
    D0LSystem,
    LimitExceeded,
    PreconditionError,
    InputError,
    Word,
    apply,
    word,
)

#: default ceiling on the number of stored factors
FACTOR_BUDGET = 5_000_000


@dataclass(frozen=True, eq=False)
class FactorSet:
    """All factors of length ``<= horizon`` of a D0L language.

    ``by_length[n]`` is the frozenset of factors of length ``n``; ``lext`` and
    ``rext`` map each factor of length ``< horizon`` to its extension letters.
    """

    system: D0LSystem
    horizon: int
    by_length: tuple[frozenset, ...]
    lext_index: dict = field(repr=False)
    rext_index: dict = field(repr=False)

    def __contains__(self, w) -> bool:
        w = word(w)
        if len(w) > self.horizon:
            raise PreconditionError(f"word of length {len(w)} exceeds horizon {self.horizon}")
        return w in self.by_length[len(w)]

    def __len__(self) -> int:
        return sum(len(s) for s in self.by_length)

    def __iter__(self):
        for layer in self.by_length:
            yield from sorted(layer)

    def of_length(self, n: int) -> list[Word]:
        if n > self.horizon:
            raise PreconditionError(f"length {n} exceeds horizon {self.horizon}")
        return sorted(self.by_length[n])

    def max_length(self) -> int:
        """Longest stored length (below horizon only for finite languages)."""
        return max(n for n, layer in enumerate(self.by_length) if layer)

    def lext(self, w) -> frozenset:
        w = word(w)
        self._check_ext(w)
        return self.lext_index.get(w, frozenset())

    def rext(self, w) -> frozenset:
        w = word(w)
        self._check_ext(w)
        return self.rext_index.get(w, frozenset())

    def _check_ext(self, w):
        if len(w) + 1 > self.horizon:
            raise PreconditionError(f"extensions of a length-{len(w)} word need horizon >= {len(w) + 1}")

    def is_left_special(self, w) -> bool:
        return len(self.lext(w)) >= 2

    def is_right_special(self, w) -> bool:
        return len(self.rext(w)) >= 2

    def is_bispecial(self, w) -> bool:
        return self.is_left_special(w) and self.is_right_special(w)


def factor_closure(sys: D0LSystem, horizon: int, budget: int = FACTOR_BUDGET) -> FactorSet:
    """Compute ``L_{<=h}(G)`` exactly.

    Works on a set of "top" words whose factors make up the language.  A
    length-t window of ``phi^{k+1}(w)`` meets at most t image blocks, so it
    lies inside ``phi(x)`` for a factor ``x`` of ``phi^k(w)`` with
    ``|x| <= t <= h``.  Since ``x`` is a factor of some top word, the windows
    of length ``h`` (or the whole image, when shorter) of the images of top
    words cover every new factor.  Iterating to a fixpoint therefore yields
    the language up to length ``h`` with nothing missing and nothing extra.
    """
    if horizon < 1:
        raise PreconditionError("horizon must be >= 1")
    m = sys.morphism
    h = horizon

    def windows(w: Word):
        if len(w) <= h:
            return (w,)
        return {w[i:i + h] for i in range(len(w) - h + 1)}

    tops = set(windows(sys.axiom))
    todo = list(tops)
    while todo:
        w = todo.pop()
        for t in windows(apply(m, w)):
            if t not in tops:
                tops.add(t)
                todo.append(t)
        if len(tops) * h > budget:
            raise LimitExceeded(f"factor closure exceeded budget of {budget} letters",
                                bound=budget, partial=_assemble(sys, h, tops))
    return _assemble(sys, h, tops)


def _assemble(sys: D0LSystem, h: int, tops) -> FactorSet:
    layers: list[set] = [set() for _ in range(h + 1)]
    for t in tops:
        layers[len(t)].add(t)
    # every factor of length n is a prefix or suffix of a factor of length n+1
    # unless it is itself a top word
    for n in range(h, 0, -1):
        below = layers[n - 1]
        for w in layers[n]:
            below.add(w[:-1])
            below.add(w[1:])
    lext: dict = {}
    rext: dict = {}
    for n in range(1, h + 1):
        for w in layers[n]:
            lext.setdefault(w[1:], set()).add(w[0])
            rext.setdefault(w[:-1], set()).add(w[-1])
    lext = {k: frozenset(v) for k, v in lext.items()}
    rext = {k: frozenset(v) for k, v in rext.items()}
    return FactorSet(sys, h, tuple(frozenset(s) for s in layers), lext, rext)


def complexity(F: FactorSet, n: int) -> int:
    if n > F.horizon:
        raise PreconditionError(f"length {n} exceeds horizon {F.horizon}")
    return len(F.by_length[n])


def bispecial_bruteforce(F: FactorSet, maxlen: int) -> dict[Word, tuple[frozenset, frozenset]]:
    """Every bispecial factor of length ``<= maxlen`` with its extension sets.

    Reads extensions straight off the factor set; this is the oracle the
    generated bispecials are compared against.
    """
    if maxlen + 2 > F.horizon:
        raise PreconditionError(f"maxlen {maxlen} needs horizon >= {maxlen + 2}")
    out = {}
    for n in range(maxlen + 1):
        for w in F.by_length[n]:
            le, re_ = F.lext(w), F.rext(w)
            if len(le) >= 2 and len(re_) >= 2:
                out[w] = (le, re_)
    return out


def special_factors(F: FactorSet, maxlen: int, side: str) -> list[Word]:
    """Left (``side="L"``) or right special factors up to ``maxlen``."""
    test = F.is_left_special if side == "L" else F.is_right_special
    return [w for n in range(maxlen + 1) for w in sorted(F.by_length[n]) if test(w)]


class PowerIndex(NamedTuple):
    value: Fraction
    hit_cap: bool
    hit_horizon: bool


def index_of(F: FactorSet, w, cap: Fraction | int = 8) -> PowerIndex:
    """Largest ``r = p/|w|`` with the length-``p`` prefix of ``w^omega`` in ``F``.

    ``p`` is cut at ``cap*|w|`` and at the horizon; the flags say which limit
    (if any) stopped the scan.
    """
    w = word(w)
    if not w:
        raise InputError("index of the empty word is undefined")
    cap = Fraction(cap)
    n = len(w)
    cap_len = int(cap * n)
    limit = min(cap_len, F.horizon)
    p = 0
    while p < limit:
        # w^omega[:p+1]
        q = p + 1
        candidate = w * (q // n) + w[: q % n]
        if candidate not in F.by_length[q]:
            break
        p = q
    hit_cap = p >= cap_len
    hit_horizon = not hit_cap and p >= F.horizon
    return PowerIndex(Fraction(p, n), hit_cap, hit_horizon)


@dataclass
class ExponentReport:
    horizon: int
    max_word_len: int
    cap: Fraction
    estimate: Fraction
    argmax: Word
    unbounded_evidence: bool
    witness: Word | None
    horizon_limited: list[Word]
    indexes: dict[Word, Fraction] = field(repr=False, default_factory=dict)


def critical_exponent_estimate(F: FactorSet, max_word_len: int = 20, cap: Fraction | int = 8) -> ExponentReport:
    """Max of :func:`index_of` over nonempty factors up to ``max_word_len``.

    Sets ``unbounded_evidence`` iff some word reached the cap.  Words whose
    scan was cut by the horizon before the cap are listed separately.
    """
    cap = Fraction(cap)
    best = Fraction(0)
    argmax = b""
    witness = None
    limited = []
    indexes = {}
    for n in range(1, min(max_word_len, F.horizon) + 1):
        for w in sorted(F.by_length[n]):
            idx = index_of(F, w, cap)
            indexes[w] = idx.value
            if idx.value > best:
                best, argmax = idx.value, w
            if idx.hit_cap and witness is None:
                witness = w
            elif idx.hit_horizon:
                limited.append(w)
    return ExponentReport(F.horizon, max_word_len, cap, best, argmax, witness is not None,
                          witness, limited, indexes)
