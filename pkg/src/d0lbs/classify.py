"""Pushiness, synchronizing points and delays, injectivity and repetitiveness.

A factor ``w`` is read as a window into ``phi(z)`` for some factor ``z``
(an *interpretation*).  The image-block boundaries falling inside
``[0, |w|]`` form the interpretation's cut set; the synchronizing points of
``w`` are the cuts shared by all of its interpretations.  Requiring
``v1 w v2 = phi(z)`` with ``z`` in the language is the same quantification
as the definition over ``v1 w v2 in phi(L)``, with the cut read off ``z``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core import (
    BOUNDED,
    GROWING,
    D0LSystem,
    LimitExceeded,
    PreconditionError,
    Word,
    apply,
    classify_letters,
    occurring_letters,
    word,
)
from .language import FactorSet, index_of

DELAY_CAP = 30
POWER_THRESHOLD = 6
REPETITION_MAX_WORD_LEN = 20


class ConsistencyError(RuntimeError):
    """Internal contradiction, usually a horizon that is too small."""


@dataclass(frozen=True)
class Interpretation:
    cover: Word
    offset: int
    cuts: frozenset


@dataclass(frozen=True)
class PushyVerdict:
    pushy: bool
    q: int | None = None
    witness_letter: int | None = None
    side: str | None = None


@dataclass(frozen=True)
class DelayResult:
    certified: bool
    value: int  # the delay if certified, else the cap searched

    def __str__(self):
        return f"Certified({self.value})" if self.certified else f"NoneFoundUpTo({self.value})"


@dataclass(frozen=True)
class InjectivityVerdict:
    certified: bool
    horizon: int
    counterexample: tuple[Word, Word] | None = None


@dataclass(frozen=True)
class RepetitivenessVerdict:
    evidence: bool
    witness: Word | None = None
    power: Fraction | None = None
    reason: str = ""
    bounds: tuple[int, int, int] | None = None  # threshold, max word len, horizon


def bounded_run_length(w: Word, classes) -> int:
    best = cur = 0
    for c in w:
        if classes[c] == BOUNDED:
            cur += 1
            best = max(best, cur)
        else:
            cur = 0
    return best


def _cycle_letters(succ: dict[int, int]) -> set[int]:
    on_cycle = set()
    for start in succ:
        path = []
        seen = {}
        x = start
        while x in succ and x not in seen:
            seen[x] = len(path)
            path.append(x)
            x = succ[x]
        if x in seen:
            on_cycle.update(path[seen[x]:])
    return on_cycle


def is_pushy(sys: D0LSystem, max_length: int = 2_000_000) -> PushyVerdict:
    """Decide pushiness through the last/first growing letter maps.

    For a growing letter ``x`` let ``lam(x)`` be the last growing letter of
    ``phi(x)`` and ``s(x)`` the bounded suffix after it.  The bounded suffix
    of ``phi^k(x)`` collects a nonempty contribution for every ``j < k`` with
    ``s(lam^j(x))`` nonempty, so it is unbounded iff the ``lam``-orbit of ``x``
    reaches a cycle through some ``z`` with ``s(z)`` nonempty.  The mirror
    argument uses the first growing letter and bounded prefixes.  Blocks
    strictly between growing letters are bounded by these two quantities.
    """
    m = sys.morphism
    classes = classify_letters(sys)
    occ = occurring_letters(sys)
    growing = [x for x in sorted(occ) if classes[x] == GROWING]
    lam, rho, suf, pre = {}, {}, {}, {}
    for x in growing:
        im = m.images[x]
        idx = [i for i, c in enumerate(im) if classes[c] == GROWING]
        lam[x], suf[x] = im[idx[-1]], im[idx[-1] + 1:]
        rho[x], pre[x] = im[idx[0]], im[:idx[0]]
    for side, succ, extra in (("L", lam, suf), ("R", rho, pre)):
        for z in sorted(_cycle_letters(succ)):
            if extra[z]:
                return PushyVerdict(True, None, z, side)
    return PushyVerdict(False, _q_value(sys, classes, max_length))


def _q_value(sys: D0LSystem, classes, max_length: int) -> int:
    """Longest bounded-letter block in ``phi^K(axiom)`` once it is stable twice."""
    m = sys.morphism
    w = sys.axiom
    values = [bounded_run_length(w, classes)]
    k = 0
    while True:
        k += 1
        nxt = apply(m, w)
        if len(nxt) > max_length:
            break
        w = nxt
        values.append(bounded_run_length(w, classes))
        if k >= sys.size + 1 and values[-1] == values[-2] == values[-3]:
            break
    return values[-1]


def growth_constant(sys: D0LSystem, F: FactorSet) -> int:
    """``1 +`` the longest factor built only from letters with one-letter images.

    Any factor at least this long strictly grows under the morphism.
    """
    if is_pushy(sys).pushy:
        raise PreconditionError("growth constant is only defined for non-pushy systems")
    m = sys.morphism
    short = {a for a in range(m.size) if len(m.images[a]) == 1}
    best = 0
    for n in range(1, F.horizon + 1):
        if any(all(c in short for c in w) for w in F.by_length[n]):
            best = n
        else:
            break
    if best >= F.horizon:
        raise LimitExceeded(f"length-preserving factors reach the horizon {F.horizon}", bound=F.horizon)
    return best + 1


def interpretations(F: FactorSet, w) -> list[Interpretation]:
    """All minimal covers ``z`` in ``F`` with ``w`` a window of ``phi(z)``.

    The window touches the first and last block of ``phi(z)``.  Cuts are the
    block boundaries of ``phi(z)`` that fall in ``[0, |w|]``, measured in
    ``w``'s coordinates.
    """
    w = word(w)
    n = len(w)
    if n == 0:
        raise PreconditionError("the empty word has no interpretations")
    if n > F.horizon:
        raise PreconditionError(f"covers of a length-{n} word need horizon >= {n}")
    ims = F.system.morphism.images
    layers = F.by_length
    out = []

    def extend(z: bytes, pos: int, cuts: tuple, offset: int):
        rest = w[pos:]
        for b, im in enumerate(ims):
            zb = z + bytes([b])
            if len(im) >= len(rest):
                if im.startswith(rest) and zb in layers[len(zb)]:
                    c = cuts + (pos,) + ((n,) if len(im) == len(rest) else ())
                    out.append(Interpretation(zb, offset, frozenset(c)))
            elif rest.startswith(im) and zb in layers[len(zb)]:
                extend(zb, pos + len(im), cuts + (pos,), offset)

    for a, im in enumerate(ims):
        za = bytes([a])
        if za not in layers[1]:
            continue
        for j in range(len(im)):
            tail = im[j:]
            start = (0,) if j == 0 else ()
            if len(tail) >= n:
                if tail.startswith(w):
                    end = (n,) if len(tail) == n else ()
                    out.append(Interpretation(za, j, frozenset(start + end)))
            elif w.startswith(tail):
                extend(za, len(tail), start, j)
    return out


def synchronizing_cuts(F: FactorSet, w) -> frozenset:
    """Cuts common to every interpretation of ``w`` (boundary cuts included)."""
    interps = interpretations(F, w)
    if not interps:
        raise ConsistencyError(f"factor {F.system.render(word(w))} has no interpretation")
    common = set(interps[0].cuts)
    for it in interps[1:]:
        common &= it.cuts
        if not common:
            break
    return frozenset(common)


def synchronizing_delay(sys: D0LSystem, F: FactorSet, cap: int = DELAY_CAP) -> DelayResult:
    """Smallest ``D <= cap`` such that every length-``D`` factor has a cut.

    A cut of ``w`` persists in every extension ``awb`` (each interpretation of
    ``awb`` restricts to one of ``w``), so checking length exactly ``D`` is
    enough for all longer factors too.
    """
    if cap > F.horizon:
        raise PreconditionError(f"delay cap {cap} needs horizon >= {cap}")
    for d in range(1, cap + 1):
        layer = F.by_length[d]
        if not layer:
            break
        if all(synchronizing_cuts(F, w) for w in sorted(layer)):
            return DelayResult(True, d)
    return DelayResult(False, cap)


def injectivity_check(sys: D0LSystem, F: FactorSet, h: int | None = None) -> InjectivityVerdict:
    """Look for two distinct factors of length ``<= h`` with equal images."""
    h = F.horizon if h is None else min(h, F.horizon)
    m = sys.morphism
    seen: dict[Word, Word] = {}
    for n in range(h + 1):
        for z in sorted(F.by_length[n]):
            im = apply(m, z)
            other = seen.setdefault(im, z)
            if other != z:
                return InjectivityVerdict(False, h, (other, z))
    return InjectivityVerdict(True, h)


def repetitiveness_bounded(sys: D0LSystem, F: FactorSet, power_threshold: int = POWER_THRESHOLD,
                           max_word_len: int = REPETITION_MAX_WORD_LEN,
                           pushy: PushyVerdict | None = None) -> RepetitivenessVerdict:
    """Bounded semi-decision for strong repetitiveness.

    Positive evidence is either pushiness (which forces strong
    repetitiveness) or a factor of length ``<= max_word_len`` whose power of
    exponent ``power_threshold`` lies in the language.
    """
    bounds = (power_threshold, max_word_len, F.horizon)
    pushy = is_pushy(sys) if pushy is None else pushy
    witness = None
    for n in range(1, min(max_word_len, F.horizon) + 1):
        for w in sorted(F.by_length[n]):
            idx = index_of(F, w, power_threshold)
            if idx.hit_cap:
                witness = (w, idx.value)
                break
        if witness:
            break
    if witness:
        return RepetitivenessVerdict(True, witness[0], witness[1], "power", bounds)
    if pushy.pushy:
        return RepetitivenessVerdict(True, None, None, "pushy", bounds)
    return RepetitivenessVerdict(False, bounds=bounds)


CIRCULAR_NON_PUSHY = "circular-non-pushy"
REJECTED = "not-circular-and-non-pushy"
UNDECIDED = "undecided"


@dataclass
class ClassificationReport:
    pushy: PushyVerdict
    growth_constant: int | None
    delay: DelayResult | None
    repetitiveness: RepetitivenessVerdict
    injectivity: InjectivityVerdict
    verdict: str
    horizon: int
    caps: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return self.verdict == CIRCULAR_NON_PUSHY and self.delay is not None and self.delay.certified


def circularity_report(sys: D0LSystem, F: FactorSet, delay_cap: int = DELAY_CAP,
                       power_threshold: int = POWER_THRESHOLD,
                       max_word_len: int = REPETITION_MAX_WORD_LEN) -> ClassificationReport:
    """Assemble every verdict into one report.

    Non-pushy with no repetition evidence is reported circular: a system
    that is not strongly repetitive is k-power-free for some k, and
    k-power-free systems are circular.  The certified delay backs this up
    within the searched caps.
    """
    notes = []
    pushy = is_pushy(sys)
    rep = repetitiveness_bounded(sys, F, power_threshold, max_word_len, pushy)
    inj = injectivity_check(sys, F)
    if pushy.pushy and not rep.evidence:
        notes.append("inconsistent: pushy system without repetition evidence")
    gc = None
    if not pushy.pushy:
        try:
            gc = growth_constant(sys, F)
        except LimitExceeded as exc:
            notes.append(str(exc))
    delay = None
    if inj.certified:
        delay = synchronizing_delay(sys, F, delay_cap)
    else:
        notes.append("morphism not injective on the language; synchronizing points undefined")
    if pushy.pushy or rep.evidence:
        verdict = REJECTED
    elif inj.certified:
        verdict = CIRCULAR_NON_PUSHY
        if not delay.certified:
            notes.append(f"no synchronizing delay found up to {delay.value}")
    else:
        verdict = UNDECIDED
    notes.append("boundary cuts count as synchronizing points")
    caps = {"delay_cap": delay_cap, "power_threshold": power_threshold, "max_word_len": max_word_len}
    return ClassificationReport(pushy, gc, delay, rep, inj, verdict, F.horizon, caps, notes)
