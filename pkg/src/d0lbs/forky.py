"""Forky sets of prolongation pairs and the graphs of left/right prolongations.

Everything here is written once for both sides.  On side ``"L"`` words are
compared by suffixes and extended to the left; on side ``"R"`` by prefixes
and extended to the right.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

from .core import D0LSystem, InputError, Morphism, Word, apply, lcp, lcs, occurring_letters, word
from .language import FactorSet

log = logging.getLogger(__name__)

MAX_REFINED_WORD_LEN = 12


class ForkyError(RuntimeError):
    """No valid forky set could be built within the limits."""


def _check_side(side):
    if side not in ("L", "R"):
        raise InputError(f"side must be 'L' or 'R', not {side!r}")


def is_tail(x: Word, y: Word, side: str) -> bool:
    """``x`` is a suffix (L) or prefix (R) of ``y``."""
    return y.endswith(x) if side == "L" else y.startswith(x)


def boundary(w: Word, side: str) -> int:
    return w[-1] if side == "L" else w[0]


@dataclass(frozen=True, order=True)
class PPair:
    """Unordered pair of nonempty prolongations, stored in lexicographic order."""

    side: str
    a: Word
    b: Word

    def __post_init__(self):
        _check_side(self.side)
        a, b = word(self.a), word(self.b)
        if not a or not b:
            raise InputError("prolongation words must be nonempty")
        if boundary(a, self.side) == boundary(b, self.side):
            raise InputError("the two words of a pair must differ in their boundary letter")
        if b < a:
            a, b = b, a
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def of(cls, side: str, a, b) -> "PPair":
        return cls(side, word(a), word(b))

    @property
    def words(self) -> tuple[Word, Word]:
        return self.a, self.b

    def max_len(self) -> int:
        return max(len(self.a), len(self.b))

    def render(self, sys: D0LSystem | None = None) -> str:
        r = sys.render if sys is not None else (lambda w: "".join(str(c) for c in w))
        return f"({r(self.a)},{r(self.b)})"


def f_value(m: Morphism, p: PPair) -> Word:
    """Longest common suffix (L) or prefix (R) of the images of the pair."""
    ia, ib = apply(m, p.a), apply(m, p.b)
    return lcs(ia, ib) if p.side == "L" else lcp(ia, ib)


def stripped(m: Morphism, p: PPair) -> tuple[Word, Word]:
    """Images of ``p.a``, ``p.b`` with the common f-value removed."""
    f = len(f_value(m, p))
    ia, ib = apply(m, p.a), apply(m, p.b)
    if p.side == "L":
        return ia[:len(ia) - f], ib[:len(ib) - f]
    return ia[f:], ib[f:]


def _related(x: Word, y: Word, side: str) -> bool:
    return is_tail(x, y, side) or is_tail(y, x, side)


def aligned(p, q, side: str | None = None) -> bool:
    """L- or R-alignment of two pairs, trying both matchings.

    ``p`` and ``q`` are :class:`PPair` or plain 2-tuples of words; ``side`` is
    taken from whichever argument is a PPair when not given.
    """
    if side is None:
        side = p.side if isinstance(p, PPair) else q.side
    p1, p2 = p.words if isinstance(p, PPair) else map(word, p)
    q1, q2 = q.words if isinstance(q, PPair) else map(word, q)
    return ((_related(p1, q1, side) and _related(p2, q2, side))
            or (_related(p1, q2, side) and _related(p2, q1, side)))


def tail_matches(pairs, x1: Word, x2: Word, side: str) -> list[tuple[PPair, bool]]:
    """Members that are a componentwise tail of ``(x1, x2)``; the flag says crossed."""
    out = []
    for q in pairs:
        if is_tail(q.a, x1, side) and is_tail(q.b, x2, side):
            out.append((q, False))
        elif is_tail(q.a, x2, side) and is_tail(q.b, x1, side):
            out.append((q, True))
    return out


@dataclass(frozen=True)
class ForkySet:
    side: str
    pairs: tuple[PPair, ...]
    construction: str = "refined"

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(sorted(set(self.pairs))))
        if any(p.side != self.side for p in self.pairs):
            raise InputError("pair side does not match forky set side")

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)

    def __contains__(self, p):
        return p in self.pairs

    def max_len(self) -> int:
        return max((p.max_len() for p in self.pairs), default=0)


@dataclass
class ForkyCheck:
    ok: bool
    violations: list[str]

    def __bool__(self):
        return self.ok


def _representatives(F: FactorSet, length: int, side: str) -> list[Word]:
    """Factors of the given length plus shorter ones that cannot be prolonged.

    Every factor of length ``<= length`` is a tail of one of these.
    """
    reps = list(F.by_length[length])
    for n in range(1, length):
        for w in F.by_length[n]:
            ext = F.lext(w) if side == "L" else F.rext(w)
            if not ext:
                reps.append(w)
    return sorted(reps)


def is_forky(fs: ForkySet, F: FactorSet, m: Morphism) -> ForkyCheck:
    """Check the four defining conditions against the factor set.

    Coverage is tested on pairs of words of length ``max member length + 1``
    (plus unprolongable shorter factors): any longer pair has tails of that
    length, and a member aligned with the tails is aligned with the pair.
    """
    side = fs.side
    render = F.system.render
    bad = []
    pairs = fs.pairs
    for p in pairs:
        for w in p.words:
            if len(w) > F.horizon or w not in F:
                bad.append(f"member word {render(w)} of {p.render(F.system)} is not a factor")
        # (i) is enforced by PPair itself
    for p, q in itertools.combinations(pairs, 2):
        if aligned(p, q):
            bad.append(f"(ii) {p.render(F.system)} and {q.render(F.system)} are aligned")
    test_len = fs.max_len() + 1
    if test_len > F.horizon:
        bad.append(f"(iii) coverage needs horizon >= {test_len}")
    else:
        reps = _representatives(F, test_len, side)
        by_letter: dict[int, list[Word]] = {}
        for w in reps:
            by_letter.setdefault(boundary(w, side), []).append(w)
        letters = sorted(by_letter)
        for c1, c2 in itertools.combinations(letters, 2):
            for v1 in by_letter[c1]:
                for v2 in by_letter[c2]:
                    if not any(aligned(q, (v1, v2), side) for q in pairs):
                        bad.append(f"(iii) ({render(v1)},{render(v2)}) is aligned with no member")
    for p in pairs:
        x1, x2 = stripped(m, p)
        if not tail_matches(pairs, x1, x2, side):
            bad.append(f"(iv) fails at {p.render(F.system)}")
    return ForkyCheck(not bad, bad)


def _prolong(F: FactorSet, w: Word, side: str) -> list[Word]:
    if side == "L":
        return [bytes([a]) + w for a in sorted(F.lext(w))]
    return [w + bytes([a]) for a in sorted(F.rext(w))]


def _deficient(pairs, p: PPair, m: Morphism) -> tuple[bool, bool]:
    """Which words of a pair failing (iv) should be prolonged."""
    side = p.side
    x1, x2 = stripped(m, p)
    if not x1 or not x2:
        return (not x1, not x2)
    ext1 = ext2 = False
    for q in pairs:
        for (q1, q2) in ((q.a, q.b), (q.b, q.a)):
            if _related(q1, x1, side) and _related(q2, x2, side):
                # the stripped word is too short exactly where it is a proper tail
                ext1 |= len(x1) < len(q1)
                ext2 |= len(x2) < len(q2)
    if not (ext1 or ext2):
        return (True, True)
    return (ext1, ext2)


def _refine(F: FactorSet, m: Morphism, side: str, letters, max_word_len: int):
    pairs = {PPair(side, bytes([a]), bytes([b])) for a, b in itertools.combinations(sorted(letters), 2)}
    while True:
        failing = [p for p in sorted(pairs) if not tail_matches(pairs, *stripped(m, p), side)]
        if not failing:
            return pairs
        new = set(pairs)
        for p in failing:
            e1, e2 = _deficient(pairs, p, m)
            firsts = _prolong(F, p.a, side) if e1 else [p.a]
            seconds = _prolong(F, p.b, side) if e2 else [p.b]
            new.discard(p)
            for u in firsts:
                for v in seconds:
                    new.add(PPair(side, u, v))
        pairs = new
        longest = max((p.max_len() for p in pairs), default=0)
        if longest > max_word_len:
            return None
        if longest + 1 > F.horizon:
            return None


def uniform_forky_set(F: FactorSet, side: str, length: int) -> ForkySet:
    """All pairs of length-``length`` factors with distinct boundary letters."""
    words = F.of_length(length)
    pairs = [PPair(side, u, v) for u, v in itertools.combinations(words, 2)
             if boundary(u, side) != boundary(v, side)]
    return ForkySet(side, tuple(pairs), construction=f"uniform M={length}")


def build_forky_set(sys: D0LSystem, F: FactorSet, side: str,
                    max_word_len: int = MAX_REFINED_WORD_LEN,
                    delay: int | None = None, growth_constant: int | None = None) -> ForkySet:
    """Construct a forky set by refining letter pairs.

    Starts from all pairs of occurring letters.  Pairs that fail the
    closure condition (iv) have their deficient word(s) prolonged to every
    factor-valid one-letter prolongation, all failing pairs in one round,
    until the set is stable.  If a word outgrows ``max_word_len`` we fall
    back to all pairs of factors of length ``delay * growth_constant``.
    The result is always validated with :func:`is_forky`.
    """
    _check_side(side)
    m = sys.morphism
    letters = occurring_letters(sys)
    refined = _refine(F, m, side, letters, max_word_len)
    if refined is not None:
        fs = ForkySet(side, tuple(refined))
        check = is_forky(fs, F, m)
        if check.ok:
            return fs
        log.warning("refined %s-forky set failed validation: %s", side, check.violations[:3])
    if delay is None or growth_constant is None:
        raise ForkyError(f"refinement did not converge within word length {max_word_len} "
                         "and no delay/growth constant was given for the uniform construction")
    length = delay * growth_constant
    if length + 1 > F.horizon:
        raise ForkyError(f"uniform construction needs horizon > {length}")
    fs = uniform_forky_set(F, side, length)
    check = is_forky(fs, F, m)
    if not check.ok:
        raise ForkyError("no valid forky set: " + "; ".join(check.violations[:5]))
    return fs


@dataclass(frozen=True)
class Edge:
    target: PPair
    label: Word
    crossed: bool  # True when target.a sits under the image of source.b


@dataclass(frozen=True)
class ProlongationGraph:
    side: str
    forky: ForkySet
    edges: dict  # PPair -> Edge

    @property
    def vertices(self) -> tuple[PPair, ...]:
        return self.forky.pairs

    def g(self, p: PPair) -> PPair:
        try:
            return self.edges[p].target
        except KeyError:
            raise InputError(f"{p} is not a vertex of the {self.side} graph") from None

    def f(self, p: PPair) -> Word:
        try:
            return self.edges[p].label
        except KeyError:
            raise InputError(f"{p} is not a vertex of the {self.side} graph") from None

    def edge(self, p: PPair) -> Edge:
        try:
            return self.edges[p]
        except KeyError:
            raise InputError(f"{p} is not a vertex of the {self.side} graph") from None

    def in_edges(self, target: PPair) -> list[tuple[PPair, Edge]]:
        return [(s, e) for s, e in sorted(self.edges.items()) if e.target == target]

    def out_degree(self, p: PPair) -> int:
        return 1 if p in self.edges else 0


def build_graph(fs: ForkySet, m: Morphism) -> ProlongationGraph:
    """One labelled out-edge per vertex.

    The target is the unique member that is a tail of the stripped image
    pair; uniqueness follows from non-alignment plus coverage.
    """
    edges = {}
    for p in fs.pairs:
        x1, x2 = stripped(m, p)
        matches = tail_matches(fs.pairs, x1, x2, fs.side)
        if len(matches) != 1:
            raise ForkyError(f"vertex {p} has {len(matches)} candidate out-edges")
        q, crossed = matches[0]
        edges[p] = Edge(q, f_value(m, p), crossed)
    return ProlongationGraph(fs.side, fs, edges)


def to_dot(graph: ProlongationGraph, sys: D0LSystem | None = None) -> str:
    """Deterministic DOT rendering; empty labels print as ``eps``."""
    r = sys.render if sys is not None else (lambda w: "".join(str(c) for c in w))
    name = "GL" if graph.side == "L" else "GR"
    lines = [f"digraph {name} {{"]
    for v in graph.vertices:
        lines.append(f'  "{v.render(sys)}";')
    for v in graph.vertices:
        e = graph.edges[v]
        label = r(e.label) or "eps"
        style = ", style=dashed" if e.crossed else ""
        lines.append(f'  "{v.render(sys)}" -> "{e.target.render(sys)}" [label="{label}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
