"""Infinite left/right special branches read off the prolongation graphs.

An infinite LS pair ``((v1,v2), w)`` has every prefix of the right-infinite
word ``w`` extended on the left by both ``v1`` and ``v2``.  Its vertex lies
on a cycle of GL.  When every label on that cycle is empty ``w`` is a
periodic point of the morphism; otherwise ``w`` is the unique solution of
``w = s phi^l(w)`` with ``s`` assembled from the cycle labels.

RS pairs are handled by reversal: reversing every image turns GR into GL,
so the right side is computed in reversed coordinates and flipped back.
Right branches are left-infinite and are reported through their suffixes.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .classify import ConsistencyError
from .core import (
    D0LSystem,
    Morphism,
    PreconditionError,
    Word,
    apply,
    iterate,
    periodic_points,
    periodic_prefix,
)
from .forky import PPair, ProlongationGraph
from .language import FactorSet


VERIFY_LEN = 200


@dataclass(frozen=True)
class Cycle:
    side: str
    vertices: tuple[PPair, ...]
    labels: tuple[Word, ...]  # labels[i] is the label of the edge out of vertices[i]

    @property
    def length(self) -> int:
        return len(self.vertices)

    @property
    def all_empty(self) -> bool:
        return not any(self.labels)

    def rooted_at(self, v: PPair) -> "Cycle":
        i = self.vertices.index(v)
        return Cycle(self.side, self.vertices[i:] + self.vertices[:i], self.labels[i:] + self.labels[:i])


@dataclass(frozen=True, order=True)
class PeriodicPoint:
    seed: int
    period: int


@dataclass(frozen=True, order=True)
class Equation:
    s: Word
    ell: int


@dataclass(frozen=True)
class InfiniteLSPair:
    """A prolongation pair together with the generator of its branch.

    The name is kept for both sides; ``side`` says which one.  For ``"R"``
    the branch is left-infinite and ``Equation.s`` is stored in reading
    order, so the branch solves ``w = phi^l(w) s``.
    """

    side: str
    vertex: PPair
    generator: PeriodicPoint | Equation
    verified_to: int

    @property
    def kind(self) -> str:
        return "periodic" if isinstance(self.generator, PeriodicPoint) else "equation"


@dataclass(frozen=True)
class Branch:
    """One infinite special word with every pair that witnesses it."""

    side: str
    generator: PeriodicPoint | Equation
    vertices: tuple[PPair, ...]

    @property
    def extensions(self) -> frozenset:
        """Boundary letters of the witnessing prolongations."""
        pos = -1 if self.side == "L" else 0
        return frozenset(w[pos] for v in self.vertices for w in v.words)


@dataclass
class BranchReport:
    side: str
    verify_len: int
    horizon: int
    pairs: list[InfiniteLSPair]
    rejected: list[tuple[PPair, PeriodicPoint, int]] = field(default_factory=list)

    @property
    def branches(self) -> list[Branch]:
        return group_branches(self.pairs)


def _reversed(m: Morphism) -> Morphism:
    return Morphism(tuple(im[::-1] for im in m.images))


def cycles(graph: ProlongationGraph) -> list[Cycle]:
    """Every cycle of the functional graph, each rooted at its least vertex."""
    found = {}
    for start in graph.vertices:
        pos = {}
        path = []
        v = start
        while v not in pos:
            pos[v] = len(path)
            path.append(v)
            v = graph.g(v)
        loop = path[pos[v]:]
        root = min(loop)
        if root in found:
            continue
        i = loop.index(root)
        loop = loop[i:] + loop[:i]
        found[root] = Cycle(graph.side, tuple(loop), tuple(graph.f(x) for x in loop))
    return [found[k] for k in sorted(found)]


def cycle_prefix_s(cycle: Cycle, m: Morphism, start: PPair | None = None) -> Word:
    """``s = f(g^{l-1}V) phi(f(g^{l-2}V)) ... phi^{l-1}(f(V))`` for root ``V``.

    On the right side the factors come in the opposite order,
    ``phi^{l-1}(f(V)) ... f(g^{l-1}V)``, which is what the ``l``-fold
    f-image prepends on that side.
    """
    c = cycle.rooted_at(start) if start is not None else cycle
    ell = c.length
    parts = [iterate(m, c.labels[j], ell - 1 - j) for j in range(ell)]
    if c.side == "L":
        parts.reverse()
    return b"".join(parts)


def _seed_points(m: Morphism, side: str) -> list[tuple[int, int]]:
    return periodic_points(m if side == "L" else _reversed(m))


def branch_prefix(pair: InfiniteLSPair, m: Morphism, length: int) -> Word:
    """First ``length`` letters of the branch (last ``length`` for the right side)."""
    if length < 0:
        raise PreconditionError("length must be >= 0")
    mm = m if pair.side == "L" else _reversed(m)
    gen = pair.generator
    if isinstance(gen, PeriodicPoint):
        out = periodic_prefix(mm, gen.seed, gen.period, length)
    else:
        s = gen.s if pair.side == "L" else gen.s[::-1]
        if not s:
            raise PreconditionError("equation-type branch needs a nonempty s")
        out = s[:length]
        while len(out) < length:
            w = out
            for _ in range(gen.ell):
                w = apply(mm, w)[:length]
            nxt = (s + w)[:length]
            if nxt == out:
                break
            out = nxt
    return out if pair.side == "L" else out[::-1]


def _extends(F: FactorSet, vertex: PPair, branch: Word) -> bool:
    if vertex.side == "L":
        return all(w + branch in F for w in vertex.words)
    return all(branch + w in F for w in vertex.words)


def _first_failure(F: FactorSet, vertex: PPair, pair: InfiniteLSPair, m: Morphism, verify_len: int) -> int | None:
    """Shortest failing prefix length, or None when all prefixes up to ``verify_len`` pass.

    Factors are closed under taking factors, so the full-length check decides
    the whole range; the bisection only names the failing length.
    """
    full = branch_prefix(pair, m, verify_len)
    if _extends(F, vertex, full):
        return None
    cut = (lambda k: full[:k]) if vertex.side == "L" else (lambda k: full[len(full) - k:])
    lo, hi = 0, verify_len
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _extends(F, vertex, cut(mid)):
            lo = mid
        else:
            hi = mid
    return hi


def infinite_ls_pairs(sys: D0LSystem, F: FactorSet, graph: ProlongationGraph,
                      verify_len: int = VERIFY_LEN) -> BranchReport:
    """All infinite special pairs on ``graph``'s side, prefix-verified to ``verify_len``.

    Vertices on an all-empty cycle are paired with each periodic point and
    kept when verification passes; rejected pairings are listed with the
    first failing prefix length.  Every other cycle vertex yields exactly one
    equation-type pair, and a verification failure there is an error.
    """
    need = verify_len + graph.forky.max_len() + 1
    if need > F.horizon:
        raise PreconditionError(f"verify length {verify_len} needs horizon >= {need}")
    m = sys.morphism
    side = graph.side
    seeds = _seed_points(m, side)
    pairs, rejected = [], []
    for cyc in cycles(graph):
        for v in cyc.vertices:
            if cyc.all_empty:
                for seed, period in seeds:
                    cand = InfiniteLSPair(side, v, PeriodicPoint(seed, period), verify_len)
                    fail = _first_failure(F, v, cand, m, verify_len)
                    if fail is None:
                        pairs.append(cand)
                    else:
                        rejected.append((v, cand.generator, fail))
            else:
                s = cycle_prefix_s(cyc, m, v)
                cand = InfiniteLSPair(side, v, Equation(s, cyc.length), verify_len)
                fail = _first_failure(F, v, cand, m, verify_len)
                if fail is not None:
                    raise ConsistencyError(
                        f"equation branch at {v.render(sys)} fails to be special at prefix length {fail}")
                pairs.append(cand)
    return BranchReport(side, verify_len, F.horizon, pairs, rejected)


def group_branches(pairs) -> list[Branch]:
    """Merge pairs that share a generator; the generator fixes the branch."""
    groups: dict = {}
    for p in pairs:
        groups.setdefault((p.side, p.generator), []).append(p.vertex)
    out = [Branch(side, gen, tuple(sorted(vs))) for (side, gen), vs in groups.items()]
    return sorted(out, key=lambda b: (b.side, b.generator.__class__.__name__, b.generator))


def f_image_pair(graph: ProlongationGraph, m: Morphism, pair: InfiniteLSPair) -> InfiniteLSPair:
    """``(g(V), f(V) phi(w))`` with the generator of the image branch."""
    target = graph.g(pair.vertex)
    gen = pair.generator
    if isinstance(gen, PeriodicPoint):
        mm = m if pair.side == "L" else _reversed(m)
        new = PeriodicPoint(mm.images[gen.seed][0], gen.period)
    else:
        cyc = next(c for c in cycles(graph) if target in c.vertices)
        new = Equation(cycle_prefix_s(cyc, m, target), gen.ell)
    return InfiniteLSPair(pair.side, target, new, pair.verified_to)


def f_preimage_pair(graph: ProlongationGraph, m: Morphism, pair: InfiniteLSPair) -> InfiniteLSPair:
    """The unique pair on the same cycle whose f-image is ``pair``.

    The vertex is the in-cycle predecessor.  A periodic branch steps back
    one place along the first-letter cycle of its seed; an equation branch
    takes the equation rooted at the predecessor.
    """
    cyc = next((c for c in cycles(graph) if pair.vertex in c.vertices), None)
    if cyc is None:
        raise PreconditionError("pair vertex is not on a cycle")
    i = cyc.vertices.index(pair.vertex)
    prev = cyc.vertices[i - 1]
    gen = pair.generator
    if isinstance(gen, PeriodicPoint):
        mm = m if pair.side == "L" else _reversed(m)
        # the seed whose image starts with gen.seed, on the same first-letter cycle
        b = gen.seed
        for _ in range(gen.period - 1):
            b = mm.images[b][0]
        new = PeriodicPoint(b, gen.period)
    else:
        new = Equation(cycle_prefix_s(cyc, m, prev), gen.ell)
    return InfiniteLSPair(pair.side, prev, new, pair.verified_to)
