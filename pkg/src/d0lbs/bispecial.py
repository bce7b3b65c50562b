"""Bispecial triplets, their f-images and generation of all bispecial factors.

A triplet ``((w1,w2), v, (w3,w4))`` carries the set of orientations under
which it is realised: parallel (0) means ``w1 v w3`` and ``w2 v w4`` are
factors, crossed (1) means ``w1 v w4`` and ``w2 v w3`` are.  Here ``w1,w2``
and ``w3,w4`` are the pairs in their stored (lexicographic) order.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import NamedTuple

from .classify import ConsistencyError, synchronizing_cuts
from .core import Morphism, PreconditionError, Word, apply, iterate, lcp, lcs, word
from .forky import PPair, ProlongationGraph
from .language import FactorSet, bispecial_bruteforce

log = logging.getLogger(__name__)

PARALLEL = 0
CROSSED = 1
MAX_LEN = 60


class Graphs(NamedTuple):
    left: ProlongationGraph
    right: ProlongationGraph
    morphism: Morphism


@dataclass(frozen=True, order=True)
class BSTriplet:
    left: PPair
    center: Word
    right: PPair
    orientations: tuple[int, ...] = (PARALLEL,)

    def __post_init__(self):
        object.__setattr__(self, "center", word(self.center))
        object.__setattr__(self, "orientations", tuple(sorted(set(self.orientations))))
        if self.left.side != "L" or self.right.side != "R":
            raise ValueError("left pair must be an L pair and right pair an R pair")
        if not self.orientations or not set(self.orientations) <= {PARALLEL, CROSSED}:
            raise ValueError(f"bad orientation set {self.orientations}")

    @property
    def key(self) -> tuple:
        return (self.left, self.center, self.right)

    def words_for(self, orientation: int) -> tuple[Word, Word]:
        w1, w2 = self.left.words
        w3, w4 = self.right.words
        v = self.center
        if orientation == PARALLEL:
            return w1 + v + w3, w2 + v + w4
        return w1 + v + w4, w2 + v + w3

    def render(self, sys=None) -> str:
        r = sys.render if sys is not None else (lambda w: "".join(str(c) for c in w))
        return f"({self.left.render(sys)},{r(self.center) or 'eps'},{self.right.render(sys)})"


def realised_orientations(F: FactorSet, left: PPair, center, right: PPair) -> tuple[int, ...]:
    probe = BSTriplet(left, center, right)
    out = []
    for o in (PARALLEL, CROSSED):
        x, y = probe.words_for(o)
        if len(x) > F.horizon or len(y) > F.horizon:
            raise PreconditionError(f"triplet words of length {max(len(x), len(y))} exceed horizon {F.horizon}")
        if x in F and y in F:
            out.append(o)
    return tuple(out)


def make_triplet(F: FactorSet, left: PPair, center, right: PPair) -> BSTriplet | None:
    """The triplet with every orientation realised in ``F``, or None."""
    orient = realised_orientations(F, left, center, right)
    return BSTriplet(left, center, right, orient) if orient else None


def is_bs_triplet(F: FactorSet, t: BSTriplet) -> bool:
    """All of ``t``'s claimed orientations are realised in ``F``."""
    realised = realised_orientations(F, t.left, t.center, t.right)
    return bool(realised) and set(t.orientations) <= set(realised)


def f_image(graphs: Graphs, t: BSTriplet) -> BSTriplet:
    """``(g_L(left), f_L(left) phi(v) f_R(right), g_R(right))``.

    An orientation flips once for every crossed edge taken.
    """
    el = graphs.left.edge(t.left)
    er = graphs.right.edge(t.right)
    flip = el.crossed ^ er.crossed
    center = el.label + apply(graphs.morphism, t.center) + er.label
    return BSTriplet(el.target, center, er.target, tuple(o ^ flip for o in t.orientations))


def f_image_n(graphs: Graphs, t: BSTriplet, n: int) -> BSTriplet:
    """``n``-fold f-image through the closed form.

    The centre is ``lcs(phi^n(w1), phi^n(w2)) phi^n(v) lcp(phi^n(w3), phi^n(w4))``
    and the pairs follow ``n`` edges of their graphs.
    """
    if n < 0:
        raise PreconditionError("n must be >= 0")
    if n == 0:
        return t
    m = graphs.morphism
    left, right, flip = t.left, t.right, 0
    for _ in range(n):
        el, er = graphs.left.edge(left), graphs.right.edge(right)
        flip ^= el.crossed ^ er.crossed
        left, right = el.target, er.target
    w1, w2 = (iterate(m, w, n) for w in t.left.words)
    w3, w4 = (iterate(m, w, n) for w in t.right.words)
    center = lcs(w1, w2) + iterate(m, t.center, n) + lcp(w3, w4)
    return BSTriplet(left, center, right, tuple(o ^ flip for o in t.orientations))


def bs_sync_cuts(F: FactorSet, t: BSTriplet) -> frozenset:
    """Positions in ``[0, |v|]`` cut in every interpretation of every realised word.

    Uses the synchronizing cuts of each extended word and keeps those that
    fall within the span of the centre, re-based to it.
    """
    v = len(t.center)
    common = set(range(v + 1))
    for o in t.orientations:
        x, y = t.words_for(o)
        starts = (len(t.left.a), len(t.left.b))
        for ext, start in zip((x, y), starts):
            if len(ext) > F.horizon:
                raise PreconditionError(f"extended word of length {len(ext)} exceeds horizon {F.horizon}")
            cuts = synchronizing_cuts(F, ext)
            common &= {c - start for c in cuts if start <= c <= start + v}
            if not common:
                return frozenset()
    return frozenset(common)


def is_initial(F: FactorSet, t: BSTriplet) -> bool:
    return not bs_sync_cuts(F, t)


def nonsync_decomposition(F: FactorSet, t: BSTriplet) -> tuple[Word, Word, Word]:
    """Split the centre at its leftmost and rightmost BS-synchronizing cuts."""
    cuts = sorted(bs_sync_cuts(F, t))
    if not cuts:
        raise PreconditionError("initial triplets have no synchronizing decomposition")
    v = t.center
    return v[:cuts[0]], v[cuts[0]:cuts[-1]], v[cuts[-1]:]


def phi_preimages(F: FactorSet, w) -> list[Word]:
    """Factors ``z`` with ``phi(z) = w`` exactly."""
    w = word(w)
    ims = F.system.morphism.images
    out = []

    def walk(z: bytes, pos: int):
        if pos == len(w):
            out.append(z)
            return
        for b, im in enumerate(ims):
            if w.startswith(im, pos):
                zb = z + bytes([b])
                if len(zb) <= F.horizon and zb in F.by_length[len(zb)]:
                    walk(zb, pos + len(im))

    walk(b"", 0)
    return sorted(out)


def f_preimages(F: FactorSet, graphs: Graphs, t: BSTriplet) -> list[BSTriplet]:
    """Every BS triplet whose f-image is ``t``.

    The centre of a preimage's image is an in-edge label, then the image of
    the preimage centre, then another in-edge label.  Labels can run past
    synchronizing cuts, so every pair of in-edges whose labels fit is tried
    and the middle is decoded in all ways.  A ``t`` realised in both
    orientations can get them from different preimages; together the
    returned triplets cover all of ``t``'s orientations when ``t`` is not
    initial.  An initial ``t`` usually has none, but an empty-centred
    triplet can still land on one.
    """
    v = t.center
    lefts = [(s, e) for s, e in graphs.left.in_edges(t.left) if v.startswith(e.label)]
    rights = [(s, e) for s, e in graphs.right.in_edges(t.right) if v.endswith(e.label)]
    out = []
    seen = set()
    for (sl, el), (sr, er) in itertools.product(lefts, rights):
        i, j = len(el.label), len(v) - len(er.label)
        if i > j:
            continue
        flip = el.crossed ^ er.crossed
        for core in phi_preimages(F, v[i:j]):
            realised = realised_orientations(F, sl, core, sr)
            # keep the orientations that land on t's orientations after flipping
            orient = tuple(o for o in realised if o ^ flip in t.orientations)
            if not orient:
                continue
            cand = BSTriplet(sl, core, sr, orient)
            if cand.key not in seen and f_image(graphs, cand).key == t.key:
                seen.add(cand.key)
                out.append(cand)
    out.sort(key=lambda c: (len(c.center), c.key))
    covered = {o ^ graphs.left.edge(c.left).crossed ^ graphs.right.edge(c.right).crossed
               for c in out for o in c.orientations}
    if not covered >= set(t.orientations) and not is_initial(F, t):
        raise ConsistencyError(f"no f-preimage for non-initial triplet {t.render(F.system)}")
    return out


def f_preimage(F: FactorSet, graphs: Graphs, t: BSTriplet) -> BSTriplet | None:
    """The first preimage (shortest centre, then key order), or None."""
    found = f_preimages(F, graphs, t)
    return found[0] if found else None


def initial_triplets(F: FactorSet, graphs: Graphs, delay: int) -> list[BSTriplet]:
    """Every BS triplet without a BS-synchronizing cut.

    A centre of length ``>= delay`` already has a synchronizing cut, which
    survives in every extension, so only centres shorter than the delay can
    be initial; we scan up to the delay itself for safety.
    """
    out = []
    lmax = graphs.left.forky.max_len()
    rmax = graphs.right.forky.max_len()
    if delay + lmax + rmax > F.horizon or delay + 2 > F.horizon:
        raise PreconditionError(f"initial triplet search needs horizon >= {delay + lmax + rmax}")
    for n in range(delay + 1):
        for v in sorted(F.by_length[n]):
            if not F.is_bispecial(v):
                continue
            lefts = [p for p in graphs.left.vertices if p.a + v in F and p.b + v in F]
            rights = [p for p in graphs.right.vertices if v + p.a in F and v + p.b in F]
            for left, right in itertools.product(lefts, rights):
                t = make_triplet(F, left, v, right)
                if t is not None and is_initial(F, t):
                    out.append(t)
    return out


def replace_empty_centers(graphs: Graphs, triplets) -> list[BSTriplet]:
    """Swap each empty-centred triplet for its first f-image with a nonempty centre."""
    out = set()
    for t in triplets:
        seen = set()
        while not t.center and t not in seen:
            seen.add(t)
            t = f_image(graphs, t)
        if t.center:
            out.add(t)
    return sorted(out)


@dataclass(frozen=True)
class GenerationRecord:
    initial_id: int
    n: int
    triplet: BSTriplet

    @property
    def center(self) -> Word:
        return self.triplet.center


def generate_bispecials(initials, graphs: Graphs, F: FactorSet | None = None,
                        max_len: int = MAX_LEN) -> list[GenerationRecord]:
    """Iterate the f-image from each initial triplet while the centre fits.

    Chains stop at ``max_len`` or at a triplet already produced (its
    continuation is then known).  A chain that revisits one of its own
    nonempty-centred triplets cannot grow and is reported as degenerate.
    Centres within the horizon of ``F`` are checked to be bispecial.
    """
    records = []
    seen = set()
    for idx, t in enumerate(initials):
        chain = set()
        n = 0
        while len(t.center) <= max_len:
            if t in seen:
                if t in chain and t.center:
                    log.warning("degenerate chain from initial %d: centre stops growing", idx)
                break
            seen.add(t)
            chain.add(t)
            if F is not None and len(t.center) + 2 <= F.horizon and not F.is_bispecial(t.center):
                raise ConsistencyError(f"generated centre {F.system.render(t.center)} is not bispecial")
            records.append(GenerationRecord(idx, n, t))
            t = f_image(graphs, t)
            n += 1
    return records


def oracle_difference(F: FactorSet, records, max_len: int) -> tuple[set, set]:
    """Centres the generator missed and centres it produced wrongly, up to ``max_len``."""
    truth = set(bispecial_bruteforce(F, max_len))
    got = {r.center for r in records if len(r.center) <= max_len}
    return truth - got, got - truth
