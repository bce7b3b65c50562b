"""Words, morphisms and D0L-systems over a dense integer alphabet.

A word is an immutable ``bytes`` object whose byte values are letter ids
``0..n-1``.  Using ``bytes`` gives cheap hashing, slicing and substring
search, which the factor-language code leans on heavily.  Any sequence of
ints is accepted where a word is expected and normalised with :func:`word`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

Word = bytes
EMPTY: Word = b""

#: default ceiling on materialised word length (iterate, prefix generation)
MAX_WORD_LENGTH = 10**7

BOUNDED = "bounded"
GROWING = "growing"


class InputError(ValueError):
    """Malformed input: letters outside the alphabet, erasing images, ..."""


class PreconditionError(ValueError):
    """An operation was called outside its documented domain."""


class LimitExceeded(RuntimeError):
    """A configured resource bound was hit.

    ``bound`` names the limit; ``partial`` carries whatever was computed
    before giving up (may be None).
    """

    def __init__(self, message, bound=None, partial=None):
        super().__init__(message)
        self.bound = bound
        self.partial = partial


def word(letters: Iterable[int] | str) -> Word:
    """Build a word.  Strings are read as single decimal digits: ``word("0110")``."""
    if isinstance(letters, bytes):
        return letters
    if isinstance(letters, str):
        return bytes(int(c) for c in letters)
    return bytes(letters)


def lcp(u: Word, v: Word) -> Word:
    """Longest common prefix."""
    n = min(len(u), len(v))
    i = 0
    while i < n and u[i] == v[i]:
        i += 1
    return u[:i]


def lcs(u: Word, v: Word) -> Word:
    """Longest common suffix."""
    n = min(len(u), len(v))
    i = 0
    while i < n and u[-1 - i] == v[-1 - i]:
        i += 1
    return u[len(u) - i:]


@dataclass(frozen=True)
class Morphism:
    """A non-erasing morphism given by the images of letters ``0..n-1``."""

    images: tuple[Word, ...]

    def __post_init__(self):
        imgs = tuple(word(im) for im in self.images)
        object.__setattr__(self, "images", imgs)
        n = len(imgs)
        if n == 0:
            raise InputError("empty alphabet")
        if n > 256:
            raise InputError("alphabets are limited to 256 letters")
        for a, im in enumerate(imgs):
            if not im:
                raise InputError(f"image of letter {a} is empty (erasing morphisms are not supported)")
            bad = [c for c in im if c >= n]
            if bad:
                raise InputError(f"image of letter {a} uses letter {bad[0]} outside alphabet of size {n}")

    @classmethod
    def from_strings(cls, *images: str) -> "Morphism":
        return cls(tuple(word(s) for s in images))

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, w) -> Word:
        return apply(self, w)

    def max_image_length(self) -> int:
        return max(len(im) for im in self.images)

    def incidence_matrix(self) -> np.ndarray:
        """``M[a, b]`` = number of occurrences of ``b`` in the image of ``a``."""
        n = self.size
        m = np.zeros((n, n), dtype=np.int64)
        for a, im in enumerate(self.images):
            for b in im:
                m[a, b] += 1
        return m


@dataclass(frozen=True)
class D0LSystem:
    """Morphism plus axiom.  ``symbols`` only affects rendering."""

    morphism: Morphism
    axiom: Word
    symbols: tuple[str, ...] | None = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        ax = word(self.axiom)
        object.__setattr__(self, "axiom", ax)
        if not ax:
            raise InputError("axiom must be nonempty")
        n = self.morphism.size
        if any(c >= n for c in ax):
            raise InputError("axiom uses a letter outside the alphabet")
        if self.symbols is None:
            object.__setattr__(self, "symbols", tuple(str(i) for i in range(n)))
        elif len(self.symbols) != n:
            raise InputError("symbol table does not match alphabet size")

    @property
    def size(self) -> int:
        return self.morphism.size

    @property
    def is_fixed_point_system(self) -> bool:
        """True iff the axiom is one letter ``a`` with ``phi(a) = a v``, ``v`` nonempty."""
        if len(self.axiom) != 1:
            return False
        a = self.axiom[0]
        im = self.morphism.images[a]
        return im[0] == a and len(im) >= 2

    def render(self, w: Word, sep: str | None = None) -> str:
        syms = self.symbols
        if sep is None:
            sep = "" if all(len(s) == 1 for s in syms) else " "
        return sep.join(syms[c] for c in w)

    def parse_word(self, text: str) -> Word:
        """Inverse of :meth:`render` (whitespace separated unless all symbols are one char)."""
        index = {s: i for i, s in enumerate(self.symbols)}
        toks = text.split() if any(len(s) != 1 for s in self.symbols) else [c for c in text if not c.isspace()]
        try:
            return bytes(index[t] for t in toks)
        except KeyError as exc:
            raise InputError(f"unknown symbol {exc.args[0]!r}") from None


def make_system(rules: dict[str, str] | Sequence[str], axiom: str, name: str = "") -> D0LSystem:
    """Convenience constructor from single-character rules.

    ``make_system({"1": "1211", "2": "311"}, "1")`` keeps symbol order as given;
    a list of image strings means the alphabet ``0..n-1``.
    """
    if not isinstance(rules, dict):
        rules = {str(i): im for i, im in enumerate(rules)}
    symbols = tuple(rules)
    index = {s: i for i, s in enumerate(symbols)}
    try:
        images = tuple(bytes(index[c] for c in im) for im in rules.values())
        ax = bytes(index[c] for c in axiom)
    except KeyError as exc:
        raise InputError(f"undeclared symbol {exc.args[0]!r}") from None
    return D0LSystem(Morphism(images), ax, symbols, name=name)


def apply(m: Morphism, w) -> Word:
    w = word(w)
    try:
        return b"".join([m.images[c] for c in w])
    except IndexError:
        bad = next(c for c in w if c >= m.size)
        raise InputError(f"letter {bad} outside alphabet of size {m.size}") from None


def iterate(m: Morphism, w, n: int, max_length: int = MAX_WORD_LENGTH) -> Word:
    """``phi^n(w)``; raises :class:`LimitExceeded` past ``max_length`` letters."""
    if n < 0:
        raise PreconditionError("iteration count must be >= 0")
    w = word(w)
    for _ in range(n):
        w = apply(m, w)
        if len(w) > max_length:
            raise LimitExceeded(f"iterate exceeded max word length {max_length}", bound=max_length)
    return w


def fixed_point_prefix(sys: D0LSystem, length: int, max_length: int = MAX_WORD_LENGTH) -> Word:
    """First ``length`` letters of the fixed point seeded by the one-letter axiom."""
    if not sys.is_fixed_point_system:
        raise PreconditionError("axiom is not a letter a with phi(a) = a v, v nonempty")
    if length > max_length:
        raise LimitExceeded(f"prefix length {length} exceeds max word length {max_length}", bound=max_length)
    m = sys.morphism
    w = sys.axiom
    while len(w) < length:
        # phi^k(a) is a prefix of phi^{k+1}(a); only expand what is needed
        need = 0
        total = 0
        for c in w:
            total += len(m.images[c])
            need += 1
            if total >= length:
                break
        w = apply(m, w[:need])
    return w[:length]


def periodic_prefix(m: Morphism, seed: int, period: int, length: int) -> Word:
    """First ``length`` letters of the periodic point ``(phi^period)^omega(seed)``."""
    im = iterate(m, bytes([seed]), period)
    if im[0] != seed or len(im) < 2:
        raise PreconditionError(f"letter {seed} does not seed a periodic point of period {period}")
    w = bytes([seed])
    while len(w) < length:
        w = iterate(m, w[:length], period)
    return w[:length]


def occurrence_graph(m: Morphism) -> list[set[int]]:
    """Letter ``a`` points to every letter occurring in ``phi(a)``."""
    return [set(im) for im in m.images]


def reachable(m: Morphism, start: Iterable[int]) -> set[int]:
    """Letters reachable from ``start`` in >= 0 steps of the occurrence graph."""
    graph = occurrence_graph(m)
    seen = set(start)
    stack = list(seen)
    while stack:
        a = stack.pop()
        for b in graph[a]:
            if b not in seen:
                seen.add(b)
                stack.append(b)
    return seen


def occurring_letters(sys: D0LSystem) -> set[int]:
    """Letters occurring in some ``phi^n(axiom)``."""
    return reachable(sys.morphism, set(sys.axiom))


def classify_letters(sys: D0LSystem | Morphism) -> tuple[str, ...]:
    """Rank-zero classification: ``BOUNDED`` or ``GROWING`` per letter.

    ``b`` generates a finite language iff the lengths ``|phi^j(b)|`` stay
    bounded, which fails exactly when some letter ``d`` reachable from ``b``
    lies on a cycle of the occurrence graph and has ``|phi(d)| >= 2``: going
    once around the cycle through ``d`` reproduces ``d`` plus extra letters.
    """
    m = sys.morphism if isinstance(sys, D0LSystem) else sys
    n = m.size
    on_cycle = [a in reachable(m, m.images[a]) for a in range(n)]
    expanding = {d for d in range(n) if on_cycle[d] and len(m.images[d]) >= 2}
    return tuple(GROWING if reachable(m, [b]) & expanding else BOUNDED for b in range(n))


def is_prefix_free(m: Morphism) -> bool:
    """No image is a prefix (possibly equal) of the image of a different letter."""
    ims = m.images
    return not any(a != b and ims[b].startswith(ims[a]) for a in range(m.size) for b in range(m.size))


def is_suffix_free(m: Morphism) -> bool:
    ims = m.images
    return not any(a != b and ims[b].endswith(ims[a]) for a in range(m.size) for b in range(m.size))


def is_primitive(m: Morphism) -> bool:
    """Some power of the incidence matrix is entrywise positive.

    Wielandt's bound ``(n-1)^2 + 1`` caps the exponent that needs checking.
    """
    n = m.size
    base = m.incidence_matrix() > 0
    power = base.copy()
    for _ in range((n - 1) ** 2 + 1):
        if power.all():
            return True
        power = (power.astype(np.int64) @ base.astype(np.int64)) > 0
    return bool(power.all())


def periodic_points(m: Morphism) -> list[tuple[int, int]]:
    """Seeds ``(b, l)`` with minimal ``l <= n`` such that ``phi^l(b)`` starts with ``b``.

    Each seed generates the infinite periodic point ``(phi^l)^omega(b)``.
    Requires ``|phi^l(b)| >= 2`` so the point is infinite.
    """
    out = []
    for b in range(m.size):
        first = b
        for ell in range(1, m.size + 1):
            first = m.images[first][0]
            if first == b:
                if len(iterate(m, bytes([b]), ell)) >= 2:
                    out.append((b, ell))
                break
    return sorted(out, key=lambda p: (p[1], p[0]))
