"""System files, run limits, the end-to-end analysis and its JSON form."""
from __future__ import annotations

import re
from dataclasses import asdict, dataclass, field, fields, replace

from . import __version__
from .bispecial import (
    CROSSED,
    MAX_LEN,
    BSTriplet,
    GenerationRecord,
    Graphs,
    generate_bispecials,
    initial_triplets,
    replace_empty_centers,
)
from .branches import VERIFY_LEN, BranchReport, Equation, PeriodicPoint, infinite_ls_pairs
from .classify import (
    DELAY_CAP,
    POWER_THRESHOLD,
    REJECTED,
    ClassificationReport,
    circularity_report,
)
from .core import D0LSystem, InputError, Morphism
from .forky import ForkySet, PPair, ProlongationGraph, build_forky_set, build_graph
from .language import (
    FACTOR_BUDGET,
    ExponentReport,
    complexity,
    critical_exponent_estimate,
    factor_closure,
)


class ParseError(InputError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


@dataclass(frozen=True)
class Limits:
    horizon: int = 64
    delay_cap: int = DELAY_CAP
    power_threshold: int = POWER_THRESHOLD
    max_len: int = MAX_LEN
    verify_len: int = VERIFY_LEN
    exponent_max_word_len: int = 20
    exponent_cap: int = 8
    factor_budget: int = FACTOR_BUDGET

    def merged(self, **overrides) -> "Limits":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


LIMIT_NAMES = {f.name.replace("_", "-"): f.name for f in fields(Limits)}


@dataclass(frozen=True)
class SystemSpec:
    system: D0LSystem
    limits: dict = field(default_factory=dict)  # overrides read from the file


def parse_system(text: str, name: str = "") -> SystemSpec:
    """Read the rule-file format.

    One ``SYM -> SYMS`` rule per line, an ``axiom`` line, optional
    ``symbols a b c`` header and optional ``limit NAME N`` lines.  ``#``
    starts a comment.  Images are whitespace separated unless every symbol
    is a single character, in which case ``012`` and ``0 1 2`` both work.
    """
    declared: list[str] | None = None
    rules: dict[str, tuple[int, str]] = {}
    axiom: tuple[int, str] | None = None
    limits: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" in line:
            lhs, rhs = (x.strip() for x in line.split("->", 1))
            if not lhs or len(lhs.split()) != 1:
                raise ParseError("rule needs exactly one symbol on the left", lineno)
            if lhs in rules:
                raise ParseError(f"duplicate rule for symbol {lhs!r}", lineno)
            if not rhs:
                raise ParseError(f"empty image for {lhs!r} (erasing rules are not supported)", lineno)
            rules[lhs] = (lineno, rhs)
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "symbols":
            if declared is not None or rules:
                raise ParseError("symbols header must come first and only once", lineno)
            declared = rest.split()
            if not declared or len(set(declared)) != len(declared):
                raise ParseError("symbols header must list distinct symbols", lineno)
        elif head == "axiom":
            if axiom is not None:
                raise ParseError("duplicate axiom", lineno)
            if not rest:
                raise ParseError("empty axiom", lineno)
            axiom = (lineno, rest)
        elif head == "limit":
            m = re.fullmatch(r"([a-z-]+)\s+(\d+)", rest)
            if not m or m.group(1) not in LIMIT_NAMES:
                raise ParseError(f"bad limit line {rest!r}", lineno)
            limits[LIMIT_NAMES[m.group(1)]] = int(m.group(2))
        else:
            raise ParseError(f"cannot parse {line!r}", lineno)
    if not rules:
        raise ParseError("no rules given")
    if axiom is None:
        raise ParseError("missing axiom line")
    symbols = declared if declared is not None else list(rules)
    for s in symbols:
        if s not in rules:
            raise ParseError(f"no rule for declared symbol {s!r}")
    for s, (lineno, _) in rules.items():
        if s not in symbols:
            raise ParseError(f"rule for undeclared symbol {s!r}", lineno)
    index = {s: i for i, s in enumerate(symbols)}
    short = all(len(s) == 1 for s in symbols)

    def tokens(body: str, lineno: int) -> bytes:
        toks = [c for c in body if not c.isspace()] if short else body.split()
        for t in toks:
            if t not in index:
                raise ParseError(f"undeclared symbol {t!r}", lineno)
        return bytes(index[t] for t in toks)

    images = tuple(tokens(rules[s][1], rules[s][0]) for s in symbols)
    ax = tokens(axiom[1], axiom[0])
    try:
        sys = D0LSystem(Morphism(images), ax, tuple(symbols), name=name)
    except InputError as exc:
        raise ParseError(str(exc)) from None
    return SystemSpec(sys, limits)


@dataclass
class AnalysisReport:
    system: D0LSystem
    limits: Limits
    classification: ClassificationReport
    forky: dict[str, ForkySet] = field(default_factory=dict)
    graphs: dict[str, ProlongationGraph] = field(default_factory=dict)
    initial: list[BSTriplet] = field(default_factory=list)
    initial_nonempty: list[BSTriplet] = field(default_factory=list)
    records: list[GenerationRecord] = field(default_factory=list)
    branches: dict[str, BranchReport] = field(default_factory=dict)
    complexity: list[int] = field(default_factory=list)
    exponent: ExponentReport | None = None
    horizons: dict[str, int] = field(default_factory=dict)
    stopped: str | None = None

    @property
    def complete(self) -> bool:
        return self.stopped is None

    def summary(self) -> dict:
        return summarize(self.to_json())

    def to_json(self) -> dict:
        return report_json(self)


STAGES = ("classify", "forky", "initial", "bispecial", "branches")


def run_pipeline(spec: SystemSpec | D0LSystem, limits: Limits | None = None,
                 until: str = "branches") -> AnalysisReport:
    """classify, then forky sets, initial triplets, bispecials and branches.

    Stops right after classification when the system is rejected or the
    delay is not certified; ``stopped`` then says why.  ``until`` names the
    last stage to run.
    """
    if until not in STAGES:
        raise InputError(f"unknown stage {until!r}")
    upto = STAGES.index(until)
    if isinstance(spec, D0LSystem):
        spec = SystemSpec(spec)
    limits = (limits or Limits()).merged(**spec.limits)
    sys = spec.system
    base = factor_closure(sys, limits.horizon, limits.factor_budget)
    cls = circularity_report(sys, base, limits.delay_cap, limits.power_threshold)
    exp = critical_exponent_estimate(base, limits.exponent_max_word_len, limits.exponent_cap)
    rep = AnalysisReport(sys, limits, cls, exponent=exp)
    rep.horizons = {"classification": base.horizon, "exponent": base.horizon}
    rep.complexity = [complexity(base, n) for n in range(base.horizon + 1)]
    if cls.verdict == REJECTED:
        rep.stopped = "rejected"
    elif not cls.accepted:
        rep.stopped = "undecided"
    elif not sys.is_fixed_point_system:
        rep.stopped = "axiom is not a fixed-point seed"
    if rep.stopped or upto == 0:
        return rep
    delay = cls.delay.value
    m = sys.morphism
    for side in "LR":
        fs = build_forky_set(sys, base, side, delay=delay, growth_constant=cls.growth_constant)
        rep.forky[side] = fs
        rep.graphs[side] = build_graph(fs, m)
    rep.horizons["forky"] = base.horizon
    if upto == 1:
        return rep
    graphs = Graphs(rep.graphs["L"], rep.graphs["R"], m)
    pair_len = max(fs.max_len() for fs in rep.forky.values())
    need = max(delay + 2 * pair_len, delay + 2)
    if upto >= 3:
        need = max(need, limits.max_len + 2)
    if upto >= 4:
        need = max(need, limits.verify_len + pair_len + 1)
    F = base if need <= base.horizon else factor_closure(sys, need, limits.factor_budget)
    rep.initial = initial_triplets(F, graphs, delay)
    rep.initial_nonempty = replace_empty_centers(graphs, rep.initial)
    rep.horizons["initial"] = F.horizon
    if upto >= 3:
        rep.records = generate_bispecials(rep.initial, graphs, F, limits.max_len)
        rep.horizons["bispecial"] = F.horizon
    if upto >= 4:
        for side in "LR":
            rep.branches[side] = infinite_ls_pairs(sys, F, rep.graphs[side], limits.verify_len)
        rep.horizons["branches"] = F.horizon
    return rep


# -- JSON ------------------------------------------------------------------

def _w(sys: D0LSystem, w) -> str:
    return sys.render(w)


def _pair(sys, p: PPair) -> list[str]:
    return [_w(sys, p.a), _w(sys, p.b)]


def _triplet(sys, t: BSTriplet) -> dict:
    return {
        "left": _pair(sys, t.left),
        "center": _w(sys, t.center),
        "right": _pair(sys, t.right),
        "orientations": ["crossed" if o == CROSSED else "parallel" for o in t.orientations],
    }


def _generator(sys, g) -> dict:
    if isinstance(g, PeriodicPoint):
        return {"type": "periodic", "seed": _w(sys, bytes([g.seed])), "period": g.period}
    assert isinstance(g, Equation)
    return {"type": "equation", "s": _w(sys, g.s), "ell": g.ell}


def _classification(sys, c: ClassificationReport) -> dict:
    rep = c.repetitiveness
    return {
        "verdict": c.verdict,
        "accepted": c.accepted,
        "pushy": c.pushy.pushy,
        "q": c.pushy.q,
        "growth_constant": c.growth_constant,
        "delay": None if c.delay is None else {"certified": c.delay.certified, "value": c.delay.value},
        "repetitiveness": {
            "evidence": rep.evidence,
            "reason": rep.reason,
            "witness": None if rep.witness is None else _w(sys, rep.witness),
            "power": None if rep.power is None else str(rep.power),
        },
        "injective": {"certified": c.injectivity.certified, "horizon": c.injectivity.horizon},
        "horizon": c.horizon,
        "caps": c.caps,
        "notes": c.notes,
    }


def _graph(sys, g: ProlongationGraph) -> dict:
    return {
        "vertices": [_pair(sys, v) for v in g.vertices],
        "edges": [{"source": _pair(sys, v), "target": _pair(sys, g.edges[v].target),
                   "label": _w(sys, g.edges[v].label), "crossed": g.edges[v].crossed}
                  for v in g.vertices],
    }


def report_json(rep: AnalysisReport) -> dict:
    sys = rep.system
    ex = rep.exponent
    return {
        "tool": {"name": "d0lbs", "version": __version__},
        "system": {
            "symbols": list(sys.symbols),
            "rules": {sys.symbols[a]: _w(sys, im) for a, im in enumerate(sys.morphism.images)},
            "axiom": _w(sys, sys.axiom),
        },
        "stopped": rep.stopped,
        "classification": _classification(sys, rep.classification),
        "forky": {s: {"construction": fs.construction, "pairs": [_pair(sys, p) for p in fs]}
                  for s, fs in sorted(rep.forky.items())},
        "graphs": {s: _graph(sys, g) for s, g in sorted(rep.graphs.items())},
        "initial_triplets": [_triplet(sys, t) for t in rep.initial],
        "initial_nonempty": [_triplet(sys, t) for t in rep.initial_nonempty],
        "bispecial": [{"initial_id": r.initial_id, "n": r.n, **_triplet(sys, r.triplet)} for r in rep.records],
        "branches": {
            ("LS" if s == "L" else "RS"): {
                "verify_len": b.verify_len,
                "pairs": [{"vertex": _pair(sys, p.vertex), "generator": _generator(sys, p.generator),
                           "verified_to": p.verified_to} for p in b.pairs],
                "branches": [{"generator": _generator(sys, br.generator),
                              "vertices": [_pair(sys, v) for v in br.vertices]} for br in b.branches],
            }
            for s, b in sorted(rep.branches.items())
        },
        "complexity": rep.complexity,
        "exponent": None if ex is None else {
            "estimate": str(ex.estimate),
            "argmax": _w(sys, ex.argmax),
            "unbounded_evidence": ex.unbounded_evidence,
            "witness": None if ex.witness is None else _w(sys, ex.witness),
            "max_word_len": ex.max_word_len,
            "cap": str(ex.cap),
            "horizon": ex.horizon,
        },
        "limits": {**asdict(rep.limits), "horizons": rep.horizons},
    }


def summarize(doc: dict) -> dict:
    """Headline numbers, computed from the JSON document alone."""
    c = doc["classification"]
    return {
        "verdict": c["verdict"],
        "delay": c["delay"],
        "forky_sizes": {s: len(v["pairs"]) for s, v in doc["forky"].items()},
        "initial_count": len(doc["initial_triplets"]),
        "bispecial_centers": sorted({r["center"] for r in doc["bispecial"]}),
        "branch_count": {s: len(v["branches"]) for s, v in doc["branches"].items()},
        "complexity": doc["complexity"],
        "exponent": None if doc["exponent"] is None else doc["exponent"]["estimate"],
    }


__all__ = [
    "AnalysisReport", "Limits", "ParseError", "SystemSpec", "parse_system", "report_json",
    "run_pipeline", "summarize",
]
