from __future__ import annotations

import functools
import random

from hypothesis import HealthCheck, settings, strategies as st

from d0lbs.bispecial import Graphs
from d0lbs.classify import circularity_report
from d0lbs.core import D0LSystem, Morphism
from d0lbs.gallery import system
from d0lbs.language import factor_closure
from d0lbs.pipeline import Limits, run_pipeline

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@functools.lru_cache(maxsize=None)
def closure(name: str, horizon: int):
    return factor_closure(system(name), horizon)


@functools.lru_cache(maxsize=None)
def analysis(name: str, until: str = "initial", max_len: int = 60):
    return run_pipeline(system(name), Limits(max_len=max_len), until=until)


def graphs_of(rep) -> Graphs:
    return Graphs(rep.graphs["L"], rep.graphs["R"], rep.system.morphism)


@st.composite
def morphisms(draw, max_letters=3, max_image=4, fixed_point=True):
    """Non-erasing morphisms on 2..max_letters letters; letter 0 seeds a fixed point."""
    n = draw(st.integers(2, max_letters))
    images = []
    for a in range(n):
        lo = 2 if (fixed_point and a == 0) else 1
        im = draw(st.lists(st.integers(0, n - 1), min_size=lo, max_size=max_image))
        if fixed_point and a == 0:
            im[0] = 0
        images.append(bytes(im))
    return Morphism(tuple(images))


@st.composite
def fixed_point_systems(draw, **kw):
    return D0LSystem(draw(morphisms(**kw)), b"\x00")


def random_circular_systems(count: int, seed: int = 7, horizon: int = 40):
    """Deterministic sample of small systems the analysis accepts."""
    rng = random.Random(seed)
    found, seen = [], set()
    while len(found) < count:
        n = rng.choice((2, 3))
        ims = []
        for a in range(n):
            k = rng.randint(2, 4) if a == 0 else rng.randint(1, 4)
            im = [rng.randrange(n) for _ in range(k)]
            if a == 0:
                im[0] = 0
            ims.append(bytes(im))
        if tuple(ims) in seen:
            continue
        seen.add(tuple(ims))
        sys = D0LSystem(Morphism(tuple(ims)), b"\x00")
        try:
            F = factor_closure(sys, horizon)
            if len(F.by_length[2]) < 3:
                continue
            rep = circularity_report(sys, F, delay_cap=10)
        except Exception:
            continue
        if rep.accepted:
            found.append(sys)
    return found


# acceptance lines, filled in by test_acceptance and echoed at the end of the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
