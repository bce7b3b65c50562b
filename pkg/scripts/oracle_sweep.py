"""Compare generated bispecial centres with brute force on random accepted systems.

    python scripts/oracle_sweep.py --count 50 --max-len 30 --seed 1
"""
import argparse
import random
import time

from d0lbs.bispecial import oracle_difference
from d0lbs.classify import circularity_report
from d0lbs.core import D0LSystem, InputError, LimitExceeded, Morphism, PreconditionError
from d0lbs.language import factor_closure
from d0lbs.pipeline import Limits, run_pipeline


def random_system(rng: random.Random) -> D0LSystem:
    n = rng.choice((2, 3))
    ims = []
    for a in range(n):
        im = [rng.randrange(n) for _ in range(rng.randint(2 if a == 0 else 1, 4))]
        if a == 0:
            im[0] = 0
        ims.append(bytes(im))
    return D0LSystem(Morphism(tuple(ims)), b"\x00")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--max-len", type=int, default=30)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    tried = accepted = mismatches = 0
    seen = set()
    t0 = time.perf_counter()
    while accepted < args.count:
        sys = random_system(rng)
        if sys.morphism.images in seen:
            continue
        seen.add(sys.morphism.images)
        tried += 1
        try:
            F = factor_closure(sys, 40)
            if len(F.by_length[2]) < 3 or not circularity_report(sys, F, delay_cap=10).accepted:
                continue
            rep = run_pipeline(sys, Limits(horizon=40, delay_cap=10, max_len=args.max_len), until="bispecial")
        except (InputError, LimitExceeded, PreconditionError):
            continue
        accepted += 1
        missing, extra = oracle_difference(factor_closure(sys, args.max_len + 2), rep.records, args.max_len)
        rules = " ".join(f"{a}->{sys.render(im)}" for a, im in zip(sys.symbols, sys.morphism.images))
        status = "ok" if not missing and not extra else f"MISMATCH missing={len(missing)} extra={len(extra)}"
        mismatches += status != "ok"
        print(f"{accepted:3d}  {rules:32s} delay={rep.classification.delay.value:<3d}"
              f" initial={len(rep.initial):<3d} centres={len({r.center for r in rep.records}):<4d} {status}")
    print(f"\n{accepted} accepted of {tried} sampled, {mismatches} mismatches, {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
