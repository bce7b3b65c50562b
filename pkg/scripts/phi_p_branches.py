"""Left and right special branches of 1->1211, 2->311, 3->2412, 4->435, 5->534."""
import argparse

from d0lbs.branches import Equation, branch_prefix
from d0lbs.gallery import system
from d0lbs.pipeline import Limits, run_pipeline


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--verify-len", type=int, default=200)
    ap.add_argument("--show", type=int, default=40, help="letters of each branch to print")
    args = ap.parse_args()
    sys = system("phi_p")
    rep = run_pipeline(sys, Limits(verify_len=args.verify_len))
    for side in "LR":
        b = rep.branches[side]
        print(f"{'LS' if side == 'L' else 'RS'}: {len(b.branches)} branches from {len(b.pairs)} pairs, "
              f"verified to {b.verify_len} letters")
        for br in b.branches:
            g = br.generator
            gen = (f"w = {sys.render(g.s)} phi^{g.ell}(w)" if isinstance(g, Equation) and side == "L"
                   else f"w = phi^{g.ell}(w) {sys.render(g.s)}" if isinstance(g, Equation)
                   else f"periodic point of period {g.period} from {sys.symbols[g.seed]}")
            pair = next(p for p in b.pairs if p.generator == g)
            w = sys.render(branch_prefix(pair, sys.morphism, args.show))
            shown = f"{w}..." if side == "L" else f"...{w}"
            print(f"  {gen}\n    {shown}\n    pairs {' '.join(v.render(sys) for v in br.vertices)}")
        for v, g, n in b.rejected:
            print(f"  rejected: seed {sys.symbols[g.seed]} at {v.render(sys)} (fails at length {n})")


if __name__ == "__main__":
    main()
