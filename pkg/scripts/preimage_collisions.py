"""Count bispecial triplets that share an f-image with another triplet.

The f-map on triplets is many-to-one in general; this lists the collisions
among non-initial triplets with short centres for each gallery system.
"""
import argparse
import itertools
from collections import defaultdict

from d0lbs import gallery
from d0lbs.bispecial import Graphs, f_image, is_initial, make_triplet
from d0lbs.language import factor_closure
from d0lbs.pipeline import run_pipeline


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-len", type=int, default=20)
    ap.add_argument("--show", action="store_true")
    args = ap.parse_args()
    for name in gallery.ACCEPTED + gallery.EXTRA:
        rep = run_pipeline(gallery.system(name), until="forky")
        sys = rep.system
        G = Graphs(rep.graphs["L"], rep.graphs["R"], sys.morphism)
        pad = max(fs.max_len() for fs in rep.forky.values())
        F = factor_closure(sys, args.max_len + 2 * pad + 2)
        images = defaultdict(list)
        total = 0
        for n in range(args.max_len + 1):
            for v in F.of_length(n):
                if not F.is_bispecial(v):
                    continue
                for left, right in itertools.product(G.left.vertices, G.right.vertices):
                    t = make_triplet(F, left, v, right)
                    if t is not None and not is_initial(F, t):
                        images[f_image(G, t).key].append(t)
                        total += 1
        shared = {k: ts for k, ts in images.items() if len(ts) > 1}
        print(f"{name:16s} {total:5d} triplets, {len(shared):3d} images with several preimages")
        if args.show:
            for ts in shared.values():
                print("    " + "  ".join(t.render(sys) for t in ts))


if __name__ == "__main__":
    main()
