"""Command line interface.

Exit codes: 0 analysis complete, 1 input error, 2 system rejected at the
classification step, 3 a limit was exceeded or a certificate was not found
within the limits.
"""
from __future__ import annotations

import json
import sys as _sys
from pathlib import Path

import click

from . import __version__
from .bispecial import CROSSED, oracle_difference
from .branches import PeriodicPoint
from .classify import REJECTED, ConsistencyError
from .core import InputError, LimitExceeded, PreconditionError, is_primitive
from .forky import ForkyError, to_dot
from .language import (
    complexity,
    critical_exponent_estimate,
    factor_closure,
    special_factors,
)
from .pipeline import Limits, AnalysisReport, parse_system, run_pipeline

EXIT_OK, EXIT_INPUT, EXIT_REJECTED, EXIT_LIMIT = 0, 1, 2, 3


class Ctx:
    def __init__(self, seed_file, overrides):
        self.seed_file = seed_file
        self.overrides = overrides
        self._spec = None

    @property
    def spec(self):
        if self._spec is None:
            if self.seed_file is None or self.seed_file == "-":
                text, name = click.get_text_stream("stdin").read(), "stdin"
            else:
                path = Path(self.seed_file)
                try:
                    text = path.read_text()
                except OSError as exc:
                    raise InputError(f"cannot read {path}: {exc.strerror}") from None
                name = path.stem
            self._spec = parse_system(text, name)
        return self._spec

    def limits(self, **extra) -> Limits:
        # file limits sit under the command line
        return Limits().merged(**self.spec.limits).merged(**self.overrides, **extra)

    def run(self, until: str, **extra) -> AnalysisReport:
        spec = self.spec
        rep = run_pipeline(type(spec)(spec.system, {}), self.limits(**extra), until)
        return rep


def _render_triplet(sys, t) -> str:
    mark = "/".join("x" if o == CROSSED else "=" for o in t.orientations)
    return f"{t.render(sys)} [{mark}]"


def _stop(rep: AnalysisReport):
    c = rep.classification
    click.echo(f"stopped after classification: {rep.stopped} (verdict {c.verdict})", err=True)
    raise SystemExit(EXIT_REJECTED if c.verdict == REJECTED else EXIT_LIMIT)


@click.group(context_settings={"auto_envvar_prefix": "D0LBS", "help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="d0lbs")
@click.option("--horizon", type=click.IntRange(1), envvar="D0LBS_HORIZON",
              help="Length up to which the factor language is computed exactly.")
@click.option("--delay-cap", type=click.IntRange(1), envvar="D0LBS_DELAY_CAP")
@click.option("--power-threshold", type=click.IntRange(2), envvar="D0LBS_POWER_THRESHOLD")
@click.option("--seed-file", type=click.Path(dir_okay=False, allow_dash=True), envvar="D0LBS_SEED_FILE",
              help="System file (rules and axiom); '-' or absent reads stdin.")
@click.pass_context
def main(ctx, horizon, delay_cap, power_threshold, seed_file):
    """Bispecial factors and special branches of D0L-systems."""
    ctx.obj = Ctx(seed_file, {"horizon": horizon, "delay_cap": delay_cap,
                              "power_threshold": power_threshold})


@main.command()
@click.pass_obj
def classify(obj: Ctx):
    """Pushiness, synchronizing delay, repetitiveness and injectivity."""
    rep = obj.run("classify")
    c = rep.classification
    sys = obj.spec.system
    p = c.pushy
    if p.pushy:
        click.echo(f"pushy: Pushy (letter {sys.render(bytes([p.witness_letter]))}, side {p.side})")
    else:
        click.echo(f"pushy: NonPushy (q={p.q})")
    click.echo(f"growth constant: {c.growth_constant}")
    click.echo(f"delay: {c.delay if c.delay is not None else 'undefined'}")
    r = c.repetitiveness
    if r.evidence:
        what = f"witness {sys.render(r.witness)}, power {r.power}" if r.witness else r.reason
        click.echo(f"repetitiveness: EvidenceRepetitive ({what})")
    else:
        click.echo("repetitiveness: NoEvidence (threshold %d, words <= %d, horizon %d)" % r.bounds)
    click.echo(f"injective on factors <= {c.injectivity.horizon}: {c.injectivity.certified}")
    click.echo(f"primitive: {is_primitive(sys.morphism)}")
    click.echo(f"verdict: {c.verdict}")
    for note in c.notes:
        click.echo(f"note: {note}")
    if rep.stopped:
        raise SystemExit(EXIT_REJECTED if c.verdict == REJECTED else EXIT_LIMIT)


@main.command()
@click.option("--max-len", type=click.IntRange(0), default=10, show_default=True)
@click.option("--list", "show", is_flag=True, help="Print the factors too.")
@click.pass_obj
def factors(obj: Ctx, max_len, show):
    """Factor complexity C(n)."""
    lim = obj.limits()
    sys = obj.spec.system
    F = factor_closure(sys, max(lim.horizon, max_len), lim.factor_budget)
    for n in range(max_len + 1):
        line = f"{n} {complexity(F, n)}"
        if show:
            line += " " + " ".join(sys.render(w) or "eps" for w in F.of_length(n))
        click.echo(line)


@main.command()
@click.option("--max-len", type=click.IntRange(0), default=10, show_default=True)
@click.pass_obj
def special(obj: Ctx, max_len):
    """Left and right special factors."""
    lim = obj.limits()
    sys = obj.spec.system
    F = factor_closure(sys, max(lim.horizon, max_len + 1), lim.factor_budget)
    for side, name in (("L", "LS"), ("R", "RS")):
        for w in special_factors(F, max_len, side):
            ext = F.lext(w) if side == "L" else F.rext(w)
            click.echo(f"{name} {sys.render(w) or 'eps'} {{{','.join(sys.render(bytes([a])) for a in sorted(ext))}}}")


@main.command()
@click.pass_obj
def forky(obj: Ctx):
    """L- and R-forky sets."""
    rep = obj.run("forky")
    if rep.stopped:
        _stop(rep)
    sys = obj.spec.system
    for side in "LR":
        fs = rep.forky[side]
        pairs = " ".join(p.render(sys) for p in fs)
        click.echo(f"{side} ({fs.construction}, {len(fs)} pairs): {pairs}")


@main.command()
@click.option("--side", type=click.Choice(["L", "R"]), default="L", show_default=True)
@click.option("--dot", "dot_path", type=click.Path(dir_okay=False, allow_dash=True),
              help="Write DOT here ('-' for stdout).")
@click.pass_obj
def graph(obj: Ctx, side, dot_path):
    """Prolongation graph of one side."""
    rep = obj.run("forky")
    if rep.stopped:
        _stop(rep)
    sys = obj.spec.system
    g = rep.graphs[side]
    if dot_path:
        text = to_dot(g, sys)
        if dot_path == "-":
            click.echo(text, nl=False)
        else:
            Path(dot_path).write_text(text)
        return
    for v in g.vertices:
        e = g.edge(v)
        flag = " crossed" if e.crossed else ""
        click.echo(f"{v.render(sys)} -> {e.target.render(sys)} [{sys.render(e.label) or 'eps'}]{flag}")


@main.command()
@click.pass_obj
def initial(obj: Ctx):
    """Initial bispecial triplets and their empty-centre replacement."""
    rep = obj.run("initial")
    if rep.stopped:
        _stop(rep)
    sys = obj.spec.system
    click.echo(f"initial triplets: {len(rep.initial)}")
    for t in rep.initial:
        click.echo("  " + _render_triplet(sys, t))
    click.echo(f"with empty centres replaced: {len(rep.initial_nonempty)}")
    for t in rep.initial_nonempty:
        click.echo("  " + _render_triplet(sys, t))


@main.command()
@click.option("--max-len", type=click.IntRange(0), default=60, show_default=True)
@click.option("--check-oracle", is_flag=True, help="Compare centres with brute force.")
@click.pass_obj
def bispecial(obj: Ctx, max_len, check_oracle):
    """All bispecial factors up to a length, as iterated f-images."""
    rep = obj.run("bispecial", max_len=max_len)
    if rep.stopped:
        _stop(rep)
    sys = obj.spec.system
    for r in sorted(rep.records, key=lambda r: (len(r.center), r.center, r.initial_id, r.n)):
        click.echo(f"{sys.render(r.center) or 'eps'}\tinitial={r.initial_id} n={r.n}\t{_render_triplet(sys, r.triplet)}")
    if check_oracle:
        lim = rep.limits
        F = factor_closure(sys, max(lim.horizon, max_len + 2), lim.factor_budget)
        missing, extra = oracle_difference(F, rep.records, max_len)
        if missing or extra:
            click.echo(f"oracle: MISMATCH missing={[sys.render(w) for w in sorted(missing)]} "
                       f"extra={[sys.render(w) for w in sorted(extra)]}", err=True)
            raise SystemExit(EXIT_LIMIT)
        n = len({r.center for r in rep.records if len(r.center) <= max_len})
        click.echo(f"oracle: match ({n} centres up to length {max_len})")


@main.command()
@click.option("--verify-len", type=click.IntRange(1), default=200, show_default=True)
@click.pass_obj
def branches(obj: Ctx, verify_len):
    """Infinite left and right special branches."""
    rep = obj.run("branches", verify_len=verify_len)
    if rep.stopped:
        _stop(rep)
    sys = obj.spec.system
    for side, name in (("L", "LS"), ("R", "RS")):
        b = rep.branches[side]
        click.echo(f"{name}: {len(b.branches)} branches, {len(b.pairs)} pairs (verified to {b.verify_len})")
        for br in b.branches:
            g = br.generator
            if isinstance(g, PeriodicPoint):
                desc = f"periodic seed={sys.render(bytes([g.seed]))} period={g.period}"
            else:
                desc = f"equation s={sys.render(g.s)} ell={g.ell}"
            verts = " ".join(v.render(sys) for v in br.vertices)
            click.echo(f"  {desc} vertices: {verts}")
        for v, g, fail in b.rejected:
            click.echo(f"  rejected {v.render(sys)} seed={sys.render(bytes([g.seed]))}: fails at length {fail}")


@main.command()
@click.option("--max-word-len", type=click.IntRange(1), default=20, show_default=True)
@click.option("--cap", type=click.IntRange(2), default=8, show_default=True)
@click.pass_obj
def exponent(obj: Ctx, max_word_len, cap):
    """Critical exponent estimate from factor indexes."""
    lim = obj.limits()
    sys = obj.spec.system
    F = factor_closure(sys, lim.horizon, lim.factor_budget)
    ex = critical_exponent_estimate(F, max_word_len, cap)
    click.echo(f"estimate: {ex.estimate} (argmax {sys.render(ex.argmax)})")
    click.echo(f"unbounded evidence: {ex.unbounded_evidence}"
               + (f" (witness {sys.render(ex.witness)})" if ex.witness else ""))
    if ex.horizon_limited:
        click.echo(f"horizon-limited words: {len(ex.horizon_limited)}")


@main.command()
@click.option("--json", "json_path", type=click.Path(dir_okay=False, allow_dash=True), required=True)
@click.option("--max-len", type=click.IntRange(0))
@click.option("--verify-len", type=click.IntRange(1))
@click.pass_obj
def report(obj: Ctx, json_path, max_len, verify_len):
    """Run every stage and write the JSON report."""
    rep = obj.run("branches", max_len=max_len, verify_len=verify_len)
    text = json.dumps(rep.to_json(), indent=2, sort_keys=True) + "\n"
    if json_path == "-":
        click.echo(text, nl=False)
    else:
        Path(json_path).write_text(text)
        click.echo(json.dumps(rep.summary(), sort_keys=True))
    if rep.stopped:
        raise SystemExit(EXIT_REJECTED if rep.classification.verdict == REJECTED else EXIT_LIMIT)


def run(argv=None) -> int:
    """Entry point mapping library errors onto exit codes."""
    try:
        main.main(args=argv, prog_name="d0lbs", standalone_mode=False)
    except click.exceptions.Abort:
        return EXIT_INPUT
    except click.ClickException as exc:
        exc.show()
        return EXIT_INPUT
    except InputError as exc:
        click.echo(f"input error: {exc}", err=True)
        return EXIT_INPUT
    except (LimitExceeded, PreconditionError, ForkyError, ConsistencyError) as exc:
        click.echo(f"limit: {exc}", err=True)
        return EXIT_LIMIT
    except SystemExit as exc:
        return int(exc.code or 0)
    return EXIT_OK


def entry():
    _sys.exit(run())


if __name__ == "__main__":
    entry()
