"""Command line front end.

Every computation the library offers is reachable from one subcommand.
Problems are given in receiver notation, e.g. "(1|2,3),(2|1,3),(3|1,2)",
as a JSON object {"n": ..., "side_info": [...]}, or as @path to a file
holding either form. All rationals print as p/q; --format json-lines
swaps the human tables for line-delimited records built from the same
exact values.

Exit codes: 0 success, 1 computation failure, 2 usage error, 3 when
verify or sweep leaves any problem unmatched or undecided.
"""

from __future__ import annotations

import json
import random
import time

import click

from .geometry import LpBudgetExceeded, region_to_dict
from .inner_bounds import (
    composite_member,
    composite_region_fixed,
    dual_region_reduced,
    flat_region,
    flat_timeshare_region,
    symmetric_capacity,
)
from .outer_bound import mais_region, outer_region
from .problem import (
    ENUMERATE_LIMIT,
    Problem,
    ProblemError,
    canonical_key,
    enumerate_problems,
    parse_problem,
    relabel,
)
from .rat import parse_point, point_str, rat, rat_str
from .verify import sweep as run_sweep
from .verify import verify_capacity

MAX_N_DEFAULT = ENUMERATE_LIMIT


def _load_problem(text: str) -> Problem:
    text = text.strip()
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as fh:
            text = fh.read().strip()
    if text.startswith("{"):
        return Problem.from_json_dict(json.loads(text))
    return parse_problem(text)


def _problem_arg(text: str) -> Problem:
    """Problem from the command line; failures are usage errors."""
    try:
        return _load_problem(text)
    except (ProblemError, ValueError, OSError) as exc:
        raise click.UsageError("bad problem argument: %s" % exc)


def _flag_value(make, flag):
    """Parse one flag value; failures are usage errors naming the flag."""
    try:
        return make()
    except (ValueError, TypeError) as exc:
        raise click.UsageError("bad %s: %s" % (flag, exc))


def _deadline(ctx):
    ms = ctx.obj.get("lp_budget_ms")
    return time.monotonic() + ms / 1000 if ms else None


def _json_line(data) -> str:
    return json.dumps(data, sort_keys=True)


def _emit_region(ctx, region):
    if ctx.obj["format"] == "json-lines":
        click.echo(_json_line(region_to_dict(region)))
    else:
        click.echo(region.pretty())


def _guard(fn):
    """Map computation failures onto exit code 1 with a diagnostic."""

    def wrapped(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except LpBudgetExceeded:
            raise click.ClickException("LP budget exhausted")
        except (ProblemError, ValueError, OSError) as exc:
            raise click.ClickException(str(exc))

    wrapped.__name__ = fn.__name__
    wrapped.__doc__ = fn.__doc__
    return wrapped


@click.group()
@click.option(
    "--format",
    "fmt",
    envvar="INDEXCAP_FORMAT",
    type=click.Choice(["human", "json-lines"]),
    default="human",
    show_default=True,
    help="Output style: readable tables or line-delimited records.",
)
@click.option(
    "--lp-budget-ms",
    envvar="INDEXCAP_LP_BUDGET_MS",
    type=int,
    default=None,
    help="Abort any computation that keeps solving LPs past this many ms.",
)
@click.option(
    "--seed",
    envvar="INDEXCAP_SEED",
    type=int,
    default=None,
    help="Seed for the randomized relabeling consistency check of verify.",
)
@click.pass_context
def cli(ctx, fmt, lp_budget_ms, seed):
    """Exact inner and outer bounds for index coding capacity regions."""
    ctx.obj = {"format": fmt, "lp_budget_ms": lp_budget_ms, "seed": seed}


@cli.command("parse")
@click.argument("problem")
@click.pass_context
@_guard
def parse_cmd(ctx, problem):
    """Echo the normalized problem, its digraph edges, and canonical key."""
    p = _problem_arg(problem)
    key = canonical_key(p).text()
    edges = p.edges()
    if ctx.obj["format"] == "json-lines":
        click.echo(
            _json_line(
                {
                    "problem": p.render(),
                    "n": p.n,
                    "edges": [list(e) for e in edges],
                    "key": key,
                }
            )
        )
    else:
        click.echo("problem: %s" % p.render())
        click.echo("messages: %d" % p.n)
        click.echo("edges: %s" % " ".join("%d->%d" % e for e in edges))
        click.echo("key: %s" % key)


@cli.command("outer")
@click.argument("problem")
@click.pass_context
@_guard
def outer_cmd(ctx, problem):
    """Outer bound on the capacity region: facets and vertices."""
    p = _problem_arg(problem)
    _emit_region(ctx, outer_region(p, _deadline(ctx)))


@cli.command("mais")
@click.argument("problem")
@click.pass_context
@_guard
def mais_cmd(ctx, problem):
    """Acyclic-subset relaxation of the outer bound."""
    p = _problem_arg(problem)
    _emit_region(ctx, mais_region(p))


@cli.command("flat")
@click.argument("problem")
@click.pass_context
@_guard
def flat_cmd(ctx, problem):
    """Flat coding inner bound."""
    p = _problem_arg(problem)
    _emit_region(ctx, flat_region(p))


@cli.command("timeshare")
@click.argument("problem")
@click.pass_context
@_guard
def timeshare_cmd(ctx, problem):
    """Time sharing over flat codes of induced subproblems."""
    p = _problem_arg(problem)
    _emit_region(ctx, flat_timeshare_region(p))


@cli.command("dual")
@click.option("--messages", "-k", required=True, help="Decoded messages, e.g. 1,2,3.")
@click.option("--side", "-a", default="", help="Receiver side information, e.g. 4,5.")
@click.argument("rates")
@click.pass_context
@_guard
def dual_cmd(ctx, messages, side, rates):
    """Dual index coding capacity rows for composite rates RATES.

    RATES is a JSON object keyed by subset, e.g.
    '{"{1,2}": "1", "{1,3}": "2", "{1,2,3}": "2"}'.
    """
    k = _flag_value(
        lambda: [int(t) for t in messages.split(",") if t.strip()], "--messages"
    )
    a = _flag_value(
        lambda: [int(t) for t in side.split(",") if t.strip()], "--side"
    )

    def parse_rates():
        s = {}
        for key, v in json.loads(rates).items():
            js = tuple(int(t) for t in key.strip("{}").split(",") if t.strip())
            s[js] = rat(v)
        return s

    s = _flag_value(parse_rates, "RATES")
    sys = dual_region_reduced(k, a, s, _deadline(ctx))
    if ctx.obj["format"] == "json-lines":
        click.echo(
            _json_line(
                {
                    "variables": list(sys.variables),
                    "rows": [sys.row_string(i) for i in range(len(sys.rows))],
                }
            )
        )
    else:
        click.echo(sys.pretty())


@cli.command("member")
@click.option("--point", required=True, help="Rate tuple, e.g. 2/5,2/5,2/5,2/5,2/5.")
@click.option(
    "--workers",
    envvar="INDEXCAP_WORKERS",
    type=int,
    default=1,
    help="Accepted for interface symmetry; the search itself is sequential.",
)
@click.argument("problem")
@click.pass_context
@_guard
def member_cmd(ctx, point, workers, problem):
    """Decide composite-coding achievability of a point, with certificate."""
    p = _problem_arg(problem)
    pt = _flag_value(lambda: parse_point(point), "--point")
    if len(pt) != p.n:
        raise click.UsageError(
            "--point has %d coordinates for a %d-message problem"
            % (len(pt), p.n)
        )
    cert = composite_member(p, pt, _deadline(ctx))
    if ctx.obj["format"] == "json-lines":
        data = {"point": [rat_str(x) for x in pt], "member": cert is not None}
        if cert is not None:
            data["certificate"] = cert.to_json_dict()
        click.echo(_json_line(data))
    elif cert is None:
        click.echo("member: no")
    else:
        click.echo("member: yes")
        click.echo("config: %s" % json.dumps(cert.config.to_json_list()))
        for js, v in sorted(cert.rates.rates):
            click.echo(
                "S{%s} = %s" % (",".join(str(j) for j in js), rat_str(v))
            )


@cli.command("fixed")
@click.option("--config", required=True, help="Decoding sets, e.g. [[1],[1,2],[3,4],[1,4]].")
@click.option(
    "--support",
    required=True,
    help="Composite subsets granted nonzero rate, e.g. [[1,4],[1,2,3,4]].",
)
@click.argument("problem")
@click.pass_context
@_guard
def fixed_cmd(ctx, config, support, problem):
    """Composite-coding region for a fixed decoding configuration."""
    p = _problem_arg(problem)
    cfg = _flag_value(lambda: json.loads(config), "--config")
    sup = _flag_value(
        lambda: [tuple(int(j) for j in js) for js in json.loads(support)],
        "--support",
    )
    _emit_region(ctx, composite_region_fixed(p, cfg, sup, _deadline(ctx)))


@cli.command("symcap")
@click.argument("problem")
@click.pass_context
@_guard
def symcap_cmd(ctx, problem):
    """Symmetric capacity: best common rate, inner and outer."""
    p = _problem_arg(problem)
    caps = symmetric_capacity(p, _deadline(ctx))
    if ctx.obj["format"] == "json-lines":
        click.echo(
            _json_line(
                {
                    "inner": rat_str(caps["inner"]),
                    "outer": rat_str(caps["outer"]),
                }
            )
        )
    else:
        click.echo("inner: %s" % rat_str(caps["inner"]))
        click.echo("outer: %s" % rat_str(caps["outer"]))


@cli.command("verify")
@click.argument("problem")
@click.pass_context
@_guard
def verify_cmd(ctx, problem):
    """Check that inner and outer bounds coincide for one problem."""
    p = _problem_arg(problem)
    record = verify_capacity(p, ctx.obj.get("lp_budget_ms"))
    seed = ctx.obj.get("seed")
    consistent = None
    if seed is not None:
        rng = random.Random(seed)
        perm = list(range(1, p.n + 1))
        rng.shuffle(perm)
        twin = verify_capacity(relabel(p, perm), ctx.obj.get("lp_budget_ms"))
        consistent = twin.matched == record.matched
    if ctx.obj["format"] == "json-lines":
        data = record.to_json_dict()
        if consistent is not None:
            data["relabel_consistent"] = consistent
        click.echo(_json_line(data))
    else:
        click.echo("key: %s" % record.key)
        click.echo("problem: %s" % record.problem)
        click.echo(
            "outer: %d facets, %d vertices"
            % (record.outer_facets, record.outer_vertices)
        )
        if record.undecided:
            click.echo("matched: undecided (budget exhausted)")
        elif record.matched:
            click.echo(
                "matched: yes (%d certificates)" % len(record.certificates)
            )
        else:
            click.echo(
                "matched: no (vertex %s unreached)"
                % point_str(record.failing_vertex)
            )
        click.echo(
            "flat timeshare matched: %s"
            % ("yes" if record.flat_timeshare_matched else "no")
        )
        click.echo(
            "symmetric capacity: inner %s, outer %s"
            % (rat_str(record.symmetric_inner), rat_str(record.symmetric_outer))
        )
        if consistent is not None:
            click.echo(
                "relabel consistent: %s" % ("yes" if consistent else "no")
            )
        click.echo("wall: %d ms" % record.wall_ms)
    if consistent is False:
        raise click.ClickException("relabeled problem disagreed on matched")
    if not record.matched or record.undecided:
        ctx.exit(3)


@cli.command("enumerate")
@click.argument("n", type=int)
@click.option(
    "--max-n",
    envvar="INDEXCAP_MAX_N",
    type=int,
    default=MAX_N_DEFAULT,
    show_default=True,
    help="Refuse sizes above this bound.",
)
@click.pass_context
@_guard
def enumerate_cmd(ctx, n, max_n):
    """List one representative problem per isomorphism class on N messages."""
    if n < 1 or n > max_n:
        raise click.UsageError("n must be between 1 and --max-n (%d)" % max_n)
    for p in enumerate_problems(n):
        if ctx.obj["format"] == "json-lines":
            click.echo(
                _json_line(
                    {"key": canonical_key(p).text(), "problem": p.render()}
                )
            )
        else:
            click.echo(p.render())


@cli.command("sweep")
@click.option(
    "--max-n",
    envvar="INDEXCAP_MAX_N",
    type=int,
    required=True,
    help="Verify every problem with 1..max-n messages.",
)
@click.option(
    "--out",
    envvar="INDEXCAP_OUT",
    type=click.Path(dir_okay=False, writable=True),
    default="sweep.jsonl",
    show_default=True,
    help="Record file, one verification record per line.",
)
@click.option(
    "--workers", envvar="INDEXCAP_WORKERS", type=int, default=1, show_default=True
)
@click.option(
    "--resume/--no-resume",
    envvar="INDEXCAP_RESUME",
    default=False,
    help="Keep records already in --out and verify only the rest.",
)
@click.pass_context
@_guard
def sweep_cmd(ctx, max_n, out, workers, resume):
    """Verify all nonisomorphic problems up to a message count."""
    if max_n < 1 or max_n > MAX_N_DEFAULT:
        raise click.UsageError(
            "--max-n must be between 1 and %d" % MAX_N_DEFAULT
        )
    human = ctx.obj["format"] == "human"
    budget = ctx.obj.get("lp_budget_ms")
    bad = 0
    totals = {"total": 0, "matched": 0, "flat_only_failures": 0}
    for n in range(1, max_n + 1):
        log = (lambda key: click.echo("done %s" % key)) if human else None
        summary = run_sweep(
            n,
            out,
            workers=workers,
            resume=resume or n > 1,
            lp_budget_ms=budget,
            log=log,
        )
        bad += summary["unmatched"] + summary["undecided"]
        for field in totals:
            totals[field] += summary[field]
        line = {"n": n}
        line.update(summary)
        if human:
            click.echo(
                "n=%d: %d problems, %d matched, %d flat-only failures, "
                "%d unmatched, %d undecided"
                % (
                    n,
                    summary["total"],
                    summary["matched"],
                    summary["flat_only_failures"],
                    summary["unmatched"],
                    summary["undecided"],
                )
            )
        else:
            click.echo(_json_line(line))
    if human:
        click.echo(
            "all: %d problems, %d matched, %d flat-only failures"
            % (totals["total"], totals["matched"], totals["flat_only_failures"])
        )
    else:
        click.echo(_json_line({"n": "all", **totals}))
    if bad:
        ctx.exit(3)


def main():
    cli(auto_envvar_prefix="INDEXCAP")


if __name__ == "__main__":
    main()
