"""Capacity verification: prove inner and outer bounds meet, problem by
problem, and sweep every nonisomorphic problem of a given size.

The outer bound is a polytope and the composite-coding inner bound is
convex and contained in it, so the two coincide exactly when every
vertex of the outer region carries an achievability certificate. Each
record stores those certificates, making the sweep's conclusion
independently checkable.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass

from .geometry import LpBudgetExceeded, region_equal
from .inner_bounds import (
    AchievabilityCertificate,
    CompositeRates,
    DecodingConfig,
    composite_member,
    flat_timeshare_region,
    symmetric_inner,
)
from .outer_bound import outer_region
from .problem import Problem, canonical_key, enumerate_problems, parse_problem
from .rat import Rat, rat, rat_str


@dataclass(frozen=True)
class VerificationRecord:
    key: str
    problem: str
    outer_facets: int
    outer_vertices: int
    matched: bool
    flat_timeshare_matched: bool
    undecided: bool
    certificates: tuple  # AchievabilityCertificate per vertex when matched
    failing_vertex: tuple  # first unachievable vertex, else ()
    symmetric_inner: object
    symmetric_outer: object
    wall_ms: int

    def to_json_dict(self):
        out = {
            "key": self.key,
            "problem": self.problem,
            "outer_facets": self.outer_facets,
            "outer_vertices": self.outer_vertices,
            "matched": self.matched,
            "flat_timeshare_matched": self.flat_timeshare_matched,
            "undecided": self.undecided,
            "certificates": [c.to_json_dict() for c in self.certificates],
            "failing_vertex": [rat_str(x) for x in self.failing_vertex],
            "symmetric_inner": rat_str(self.symmetric_inner),
            "symmetric_outer": rat_str(self.symmetric_outer),
            "wall_ms": self.wall_ms,
        }
        return out

    @classmethod
    def from_json_dict(cls, data):
        certs = []
        for c in data.get("certificates", ()):
            rates = {}
            for key, v in c["S"].items():
                js = tuple(int(t) for t in key.strip("{}").split(",") if t)
                rates[js] = rat(v)
            certs.append(
                AchievabilityCertificate(
                    DecodingConfig.make(c["config"]),
                    CompositeRates.make(rates),
                    tuple(rat(x) for x in c["point"]),
                )
            )
        return cls(
            key=data["key"],
            problem=data["problem"],
            outer_facets=data["outer_facets"],
            outer_vertices=data["outer_vertices"],
            matched=data["matched"],
            flat_timeshare_matched=data["flat_timeshare_matched"],
            undecided=data["undecided"],
            certificates=tuple(certs),
            failing_vertex=tuple(rat(x) for x in data.get("failing_vertex", ())),
            symmetric_inner=rat(data["symmetric_inner"]),
            symmetric_outer=rat(data["symmetric_outer"]),
            wall_ms=data["wall_ms"],
        )


def _symmetric_from_region(region):
    """Largest t with (t, ..., t) inside the region, off its facet rows."""
    best = None
    for coeffs, rhs in region.facets.rows:
        s = sum(coeffs)
        if s > 0:
            t = Rat(rhs) / s
            if best is None or t < best:
                best = t
    return best if best is not None else Rat(1)


def verify_capacity(p: Problem, lp_budget_ms=None) -> VerificationRecord:
    """Decide whether composite coding meets the outer bound for p.

    A per-problem LP budget turns a stalled decision into an undecided
    record instead of an unbounded run.
    """
    t0 = time.monotonic()
    deadline = t0 + lp_budget_ms / 1000 if lp_budget_ms else None
    key = canonical_key(p).text()
    certs = []
    failing = ()
    undecided = False
    outer_facets = 0
    outer_vertices = 0
    fts_matched = False
    sym_inner = Rat(0)
    sym_outer = Rat(0)
    try:
        outer = outer_region(p, deadline)
        outer_facets = len(outer.facets.rows)
        outer_vertices = len(outer.vertices)
        sym_outer = _symmetric_from_region(outer)
        for v in outer.vertices:
            cert = composite_member(p, v, deadline)
            if cert is None:
                failing = v
                break
            certs.append(cert)
        matched = not failing
        fts_matched = region_equal(flat_timeshare_region(p), outer)
        # equality transfers the symmetric point; otherwise search directly
        sym_inner = sym_outer if matched else symmetric_inner(p, deadline)
    except LpBudgetExceeded:
        undecided = True
        matched = False
        certs = []
    wall_ms = int((time.monotonic() - t0) * 1000)
    return VerificationRecord(
        key=key,
        problem=p.render(),
        outer_facets=outer_facets,
        outer_vertices=outer_vertices,
        matched=matched,
        flat_timeshare_matched=fts_matched,
        undecided=undecided,
        certificates=tuple(certs) if matched else (),
        failing_vertex=failing,
        symmetric_inner=sym_inner,
        symmetric_outer=sym_outer,
        wall_ms=wall_ms,
    )


def _verify_worker(args):
    text, lp_budget_ms = args
    record = verify_capacity(parse_problem(text), lp_budget_ms)
    return record.key, json.dumps(record.to_json_dict(), sort_keys=True)


def _load_done(path):
    done = {}
    if not os.path.exists(path):
        return done
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                data = json.loads(line)
                done[data["key"]] = line
            except (ValueError, KeyError):
                continue
    return done


def sweep(n: int, out, workers=1, resume=False, lp_budget_ms=None, log=None):
    """Verify every nonisomorphic problem on n messages, appending one
    record per problem to out, then rewriting it sorted by canonical key.

    Returns {"total", "matched", "flat_only_failures", "unmatched",
    "undecided"}. Interrupted runs restart cleanly with resume=True:
    finished keys are skipped, and the final file is identical either
    way.
    """
    problems = list(enumerate_problems(n))
    keys = [canonical_key(p).text() for p in problems]
    done = _load_done(out) if resume else {}
    todo = [
        (p.render(), lp_budget_ms)
        for p, key in zip(problems, keys)
        if key not in done
    ]
    mode = "a" if resume and os.path.exists(out) else "w"
    records = dict(done)
    durable = [None]

    def write_line(fh, key, line):
        try:
            fh.write(line + "\n")
            fh.flush()
        except OSError as exc:
            raise OSError(
                "sweep aborted; last durable key is %s: %s" % (durable[0], exc)
            ) from exc
        records[key] = line
        durable[0] = key
        if log:
            log(key)

    with open(out, mode, encoding="utf-8") as fh:
        if workers and workers > 1 and todo:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                pending = {pool.submit(_verify_worker, item) for item in todo}
                while pending:
                    ready, pending = wait(pending, return_when=FIRST_COMPLETED)
                    for fut in ready:
                        key, line = fut.result()
                        write_line(fh, key, line)
        else:
            for item in todo:
                key, line = _verify_worker(item)
                write_line(fh, key, line)
    ordered = [records[key] for key in sorted(records)]
    tmp = out + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        for line in ordered:
            fh.write(line + "\n")
    os.replace(tmp, out)
    # the file may carry other sweep sizes; summarize this n only
    mine = [records[key] for key in sorted(records) if key.startswith("%d:" % n)]
    total = len(mine)
    matched = 0
    undecided = 0
    flat_only = 0
    for line in mine:
        data = json.loads(line)
        if data["matched"]:
            matched += 1
            if not data["flat_timeshare_matched"]:
                flat_only += 1
        elif data["undecided"]:
            undecided += 1
    return {
        "total": total,
        "matched": matched,
        "flat_only_failures": flat_only,
        "unmatched": total - matched - undecided,
        "undecided": undecided,
    }
