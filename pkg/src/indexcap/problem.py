"""Index coding problems as directed graphs.

A problem is a message count n plus side information sets A_j (what
receiver j already knows). The digraph G has an edge (j, k) iff j is in
A_k. Everything downstream (interfering sets, canonical keys for
isomorphism classes, exhaustive enumeration) derives from that.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

import numpy as np

from . import _kernels

CANONICAL_LIMIT = 7
ENUMERATE_LIMIT = 5


class ProblemError(ValueError):
    """Raised for malformed or inconsistent problem descriptions."""


@dataclass(frozen=True)
class Problem:
    """An index coding instance: n messages, side info A_j per receiver."""

    n: int
    side_info: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ProblemError("message count must be >= 1, got %d" % self.n)
        if len(self.side_info) != self.n:
            raise ProblemError(
                "expected %d side information sets, got %d" % (self.n, len(self.side_info))
            )
        for j, a in enumerate(self.side_info, start=1):
            if tuple(sorted(set(a))) != tuple(a):
                raise ProblemError("side information for receiver %d is not sorted-unique" % j)
            for k in a:
                if k == j:
                    raise ProblemError(
                        "receiver %d lists itself in its side information" % j
                    )
                if not 1 <= k <= self.n:
                    raise ProblemError(
                        "index %d out of range for %d messages (receiver %d)"
                        % (k, self.n, j)
                    )

    @classmethod
    def from_side_info(cls, n: int, side_info) -> "Problem":
        return cls(n, tuple(tuple(sorted(set(a))) for a in side_info))

    @classmethod
    def symmetric(cls, n: int, u: int, d: int) -> "Problem":
        """Receiver j knows the u messages before it and d after it, cyclically."""
        if u < 0 or d < 0 or u + d > n - 1:
            raise ProblemError("need u, d >= 0 and u + d <= n - 1")
        side = []
        for j in range(1, n + 1):
            a = set()
            for delta in range(-u, d + 1):
                if delta == 0:
                    continue
                a.add((j - 1 + delta) % n + 1)
            side.append(a)
        return cls.from_side_info(n, side)

    def side_set(self, j: int) -> frozenset:
        return frozenset(self.side_info[j - 1])

    def interfering(self, j: int) -> frozenset:
        """B_j: messages receiver j neither wants nor knows."""
        return frozenset(range(1, self.n + 1)) - {j} - self.side_set(j)

    def edges(self):
        """Directed edges (j, k), present iff j in A_k."""
        return [
            (j, k)
            for k in range(1, self.n + 1)
            for j in self.side_info[k - 1]
        ]

    def render(self) -> str:
        return ",".join(
            "(%d|%s)" % (j, ",".join(str(k) for k in a))
            for j, a in enumerate(self.side_info, start=1)
        )

    def to_json_dict(self) -> dict:
        return {"n": self.n, "side_info": [list(a) for a in self.side_info]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "Problem":
        try:
            n = int(data["n"])
            side = data["side_info"]
        except (KeyError, TypeError) as exc:
            raise ProblemError("structured problem needs keys n and side_info") from exc
        return cls.from_side_info(n, side)


@dataclass(frozen=True, order=True)
class CanonicalKey:
    """Lexicographically minimal adjacency bit string over all relabelings."""

    n: int
    bits: str

    def text(self) -> str:
        return "%d:%s" % (self.n, self.bits)

    @classmethod
    def from_text(cls, text: str) -> "CanonicalKey":
        n_str, _, bits = text.partition(":")
        return cls(int(n_str), bits)


_GROUP_RE = re.compile(r"\s*\(\s*(\d+)\s*\|\s*([^()]*?)\s*\)\s*")


def parse_problem(text: str) -> Problem:
    """Parse "(1|2),(2|1,3),(3|1)" style problem text.

    Side info may be empty, written "(j|)" or "(j|-)". Whitespace is
    tolerated everywhere; rendering always emits the compact "(j|)" form.
    """
    pos = 0
    raw_groups = []
    if text.strip() == "":
        raise ProblemError("malformed problem text: empty input")
    while pos < len(text):
        m = _GROUP_RE.match(text, pos)
        if not m:
            raise ProblemError("malformed problem text near %r" % text[pos : pos + 16])
        raw_groups.append((m.group(1), m.group(2)))
        pos = m.end()
        if pos < len(text):
            if text[pos] != ",":
                raise ProblemError("malformed problem text near %r" % text[pos : pos + 16])
            pos += 1
    n = len(raw_groups)
    side = [None] * n
    for j_str, body in raw_groups:
        j = int(j_str)
        if not 1 <= j <= n:
            raise ProblemError("receiver %d out of range for %d messages" % (j, n))
        if side[j - 1] is not None:
            raise ProblemError("duplicate receiver %d" % j)
        body = body.strip()
        if body in ("", "-"):
            entries = []
        else:
            entries = []
            for token in body.split(","):
                token = token.strip()
                if not token.isdigit():
                    raise ProblemError("malformed side information token %r" % token)
                entries.append(int(token))
        side[j - 1] = entries
    return Problem.from_side_info(n, side)


def interfering_sets(p: Problem) -> list:
    """B_j = [1..n] \\ ({j} u A_j) for every receiver, as sorted tuples."""
    return [tuple(sorted(p.interfering(j))) for j in range(1, p.n + 1)]


def relabel(p: Problem, perm) -> Problem:
    """Apply a vertex relabeling; perm[j-1] is the new label of j."""
    perm = tuple(perm)
    if sorted(perm) != list(range(1, p.n + 1)):
        raise ProblemError("perm must be a bijection on 1..%d" % p.n)
    side = [None] * p.n
    for j in range(1, p.n + 1):
        side[perm[j - 1] - 1] = [perm[k - 1] for k in p.side_info[j - 1]]
    return Problem.from_side_info(p.n, side)


def _mask_of(p: Problem) -> int:
    mask = 0
    for j, k in p.edges():
        mask |= 1 << _kernels.bit_position(p.n, j, k)
    return mask


def _problem_from_mask(n: int, mask: int) -> Problem:
    side = [set() for _ in range(n)]
    for j, k in _kernels.pair_order(n):
        if mask >> _kernels.bit_position(n, j, k) & 1:
            side[k - 1].add(j)
    return Problem.from_side_info(n, side)


def _bits_str(n: int, mask: int) -> str:
    length = n * (n - 1)
    return format(mask, "0%db" % length) if length else ""


def canonical_key(p: Problem, limit: int = CANONICAL_LIMIT) -> CanonicalKey:
    """Minimum adjacency bit string over all n! relabelings.

    Equal keys iff the digraphs are isomorphic. Exhaustive by design, so
    n is capped (default 7).
    """
    if p.n > limit:
        raise ProblemError("canonical_key limited to n <= %d, got n = %d" % (limit, p.n))
    edges = p.edges()
    n = p.n
    bitpos = {
        (j, k): _kernels.bit_position(n, j, k) for (j, k) in _kernels.pair_order(n)
    }
    best = None
    for perm in itertools.permutations(range(1, n + 1)):
        mask = 0
        for j, k in edges:
            mask |= 1 << bitpos[(perm[j - 1], perm[k - 1])]
        if best is None or mask < best:
            best = mask
    return CanonicalKey(n, _bits_str(n, best or 0))


def enumerate_problems(n: int):
    """One representative Problem per digraph isomorphism class, ascending key.

    Yields 1, 3, 16, 218, 9608 problems for n = 1..5. The batch kernel
    canonicalizes all 2^(n(n-1)) adjacency masks; representatives are the
    masks equal to their own canonical form.
    """
    if not 1 <= n <= ENUMERATE_LIMIT:
        raise ProblemError(
            "enumerate_problems limited to 1 <= n <= %d, got n = %d"
            % (ENUMERATE_LIMIT, n)
        )
    length = n * (n - 1)
    masks = np.arange(1 << length, dtype=np.uint32)
    canon = _kernels.batch_canonical(masks, n)
    reps = np.nonzero(canon == masks)[0]
    for mask in reps:
        yield _problem_from_mask(n, int(mask))
