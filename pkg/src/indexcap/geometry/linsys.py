"""Finite systems of closed linear inequalities a.x <= b over named variables.

Rows are kept in a normal form that makes syntactic equality detect
duplicates: each row is scaled by the unique positive rational making the
coefficients coprime integers (the bound may stay fractional). Equalities
are stored as paired opposite inequalities. A row with all-zero
coefficients and a negative bound is the canonical "infeasible" row
0 <= -1; trivially true zero rows are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, lcm

from ..rat import Rat, rat_str


def normalize_row(coeffs, rhs):
    """Normal form of a row, or None when the row is trivially true."""
    coeffs = [Rat(c) for c in coeffs]
    rhs = Rat(rhs)
    if all(c == 0 for c in coeffs):
        if rhs >= 0:
            return None
        return (tuple(0 for _ in coeffs), Rat(-1))
    scale = 1
    for c in coeffs:
        scale = lcm(scale, c.denominator)
    ints = [int(c * scale) for c in coeffs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return (tuple(v // g for v in ints), rhs * Rat(scale, g))


@dataclass(frozen=True)
class LinearSystem:
    """Inequalities a.x <= b; variables ordered, rows normalized and sorted."""

    variables: tuple
    rows: tuple

    @classmethod
    def make(cls, variables, raw_rows) -> "LinearSystem":
        variables = tuple(variables)
        seen = set()
        rows = []
        for coeffs, rhs in raw_rows:
            if len(coeffs) != len(variables):
                raise ValueError(
                    "row has %d coefficients for %d variables" % (len(coeffs), len(variables))
                )
            row = normalize_row(coeffs, rhs)
            if row is None or row in seen:
                continue
            seen.add(row)
            rows.append(row)
        rows.sort()
        return cls(variables, tuple(rows))

    @classmethod
    def from_dict_rows(cls, variables, dict_rows) -> "LinearSystem":
        """Rows given as (mapping variable -> coeff, rhs)."""
        variables = tuple(variables)
        index = {v: i for i, v in enumerate(variables)}
        raw = []
        for mapping, rhs in dict_rows:
            coeffs = [0] * len(variables)
            for name, c in mapping.items():
                coeffs[index[name]] = coeffs[index[name]] + c
            raw.append((coeffs, rhs))
        return cls.make(variables, raw)

    def with_rows(self, extra_raw) -> "LinearSystem":
        return LinearSystem.make(self.variables, list(self.rows) + list(extra_raw))

    def without_row(self, i: int) -> "LinearSystem":
        rows = self.rows[:i] + self.rows[i + 1 :]
        return LinearSystem(self.variables, rows)

    def var_index(self, name: str) -> int:
        return self.variables.index(name)

    def trivially_infeasible(self) -> bool:
        zero = tuple(0 for _ in self.variables)
        return (zero, Rat(-1)) in self.rows

    def satisfies(self, point) -> bool:
        """Does the point (aligned with variables) satisfy every row?"""
        if len(point) != len(self.variables):
            raise ValueError(
                "point has dimension %d, system has %d" % (len(point), len(self.variables))
            )
        for coeffs, rhs in self.rows:
            total = 0
            for c, x in zip(coeffs, point):
                if c:
                    total += c * Rat(x)
            if total > rhs:
                return False
        return True

    def row_string(self, i: int) -> str:
        return row_string(self.variables, self.rows[i])

    def pretty(self) -> str:
        return "\n".join(self.row_string(i) for i in range(len(self.rows)))


def row_string(variables, row) -> str:
    """Human form, zero coefficients skipped: "R1 + 2 R3 <= 1"."""
    coeffs, rhs = row
    parts = []
    for name, c in zip(variables, coeffs):
        if c == 0:
            continue
        mag = abs(c)
        term = name if mag == 1 else "%d %s" % (mag, name)
        if not parts:
            parts.append(term if c > 0 else "-" + term)
        else:
            parts.append(("+ " if c > 0 else "- ") + term)
    if not parts:
        parts.append("0")
    return "%s <= %s" % (" ".join(parts), rat_str(rhs))
