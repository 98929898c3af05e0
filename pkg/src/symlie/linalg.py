"""Exact sparse Gaussian elimination over the rationals.

Equations are eliminated in the order given; within an equation the pivot is
always the smallest remaining unknown (by position in the unknown ordering).
Every elimination step is recorded, so later right-hand sides are reduced by
replaying those steps instead of refactoring.
"""

from __future__ import annotations

import heapq
from typing import Hashable, Mapping, Sequence

from .core import Rational


class InconsistentSystem(ArithmeticError):
    """No solution exists.  ``residuals`` maps equation label -> reduced rhs."""

    def __init__(self, residuals: dict):
        super().__init__(f"{len(residuals)} inconsistent equation(s)")
        self.residuals = residuals


class SparseSystem:
    def __init__(
        self,
        unknowns: Sequence[Hashable],
        equations: Sequence[Mapping[Hashable, object]],
        labels: Sequence[Hashable] | None = None,
    ):
        self.unknowns = list(unknowns)
        self.labels = list(labels) if labels is not None else list(range(len(equations)))
        self._pos = {u: i for i, u in enumerate(self.unknowns)}
        self._rows: dict[int, dict[int, object]] = {}  # pivot -> normalized row
        self._pivot_of_eq: list[int | None] = []
        self._scale: list[object] = []
        self._ops: list[list[tuple[int, object]]] = []
        for eq in equations:
            row = {}
            for u, c in eq.items():
                if c:
                    row[self._pos[u]] = Rational(c)
            self._eliminate(row)

    def _eliminate(self, row: dict) -> None:
        rows = self._rows
        ops = []
        heap = [k for k in row if k in rows]
        heapq.heapify(heap)
        while heap:
            p = heapq.heappop(heap)
            lam = row.get(p)
            if lam is None:
                continue
            prow = rows[p]
            for k, c in prow.items():
                v = row.get(k)
                if v is None:
                    row[k] = -lam * c
                    if k in rows:
                        heapq.heappush(heap, k)
                else:
                    v = v - lam * c
                    if v:
                        row[k] = v
                    else:
                        del row[k]
            ops.append((p, lam))
        self._ops.append(ops)
        if row:
            p = min(row)
            c = row[p]
            inv = 1 / c
            rows[p] = {k: v * inv for k, v in row.items()}
            self._pivot_of_eq.append(p)
            self._scale.append(inv)
        else:
            self._pivot_of_eq.append(None)
            self._scale.append(None)

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self._ops), len(self.unknowns))

    def pivots(self) -> list:
        return [self.unknowns[p] for p in sorted(self._rows)]

    def free_unknowns(self) -> list:
        return [u for i, u in enumerate(self.unknowns) if i not in self._rows]

    def _back_substitute(self, rhs_by_pivot: dict, free: Mapping[int, object]) -> dict:
        sol = dict(free)
        for p in sorted(self._rows, reverse=True):
            acc = rhs_by_pivot.get(p, 0)
            for k, c in self._rows[p].items():
                if k != p:
                    s = sol.get(k)
                    if s:
                        acc = acc - c * s
            if acc:
                sol[p] = acc
        return {self.unknowns[k]: v for k, v in sol.items() if v}

    def solve(self, rhs: Mapping[Hashable, object]) -> dict:
        """Particular solution with every free unknown set to zero.

        ``rhs`` maps equation labels to values; missing labels are zero.
        Raises InconsistentSystem when the rhs is not in the column space.
        """
        label_pos = getattr(self, "_label_pos", None)
        if label_pos is None:
            label_pos = self._label_pos = {lab: i for i, lab in enumerate(self.labels)}
        vals: list = [0] * len(self._ops)
        for lab, v in rhs.items():
            if not v:
                continue
            i = label_pos.get(lab)
            if i is None:
                raise InconsistentSystem({lab: v})
            vals[i] = Rational(v)
        reduced_by_pivot: dict = {}
        bad = {}
        for i, ops in enumerate(self._ops):
            r = vals[i]
            for p, lam in ops:
                rp = reduced_by_pivot.get(p)
                if rp:
                    r = r - lam * rp
            p = self._pivot_of_eq[i]
            if p is None:
                if r:
                    bad[self.labels[i]] = r
            elif r:
                reduced_by_pivot[p] = r * self._scale[i]
        if bad:
            raise InconsistentSystem(bad)
        return self._back_substitute(reduced_by_pivot, {})

    def kernel(self) -> list[dict]:
        """Kernel basis: one vector per free unknown (that unknown set to 1)."""
        basis = []
        for i in range(len(self.unknowns)):
            if i in self._rows:
                continue
            basis.append(self._back_substitute({}, {i: Rational(1)}))
        return basis


def rank_of(vectors: Sequence[Mapping[Hashable, object]], order: Sequence[Hashable]) -> int:
    """Rank of a family of sparse vectors whose keys are drawn from ``order``."""
    return SparseSystem(order, vectors).rank
