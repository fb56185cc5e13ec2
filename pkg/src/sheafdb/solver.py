"""Exact feasibility kernels.

* :func:`lp_feasible` decides ``{x >= 0 : A x = b}`` over the rationals with
  a phase-1 simplex (Bland's rule) and returns either a vertex solution or a
  Farkas certificate ``y`` with ``y A >= 0`` and ``y b < 0``.
* :func:`find_assignment` searches for a global assignment whose
  restriction to every context is an allowed tuple.

Both re-verify their answer with exact arithmetic before returning it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import DimensionMismatch, EnumerationTooLarge, SolverError
from .core import DEFAULT_CAP
from .semiring import format_rational

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class LinearSystem:
    """Equality system ``matrix @ x = rhs`` with ``x >= 0``."""

    matrix: list
    rhs: list
    columns: list = field(default_factory=list)
    rows: list = field(default_factory=list)

    def __post_init__(self):
        self.matrix = [[Fraction(v) for v in r] for r in self.matrix]
        self.rhs = [Fraction(v) for v in self.rhs]
        if len(self.matrix) != len(self.rhs):
            raise DimensionMismatch(f"{len(self.matrix)} rows but {len(self.rhs)} rhs entries")
        widths = {len(r) for r in self.matrix}
        if len(widths) > 1:
            raise DimensionMismatch(f"rows of unequal length {sorted(widths)}")
        n = widths.pop() if widths else len(self.columns)
        if not self.columns:
            self.columns = [f"x{j + 1}" for j in range(n)]
        if len(self.columns) != n:
            raise DimensionMismatch(f"{len(self.columns)} labels for {n} columns")
        if len(set(map(_hashable, self.columns))) != n:
            raise DimensionMismatch("column labels are not distinct")
        if not self.rows:
            self.rows = [f"r{i + 1}" for i in range(len(self.rhs))]

    @property
    def shape(self):
        return len(self.rhs), len(self.columns)

    def dump(self) -> str:
        """Plain text: one row per line, ``p/q`` entries, ``|`` before the rhs."""
        lines = []
        for row, b in zip(self.matrix, self.rhs):
            lines.append(" ".join(format_rational(v) for v in row) + " | " + format_rational(b))
        return "\n".join(lines) + ("\n" if lines else "")


def _hashable(x):
    return tuple(sorted(x.items())) if isinstance(x, dict) else x


@dataclass(frozen=True)
class FarkasCertificate:
    y: tuple

    def verify(self, system: LinearSystem) -> bool:
        return verify_certificate(system, self.y)


@dataclass(frozen=True)
class Feasible:
    x: tuple


@dataclass(frozen=True)
class Infeasible:
    certificate: FarkasCertificate


def verify_solution(system: LinearSystem, x: Sequence[Fraction]) -> bool:
    if len(x) != system.shape[1] or any(v < 0 for v in x):
        return False
    return all(sum((a * v for a, v in zip(row, x) if a), ZERO) == b
               for row, b in zip(system.matrix, system.rhs))


def verify_certificate(system: LinearSystem, y: Sequence[Fraction]) -> bool:
    m, n = system.shape
    if len(y) != m:
        return False
    if sum((yi * b for yi, b in zip(y, system.rhs)), ZERO) >= 0:
        return False
    for j in range(n):
        if sum((yi * row[j] for yi, row in zip(y, system.matrix) if yi), ZERO) < 0:
            return False
    return True


def lp_feasible(system: LinearSystem):
    """Decide feasibility of ``system`` exactly.

    Phase 1 minimizes the sum of one artificial variable per row, starting
    from the all-artificial basis. Entering and leaving variables follow
    Bland's rule, so the pivot sequence is deterministic and cannot cycle.
    The Farkas certificate is read off the optimal phase-1 duals.
    """
    m, n = system.shape
    sign = [(-1 if b < 0 else 1) for b in system.rhs]
    width = n + m
    # Row i of the tableau: [A' | I] with A' = sign_i * A_i; last entry is rhs.
    tab = []
    for i in range(m):
        row = [sign[i] * v for v in system.matrix[i]]
        row += [ONE if k == i else ZERO for k in range(m)]
        row.append(sign[i] * system.rhs[i])
        tab.append(row)
    basis = [n + i for i in range(m)]
    # Reduced costs for phase-1 costs c = (0, 1); last entry is -objective.
    red = [ZERO] * (width + 1)
    for j in range(n):
        red[j] = -sum((tab[i][j] for i in range(m)), ZERO)
    red[width] = -sum((tab[i][width] for i in range(m)), ZERO)

    while True:
        enter = next((j for j in range(width) if red[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][width] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            # Phase 1 is bounded below by zero, so this cannot happen.
            raise SolverError("unbounded phase-1 problem")
        _pivot(tab, red, leave, enter)
        basis[leave] = enter

    objective = -red[width]
    if objective == 0:
        x = [ZERO] * n
        for i, j in enumerate(basis):
            if j < n:
                x[j] = tab[i][width]
        if not verify_solution(system, x):
            raise SolverError("simplex solution failed re-verification")
        return Feasible(tuple(x))

    # Duals y_i = c(a_i) - reduced cost(a_i) = 1 - red[n + i]; they satisfy
    # y A' <= 0 and y b' = objective > 0, so -sign*y is a certificate for A.
    y = tuple(-(ONE - red[n + i]) * sign[i] for i in range(m))
    if not verify_certificate(system, y):
        raise SolverError("Farkas certificate failed re-verification")
    return Infeasible(FarkasCertificate(y))


def _pivot(tab, red, r, c):
    prow = tab[r]
    p = prow[c]
    if p != 1:
        prow[:] = [v / p for v in prow]
    nz = [(k, v) for k, v in enumerate(prow) if v]
    for i, row in enumerate(tab):
        if i != r:
            f = row[c]
            if f:
                for k, v in nz:
                    row[k] -= f * v
    f = red[c]
    if f:
        for k, v in nz:
            red[k] -= f * v


# -- global assignment search ---------------------------------------------

@dataclass
class SupportConstraintSet:
    """Per-context allowed tuples; each tuple is aligned with its context."""

    contexts: list
    allowed: list

    def __post_init__(self):
        self.contexts = [tuple(c) for c in self.contexts]
        self.allowed = [frozenset(map(tuple, a)) for a in self.allowed]
        if len(self.contexts) != len(self.allowed):
            raise DimensionMismatch("one allowed set per context is required")
        for c, a in zip(self.contexts, self.allowed):
            if any(len(t) != len(c) for t in a):
                raise DimensionMismatch(f"allowed tuple of wrong width for context {c}")


def search_order(constraints: SupportConstraintSet,
                 domains: Mapping[str, Sequence[str]]) -> list[str]:
    """Static variable order: most constrained attribute first.

    An attribute's weight is the number of excluded tuples summed over the
    contexts containing it; ties are broken by name.
    """
    excluded: dict[str, int] = {}
    for ctx, allowed in zip(constraints.contexts, constraints.allowed):
        gap = math.prod(len(domains[a]) for a in ctx) - len(allowed)
        for a in ctx:
            excluded[a] = excluded.get(a, 0) + gap
    return sorted(excluded, key=lambda a: (-excluded[a], a))


def assignment_count(attrs, domains) -> int:
    return math.prod(len(domains[a]) for a in attrs)


def find_assignment(constraints: SupportConstraintSet, domains: Mapping[str, Sequence[str]],
                    cap: int = DEFAULT_CAP, order: Sequence[str] | None = None):
    """Depth-first search for a consistent global assignment.

    Attributes are tried in ``order`` (default: :func:`search_order`) and
    values in domain order; a context is checked as soon as its last
    attribute is assigned. Returns the first witness in that order as a dict
    keyed in canonical attribute order, or ``None`` when unsatisfiable.
    """
    attrs = sorted(set().union(*constraints.contexts)) if constraints.contexts else []
    size = assignment_count(attrs, domains)
    if size > cap:
        raise EnumerationTooLarge(size, cap)
    if order is None:
        order = search_order(constraints, domains)
    order = list(order)
    if sorted(order) != attrs:
        raise DimensionMismatch("search order must list every attribute exactly once")
    depth_of = {a: k for k, a in enumerate(order)}
    # checks[k]: contexts completed when order[k] is assigned, as
    # (positions in the assignment vector, allowed set).
    checks: list[list] = [[] for _ in order]
    for ctx, allowed in zip(constraints.contexts, constraints.allowed):
        if not ctx:
            if () not in allowed:
                return None
            continue
        last = max(depth_of[a] for a in ctx)
        checks[last].append(([depth_of[a] for a in ctx], allowed))
    doms = [domains[a] for a in order]
    values = [None] * len(order)
    n = len(order)

    def consistent(k):
        for pos, allowed in checks[k]:
            if tuple(values[p] for p in pos) not in allowed:
                return False
        return True

    # Iterative DFS keeps deep schemas clear of the recursion limit.
    choice = [-1] * n
    k = 0
    if n == 0:
        return {}
    while k >= 0:
        choice[k] += 1
        if choice[k] >= len(doms[k]):
            choice[k] = -1
            k -= 1
            continue
        values[k] = doms[k][choice[k]]
        if consistent(k):
            if k == n - 1:
                witness = {a: values[depth_of[a]] for a in attrs}
                if not check_assignment(constraints, witness):
                    raise SolverError("search witness failed re-verification")
                return witness
            k += 1
    return None


def check_assignment(constraints: SupportConstraintSet, assignment: Mapping[str, str]) -> bool:
    return all(tuple(assignment[a] for a in ctx) in allowed
               for ctx, allowed in zip(constraints.contexts, constraints.allowed))
