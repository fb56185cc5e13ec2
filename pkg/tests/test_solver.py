import itertools
import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import BIT, brute_assignments, vertex_feasible
from sheafdb import models
from sheafdb.errors import DimensionMismatch, EnumerationTooLarge
from sheafdb.gluing import hidden_variable_system, support_constraints
from sheafdb.solver import (
    Feasible, Infeasible, LinearSystem, SupportConstraintSet, check_assignment,
    find_assignment, lp_feasible, search_order, verify_certificate, verify_solution,
)


def test_single_equation_vertex():
    res = lp_feasible(LinearSystem([[1, 1]], [1]))
    assert res == Feasible((F(1), F(0)))


def test_contradictory_duplicate_rows():
    system = LinearSystem([[1, 1], [1, 1]], [1, 2])
    res = lp_feasible(system)
    assert isinstance(res, Infeasible)
    assert res.certificate.y == (F(1), F(-1))
    assert res.certificate.verify(system)


def test_bell_certificate_from_hand_argument():
    # Any global assignment with a=b=0 also realizes one of the three
    # remaining events, so P(a=b=0) <= their sum: 1/2 <= 3/8 fails.
    system = hidden_variable_system(models.bell_model())
    coeff = {
        (("a", "b"), ("0", "0")): -1,
        (("a'", "b"), ("1", "0")): 1,
        (("a", "b'"), ("0", "1")): 1,
        (("a'", "b'"), ("0", "0")): 1,
    }
    y = [F(coeff.get(label, 0)) for label in system.rows]
    assert verify_certificate(system, y)
    assert sum(yi * b for yi, b in zip(y, system.rhs)) == F(-1, 8)
    assert isinstance(lp_feasible(system), Infeasible)


def test_dimension_checks():
    with pytest.raises(DimensionMismatch):
        LinearSystem([[1, 2], [1]], [1, 2])
    with pytest.raises(DimensionMismatch):
        LinearSystem([[1]], [1, 2])
    with pytest.raises(DimensionMismatch):
        LinearSystem([[1, 2]], [1], columns=["x", "x"])


def test_dump_format():
    text = LinearSystem([[1, F(1, 2)], [0, 3]], [1, F(-2, 3)]).dump()
    assert text == "1 1/2 | 1\n0 3 | -2/3\n"


def test_verifiers_reject_bad_witnesses():
    system = LinearSystem([[1, 1]], [1])
    assert not verify_solution(system, [F(1, 2), F(1, 4)])
    assert not verify_solution(system, [F(2), F(-1)])
    assert not verify_certificate(system, [F(1)])


def _random_system(rng):
    m, n = rng.randint(1, 6), rng.randint(1, 8)
    A = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(m)]
    if rng.random() < 0.5:
        x0 = [rng.randint(0, 2) for _ in range(n)]
        b = [sum(a * x for a, x in zip(row, x0)) for row in A]
    else:
        b = [rng.randint(-3, 3) for _ in range(m)]
    return A, b


def test_lp_agrees_with_vertex_enumeration():
    rng = random.Random(2024)
    outcomes = {True: 0, False: 0}
    for _ in range(120):
        A, b = _random_system(rng)
        res = lp_feasible(LinearSystem(A, b))
        expected = vertex_feasible(A, b)
        assert isinstance(res, Feasible) == expected, (A, b)
        outcomes[expected] += 1
    assert min(outcomes.values()) > 10


def test_lp_is_deterministic():
    rng = random.Random(5)
    for _ in range(20):
        A, b = _random_system(rng)
        assert lp_feasible(LinearSystem(A, b)) == lp_feasible(LinearSystem(A, b))


# -- assignment search ------------------------------------------------------------

def test_search_examples():
    hardy = models.hardy_model()
    assert find_assignment(support_constraints(hardy), hardy.schema.domains) == \
        {"a": "1", "a'": "0", "b": "1", "b'": "0"}
    ghz = models.ghz_model(4)
    assert find_assignment(support_constraints(ghz), ghz.schema.domains) is None
    doms = {a: BIT for a in "xyz"}
    full = [("x", "y"), ("y", "z")]
    allowed = [{(p, q) for p in BIT for q in BIT}] * 2
    assert find_assignment(SupportConstraintSet(full, allowed), doms) == {"x": "0", "y": "0", "z": "0"}


def test_search_cap():
    ghz = models.ghz_model(4)
    with pytest.raises(EnumerationTooLarge):
        find_assignment(support_constraints(ghz), ghz.schema.domains, cap=255)


@st.composite
def constraint_sets(draw):
    names = [f"v{i}" for i in range(draw(st.integers(1, 6)))]
    doms = {a: tuple(str(k) for k in range(draw(st.integers(1, 3)))) for a in names}
    # keep the space within 2^12 assignments
    while len(names) > 1 and math.prod(len(doms[a]) for a in names) > 4096:
        names.pop()
    contexts, allowed = [], []
    for _ in range(draw(st.integers(1, 5))):
        ctx = tuple(sorted(draw(st.sets(st.sampled_from(names), min_size=1, max_size=3))))
        rows = list(itertools.product(*(doms[a] for a in ctx)))
        keep = draw(st.sets(st.sampled_from(rows))) if rows else set()
        contexts.append(ctx)
        allowed.append(keep)
    used = sorted(set().union(*contexts))
    return SupportConstraintSet(contexts, allowed), {a: doms[a] for a in used}


@settings(max_examples=300, deadline=None)
@given(constraint_sets())
def test_search_matches_enumeration(case):
    constraints, doms = case
    order = search_order(constraints, doms)
    expected = brute_assignments(constraints.contexts, constraints.allowed, doms, order)
    got = find_assignment(constraints, doms)
    if not expected:
        assert got is None
    else:
        assert got == expected[0]
        assert check_assignment(constraints, got)
    assert find_assignment(constraints, doms) == got
