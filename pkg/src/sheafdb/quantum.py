"""Empirical models from pure states via the Born rule.

Each party measures in the XY plane of its Bloch sphere. A measurement at
angle ``phi`` has outcome effects

    |e0> = (|0> + e^{i phi}|1>) / sqrt(2),   |e1> = (|0> - e^{i phi}|1>) / sqrt(2)

and the probability of a joint outcome is ``|<e_1 (x) ... (x) e_n | psi>|^2``.

Phase convention: with the inner product conjugating the effect, the Bell
state gives ``P(equal outcomes) = (1 + cos(phi_A + phi_B)) / 2``, so the
effective relative angle between two settings is the *sum* of their
angles. :data:`BELL_ANGLES` is chosen accordingly (see
:func:`calibrate_bell_angles`).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .core import EmpiricalModel, Valuation, make_schema
from .errors import NoNearbyRational, NotNormalized, PartyMismatch, WrongSemiring
from .semiring import PROBABILITY, REAL

SUPPORT_THRESHOLD = 1e-9
BIT = ("0", "1")


@dataclass(frozen=True)
class StateVector:
    n: int
    amplitudes: np.ndarray  # shape (2**n,), index = bitstring read as binary, party 1 first

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (2 ** self.n,):
            raise ValueError(f"expected {2 ** self.n} amplitudes, got {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        if abs(np.vdot(amps, amps).real - 1) > 1e-9:
            raise ValueError("state is not normalized")
        object.__setattr__(self, "amplitudes", amps)

    def amplitude(self, bits: str) -> complex:
        return complex(self.amplitudes[int(bits, 2)])


def ghz_state(n: int) -> StateVector:
    if n < 2:
        raise ValueError("need at least two parties")
    amps = np.zeros(2 ** n, dtype=complex)
    amps[0] = amps[-1] = 1 / math.sqrt(2)
    return StateVector(n, amps)


def bell_state() -> StateVector:
    return ghz_state(2)


@dataclass(frozen=True)
class XyMeasurement:
    angle: float

    def effects(self) -> np.ndarray:
        """Rows are the outcome-0 and outcome-1 effect vectors."""
        phase = complex(math.cos(self.angle), math.sin(self.angle))
        return np.array([[1, phase], [1, -phase]], dtype=complex) / math.sqrt(2)


@dataclass(frozen=True)
class MeasurementScenario:
    """Per party, an ordered map from setting name to measurement."""

    parties: tuple

    @classmethod
    def from_angles(cls, parties: Sequence[Mapping[str, float]]):
        return cls(tuple(tuple((name, XyMeasurement(float(phi))) for name, phi in p.items())
                         for p in parties))

    @property
    def n(self):
        return len(self.parties)

    def settings(self):
        """All combinations choosing one setting per party, party 1 varying fastest."""
        return [tuple(reversed(c)) for c in itertools.product(*reversed(self.parties))]

    def schema(self):
        names = [name for p in self.parties for name, _ in p]
        contexts = [[name for name, _ in combo] for combo in self.settings()]
        return make_schema(contexts, {a: BIT for a in names})


def outcome_probabilities(state: StateVector, measurements: Sequence[XyMeasurement]) -> np.ndarray:
    """Probabilities of all 2**n outcome strings, party 1 most significant."""
    if len(measurements) != state.n:
        raise PartyMismatch(f"{len(measurements)} measurements for {state.n} parties")
    psi = state.amplitudes.reshape((2,) * state.n)
    amp = psi
    # Contract party k's index with the conjugated effects: result axis = outcome.
    for k, meas in enumerate(measurements):
        amp = np.tensordot(meas.effects().conj(), amp, axes=([1], [k]))
        amp = np.moveaxis(amp, 0, k)
    return (np.abs(amp) ** 2).reshape(-1)


def born_model(state: StateVector, scenario: MeasurementScenario,
               threshold: float = SUPPORT_THRESHOLD) -> EmpiricalModel:
    """Floating-point empirical model; entries at or below ``threshold`` are dropped."""
    if scenario.n != state.n:
        raise PartyMismatch(f"scenario has {scenario.n} parties, state has {state.n}")
    schema = scenario.schema()
    tables = []
    for combo, ctx in zip(scenario.settings(), schema.contexts):
        names = [name for name, _ in combo]
        probs = outcome_probabilities(state, [m for _, m in combo])
        order = [names.index(a) for a in ctx]
        entries = {}
        for bits, p in zip(itertools.product(BIT, repeat=state.n), probs):
            if p > threshold:
                entries[tuple(bits[i] for i in order)] = float(p)
        tables.append(Valuation(REAL, ctx, schema.domains_for(ctx), entries))
    return EmpiricalModel(schema, REAL, tables)


def rationalize(m: EmpiricalModel, max_denominator: int,
                tol: float = SUPPORT_THRESHOLD) -> EmpiricalModel:
    """Snap every float entry to the nearest rational with bounded denominator.

    Every entry must lie within ``tol`` of that rational, and each table must
    then sum to exactly one.
    """
    if m.semiring is not REAL:
        raise WrongSemiring("rationalize expects a floating-point model")
    tables = []
    for ctx, t in zip(m.contexts, m.tables):
        entries = {}
        for row, p in t.items():
            q = Fraction(p).limit_denominator(max_denominator)
            if abs(float(q) - p) > tol:
                raise NoNearbyRational(p, max_denominator)
            entries[row] = q
        v = Valuation(PROBABILITY, ctx, t.domains, entries)
        if v.total() != 1:
            raise NotNormalized(v.total(), f"table {list(ctx)}")
        tables.append(v)
    return EmpiricalModel(m.schema, PROBABILITY, tables)


GHZ_ANGLES = {"X": 0.0, "Y": math.pi / 2}


def ghz_scenario(n: int) -> MeasurementScenario:
    return MeasurementScenario.from_angles(
        [{f"{s}({i})": phi for s, phi in GHZ_ANGLES.items()} for i in range(1, n + 1)])


def bell_scenario(a=0.0, a_prime=math.pi / 3, b=0.0, b_prime=math.pi / 3) -> MeasurementScenario:
    return MeasurementScenario.from_angles([{"a": a, "a'": a_prime}, {"b": b, "b'": b_prime}])


def calibrate_bell_angles(target: EmpiricalModel, tol: float = 1e-9) -> dict:
    """Pick Bob's primed angle sign so the Born model reproduces ``target``.

    Alice uses 0 and pi/3, Bob uses 0 and +-pi/3; the first candidate whose
    Born table matches every entry of ``target`` within ``tol`` wins.
    """
    state = bell_state()
    for sign in (-1, 1):
        angles = dict(a=0.0, a_prime=math.pi / 3, b=0.0, b_prime=sign * math.pi / 3)
        born = born_model(state, bell_scenario(**angles))
        if all(abs(float(t[r]) - bt[r]) <= tol
               for t, bt in zip(target.tables, born.tables)
               for r in set(t.keys()) | set(bt.keys())):
            return angles
    raise ValueError("no candidate angle assignment reproduces the target table")


# Bob's primed setting sits at +pi/3 under the sum convention above.
BELL_ANGLES = dict(a=0.0, a_prime=math.pi / 3, b=0.0, b_prime=math.pi / 3)
