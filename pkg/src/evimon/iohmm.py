"""Evidential input/output hidden Markov models over tolerance curves.

A model couples a frame of system states with one constraint vector per
ordered state pair (transition tolerances over the input variables,
possibly inhibited per arc) and one constraint vector per state
(emission tolerances over the output variables).  Evaluating the
transition table on an input observation yields one consonant BBA per
source state; conditioning on arbitrary state subsets extends those
rows disjunctively, with the empty-set row pinned to the empty-set
categorical.

The all-crisp reduction is also provided: with every curve crisp, a
trace plus an expected state sequence either passes or fails exactly as
a unit test would.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .belief import (
    NORMALIZATION_RULES,
    Frame,
    MassFunction,
    categorical,
    combine_disjunctive,
    vacuous,
    _zeta_subset,
)
from .errors import LengthMismatch, ValidationError
from .possibility import ConstraintVector, evaluate_constraint_vector, \
    singleton_possibilities_to_bba
from .trace import TraceRecord


@dataclass(frozen=True, eq=False)
class EvIohmm:
    """Model tuple: frame, transition tolerances, emission tolerances, prior, rule."""

    frame: Frame
    transitions: tuple[tuple[ConstraintVector, ...], ...]
    emissions: tuple[ConstraintVector, ...]
    prior: MassFunction | None = None
    rule: str = "dempster"
    input_variables: tuple[str, ...] = ()
    output_variables: tuple[str, ...] = ()
    name: str = ""

    def __init__(
        self,
        frame: Frame,
        transitions,
        emissions,
        *,
        prior: MassFunction | None = None,
        rule: str = "dempster",
        input_variables=None,
        output_variables=None,
        name: str = "",
    ):
        n = frame.size
        transitions = tuple(tuple(row) for row in transitions)
        emissions = tuple(emissions)
        if len(transitions) != n or any(len(row) != n for row in transitions):
            raise ValidationError(
                f"transition table must be {n}x{n} constraint vectors"
            )
        if len(emissions) != n:
            raise ValidationError(f"need one emission vector per state, got {len(emissions)}")
        if rule not in NORMALIZATION_RULES:
            raise ValidationError(f"unknown normalization rule {rule!r}")
        if prior is None:
            prior = vacuous(frame)
        if prior.frame != frame:
            raise ValidationError("prior is defined on a different frame")

        seen_in = set()
        for row in transitions:
            for cv in row:
                seen_in.update(cv.required_variables())
        seen_out = set()
        for cv in emissions:
            seen_out.update(cv.required_variables())
        if input_variables is None:
            input_variables = tuple(sorted(seen_in))
        else:
            input_variables = tuple(input_variables)
            undeclared = seen_in - set(input_variables)
            if undeclared:
                raise ValidationError(
                    f"transition constraints reference undeclared inputs {sorted(undeclared)}"
                )
        if output_variables is None:
            output_variables = tuple(sorted(seen_out))
        else:
            output_variables = tuple(output_variables)
            undeclared = seen_out - set(output_variables)
            if undeclared:
                raise ValidationError(
                    f"emission constraints reference undeclared outputs {sorted(undeclared)}"
                )

        for attr, value in (
            ("frame", frame),
            ("transitions", transitions),
            ("emissions", emissions),
            ("prior", prior),
            ("rule", rule),
            ("input_variables", input_variables),
            ("output_variables", output_variables),
            ("name", name),
        ):
            object.__setattr__(self, attr, value)

    @property
    def is_crisp(self) -> bool:
        cvs = [cv for row in self.transitions for cv in row] + list(self.emissions)
        return all(cv.is_crisp for cv in cvs)

    def transition_possibilities(self, inputs: Mapping[str, float]) -> np.ndarray:
        """N x N matrix of per-arc possibilities for one input observation."""
        n = self.frame.size
        out = np.empty((n, n))
        labels = self.frame.labels
        for i in range(n):
            for j in range(n):
                out[i, j] = evaluate_constraint_vector(
                    self.transitions[i][j],
                    inputs,
                    context=f"transition {labels[i]}->{labels[j]}",
                )
        return out

    def emission_possibilities(self, outputs: Mapping[str, float]) -> np.ndarray:
        labels = self.frame.labels
        return np.array(
            [
                evaluate_constraint_vector(
                    cv, outputs, context=f"emission of state {labels[j]}"
                )
                for j, cv in enumerate(self.emissions)
            ]
        )


class ConditionalTransitionBBAs:
    """Transition beliefs conditional on every subset of previous states.

    Singleton rows come straight from the evaluated tolerance curves;
    the row for a larger subset is the disjunctive combination of its
    member singleton rows, and the empty-set row is the empty-set
    categorical.  Rows are materialized lazily: the forward pass only
    ever weights rows with nonzero conditioning mass.
    """

    def __init__(self, frame: Frame, singleton_rows: Sequence[MassFunction]):
        if len(singleton_rows) != frame.size:
            raise ValueError("need one row per state")
        for row in singleton_rows:
            if row.frame != frame:
                raise ValueError("row frame mismatch")
        self.frame = frame
        self.singleton_rows = tuple(singleton_rows)
        self._cache: dict[int, MassFunction] = {0: categorical(frame, 0)}
        for i, row in enumerate(singleton_rows):
            self._cache[1 << i] = row

    def row(self, subset) -> MassFunction:
        """Row conditional on a subset of previous states (labels or mask)."""
        mask = self.frame.mask_of(subset)
        got = self._cache.get(mask)
        if got is None:
            low = mask & -mask
            got = combine_disjunctive(self.row(mask ^ low), self._cache[low])
            self._cache[mask] = got
        return got

    @property
    def rows(self) -> dict[int, MassFunction]:
        """All 2**N rows, materialized (vectorized implicability products)."""
        if len(self._cache) < self.frame.n_subsets:
            n = self.frame.size
            size = self.frame.n_subsets
            table = np.empty((size, size))
            table[0] = 1.0  # empty-set categorical has implicability 1 everywhere
            singles = [
                _zeta_subset(row.masses.copy()) for row in self.singleton_rows
            ]
            for mask in range(1, size):
                low = mask & -mask
                table[mask] = table[mask ^ low] * singles[low.bit_length() - 1]
            for i in range(n):
                v = table.reshape(size, -1, 2, 1 << i)
                v[:, :, 1, :] -= v[:, :, 0, :]
            for mask in range(size):
                if mask not in self._cache:
                    self._cache[mask] = MassFunction(self.frame, table[mask])
        return {mask: self._cache[mask] for mask in range(self.frame.n_subsets)}


def build_transition_rows(
    model: EvIohmm, inputs: Mapping[str, float]
) -> ConditionalTransitionBBAs:
    """Evaluate the transition table on one input and lift rows to BBAs."""
    poss = model.transition_possibilities(inputs)
    rows = [
        singleton_possibilities_to_bba(model.frame, poss[i])
        for i in range(model.frame.size)
    ]
    return ConditionalTransitionBBAs(model.frame, rows)


def emission_bba(model: EvIohmm, outputs: Mapping[str, float]) -> MassFunction:
    """Belief over states given one output observation."""
    return singleton_possibilities_to_bba(
        model.frame, model.emission_possibilities(outputs)
    )


def deterministic_test(
    model: EvIohmm,
    expected_states: Sequence[str],
    trace: Sequence[TraceRecord],
) -> int:
    """PASS/FAIL unit test of a trace against an expected state sequence.

    Requires an all-crisp model.  Returns 1 iff the first output lies in
    the first expected state's zone and, for every later instant, the
    record's input lies in the crisp zone of the expected transition and
    its output in the crisp zone of the expected state.
    """
    if not model.is_crisp:
        raise ValidationError("deterministic test needs an all-crisp model")
    if len(expected_states) != len(trace):
        raise LengthMismatch(
            f"{len(expected_states)} expected states for {len(trace)} records"
        )
    idx = [model.frame.index(s) for s in expected_states]
    emission = model.emission_possibilities(trace[0].outputs)[idx[0]]
    if emission != 1.0:
        return 0
    labels = model.frame.labels
    for t in range(1, len(trace)):
        arc = model.transitions[idx[t - 1]][idx[t]]
        if (
            evaluate_constraint_vector(
                arc,
                trace[t].inputs,
                context=f"transition {labels[idx[t-1]]}->{labels[idx[t]]}",
            )
            != 1.0
        ):
            return 0
        if model.emission_possibilities(trace[t].outputs)[idx[t]] != 1.0:
            return 0
    return 1


def best_deterministic_test(
    model: EvIohmm, trace: Sequence[TraceRecord]
) -> int:
    """Deterministic test maximized over all expected state sequences."""
    labels = model.frame.labels
    for seq in itertools.product(labels, repeat=len(trace)):
        if deterministic_test(model, seq, trace):
            return 1
    return 0
