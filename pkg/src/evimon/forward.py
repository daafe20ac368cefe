"""Evidential forward pass and the degree-of-effectiveness products.

Each step predicts the next-state belief from the current one through
the input-conditioned transition rows, conjunctively combines the
prediction with the output-conditioned emission belief, records the
conflict the combination sent to the empty set, and renormalizes so the
running belief stays a normal BBA.  The degree of effectiveness of a
record sequence is the product of (1 - conflict) over its steps: the
plausibility that the observed behavior was produced by the model.

Prediction weights each singleton transition row by the prior's
normalized singleton plausibility (its contour).  Conditioning mass
never reaches larger subsets, whose disjunctively extended rows exist
for inspection but carry zero weight; see ``conditioning_weights``.

Two implementations are provided: a reference path through the public
mass-function objects and materialized conditional rows, and a fast path
that stays in commonality space end to end (on singletons commonality
equals plausibility, so this is the plausibility shortcut: combination,
conflict extraction and Dempster/Yager renormalization are all pointwise
there, and consonant rows are built directly as subset minima).  Both
paths agree to float precision; the fast one is O(N * 2**N) per step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .belief import (
    MassFunction,
    SetFunction,
    combine_conjunctive,
    commonality_to_mass,
    mass_to_commonality,
    normalize,
    vacuous,
    _mobius_superset,
    _zeta_superset,
)
from .errors import EmptyLog, TotalConflict, TraceTooShort
from .iohmm import (
    ConditionalTransitionBBAs,
    EvIohmm,
    build_transition_rows,
    emission_bba,
)
from .possibility import evaluate_constraint_vector
from .trace import TraceRecord

_TOTAL_CONFLICT_EPS = 1e-12
_CONTOUR_EPS = 1e-15


def _clip_unit(value: float) -> float:
    return min(1.0, max(0.0, float(value)))


# ---------------------------------------------------------------------------
# prediction
# ---------------------------------------------------------------------------

def conditioning_weights(prior: MassFunction) -> np.ndarray:
    """Mixture weight of each conditioning subset for the prediction step.

    The prior's singleton commonalities (= singleton plausibilities, its
    contour) are normalized into weights on the singleton subsets; every
    other subset gets weight zero.  A prior whose contour vanishes
    entirely conditions on the empty set.
    """
    frame = prior.frame
    q = mass_to_commonality(prior).values
    weights = np.zeros(frame.n_subsets)
    singles = [1 << i for i in range(frame.size)]
    contour = q[singles]
    total = float(contour.sum())
    if total <= _CONTOUR_EPS:
        weights[0] = 1.0
    else:
        weights[singles] = contour / total
    return weights


def predict(prior: MassFunction, rows: ConditionalTransitionBBAs) -> MassFunction:
    """Commonality-space mixture of conditional rows under the prior's weights."""
    frame = rows.frame
    weights = conditioning_weights(prior)
    q_hat = np.zeros(frame.n_subsets)
    for mask in np.flatnonzero(weights):
        q_hat += weights[mask] * mass_to_commonality(rows.row(int(mask))).values
    return commonality_to_mass(SetFunction(frame, "commonality", q_hat))


# ---------------------------------------------------------------------------
# forward recursion over mass-function objects (reference path)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ForwardState:
    """Running normalized belief plus the conflict recorded at each step."""

    current: MassFunction
    conflict_log: tuple[float, ...]
    resets: tuple[int, ...] = ()

    @property
    def step_index(self) -> int:
        return len(self.conflict_log)


def _normalize_step(
    combined: MassFunction,
    parents: tuple[MassFunction, MassFunction],
    rule: str,
) -> tuple[MassFunction, bool]:
    """Renormalize one step's combination; True flags a vacuous reset."""
    if rule == "dempster":
        try:
            return normalize(combined, "dempster"), False
        except TotalConflict:
            # model breakdown: keep monitoring from total ignorance
            return vacuous(combined.frame), True
    return normalize(combined, rule, parents=parents), False


def forward_init(model: EvIohmm, outputs: Mapping[str, float]) -> ForwardState:
    """Start a pass: with a vacuous prior the first belief is the emission's.

    The emission's empty-set mass is then the first recorded conflict.
    The combination with the (normally vacuous) prior also defines the
    Dubois-Prade parents, under which the rule reduces to the Yager
    transfer at this step.
    """
    e = emission_bba(model, outputs)
    combined = combine_conjunctive(e, model.prior)
    conflict = _clip_unit(combined.conflict)
    current, reset = _normalize_step(combined, (e, model.prior), model.rule)
    return ForwardState(current, (conflict,), (0,) if reset else ())


def forward_step(
    state: ForwardState,
    model: EvIohmm,
    inputs: Mapping[str, float],
    outputs: Mapping[str, float],
) -> ForwardState:
    """Advance one record: predict, combine with the emission, renormalize."""
    rows = build_transition_rows(model, inputs)
    predicted = predict(state.current, rows)
    e = emission_bba(model, outputs)
    combined = combine_conjunctive(predicted, e)
    conflict = _clip_unit(combined.conflict)
    current, reset = _normalize_step(combined, (predicted, e), model.rule)
    resets = state.resets + ((state.step_index,) if reset else ())
    return ForwardState(current, state.conflict_log + (conflict,), resets)


def effectiveness(conflict_log: Sequence[float]) -> float:
    """Degree of effectiveness: the product of per-step (1 - conflict)."""
    if len(conflict_log) == 0:
        raise EmptyLog("effectiveness of an empty conflict log is undefined")
    return float(np.prod([1.0 - c for c in conflict_log]))


def run_forward(
    model: EvIohmm, records: Sequence[TraceRecord]
) -> ForwardState:
    """Reference full pass over a record sequence."""
    state = forward_init(model, records[0].outputs)
    for rec in records[1:]:
        state = forward_step(state, model, rec.inputs, rec.outputs)
    return state


# ---------------------------------------------------------------------------
# commonality-space engine (fast path)
# ---------------------------------------------------------------------------

class CommonalityEngine:
    """Forward passes carried out entirely in commonality space.

    For consonant rows the commonality of a non-empty subset is the
    minimum member possibility, so the conditional row tables are built
    without any transform; prediction is one matrix-vector product,
    combination a pointwise product, and the conflict an alternating
    sum.  Dempster and Yager renormalization are pointwise in this
    space; Dubois-Prade drops to mass space for its per-pair transfer.

    Engines are stateless apart from the model; the per-record tables are
    computed by the caller once per record and fed to every consumer.
    """

    def __init__(self, model: EvIohmm):
        self.model = model
        frame = model.frame
        self.n = frame.size
        self.size = frame.n_subsets
        self.full = frame.full_mask
        masks = np.arange(self.size)
        popcount = np.zeros(self.size, dtype=np.int64)
        for i in range(self.n):
            popcount += (masks >> i) & 1
        self._signs = np.where(popcount % 2 == 0, 1.0, -1.0)
        self._singles = np.array([1 << i for i in range(self.n)])
        # arcs routinely share one constraint vector; evaluate each only once
        labels = frame.labels
        groups: dict = {}
        for i in range(self.n):
            for j in range(self.n):
                groups.setdefault(model.transitions[i][j], []).append((i, j))
        self._transition_groups = [
            (cv, arcs, f"transition {labels[arcs[0][0]]}->{labels[arcs[0][1]]}")
            for cv, arcs in groups.items()
        ]
        egroups: dict = {}
        for j, cv in enumerate(model.emissions):
            egroups.setdefault(cv, []).append(j)
        self._emission_groups = [
            (cv, states, f"emission of state {labels[states[0]]}")
            for cv, states in egroups.items()
        ]

    def _subset_min(self, per_state: np.ndarray) -> np.ndarray:
        """rows[..., A] = min of per_state[..., j] over members j of A; 1 at A = 0."""
        shape = per_state.shape[:-1]
        out = np.ones(shape + (self.size,))
        for j in range(self.n):
            v = out.reshape(shape + (-1, 2, 1 << j))
            np.minimum(v[..., 1, :], per_state[..., j, None, None], out=v[..., 1, :])
        return out

    def record_tables(self, record: TraceRecord) -> tuple[np.ndarray, np.ndarray]:
        """(singleton-row commonalities, emission commonality) for one record."""
        poss = np.empty((self.n, self.n))
        for cv, arcs, context in self._transition_groups:
            value = evaluate_constraint_vector(cv, record.inputs, context=context)
            for i, j in arcs:
                poss[i, j] = value
        e_poss = np.empty(self.n)
        for cv, states, context in self._emission_groups:
            value = evaluate_constraint_vector(cv, record.outputs, context=context)
            for j in states:
                e_poss[j] = value
        return self._subset_min(poss), self._subset_min(e_poss)

    def _prior_q(self) -> np.ndarray:
        if self.model.prior.is_vacuous():
            return np.ones(self.size)
        return _zeta_superset(self.model.prior.masses.copy())

    def init_state(self, q_e: np.ndarray) -> tuple[np.ndarray, float, bool]:
        """Start a pass from the emission table; (state, conflict, reset flag)."""
        q_prior = self._prior_q()
        q_comb = q_prior * q_e
        conflict = _clip_unit(self._signs @ q_comb)
        q_state, reset = self._renormalize(q_comb, conflict, q_prior, q_e)
        return q_state, conflict, reset

    def advance(
        self, q_state: np.ndarray, q_rows: np.ndarray, q_e: np.ndarray
    ) -> tuple[np.ndarray, float, bool]:
        """One prediction-combination-renormalization step in q space."""
        contour = q_state[self._singles]
        total = float(contour.sum())
        if total <= _CONTOUR_EPS:
            q_pred = np.zeros(self.size)
            q_pred[0] = 1.0
        else:
            q_pred = (contour / total) @ q_rows
        q_comb = q_pred * q_e
        conflict = _clip_unit(self._signs @ q_comb)
        q_state, reset = self._renormalize(q_comb, conflict, q_pred, q_e)
        return q_state, conflict, reset

    def run(
        self, records: Sequence[TraceRecord], start: int, length: int
    ) -> tuple[list[float], list[int]]:
        """Conflict log and reset step indices for records[start:start+length]."""
        _, q_e = self.record_tables(records[start])
        q_state, conflict, reset = self.init_state(q_e)
        conflicts = [conflict]
        resets = [0] if reset else []
        for step in range(1, length):
            q_rows, q_e = self.record_tables(records[start + step])
            q_state, conflict, reset = self.advance(q_state, q_rows, q_e)
            conflicts.append(conflict)
            if reset:
                resets.append(step)
        return conflicts, resets

    def _renormalize(
        self,
        q_comb: np.ndarray,
        conflict: float,
        q_pred: np.ndarray,
        q_e: np.ndarray,
    ) -> tuple[np.ndarray, bool]:
        rule = self.model.rule
        if rule == "dempster":
            if conflict >= 1.0 - _TOTAL_CONFLICT_EPS:
                return np.ones(self.size), True
            out = q_comb / (1.0 - conflict)
            out[0] = 1.0
            return out, False
        if rule == "yager":
            out = q_comb + conflict
            out[0] = 1.0
            return out, False
        # dubois_prade: reassign each conflicting parent product to its union;
        # skipping sub-1e-14 transform dust keeps the pair loop on true focal
        # elements and costs at most 2**N * 1e-14 in redistributed mass
        m = _mobius_superset(q_comb.copy())
        m[0] = 0.0
        m_pred = _mobius_superset(q_pred.copy())
        m_e = _mobius_superset(q_e.copy())
        for b in np.flatnonzero(np.abs(m_pred) > 1e-14):
            for c in np.flatnonzero(np.abs(m_e) > 1e-14):
                if b & c == 0:
                    target = int(b | c) or self.full
                    m[target] += m_pred[b] * m_e[c]
        return _zeta_superset(m), False


# ---------------------------------------------------------------------------
# sliding-window evaluation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StepResult:
    index: int
    timestamp: float
    conflict: float
    step_effectiveness: float
    reset: bool = False


@dataclass(frozen=True)
class WindowResult:
    start: int
    end: int
    end_timestamp: float
    length: int
    value: float


@dataclass(frozen=True)
class EffectivenessReport:
    """Per-step conflict series of the whole trace plus windowed products."""

    steps: tuple[StepResult, ...]
    windows: tuple[WindowResult, ...]
    window_len: int
    stride: int
    rule: str

    @property
    def overall(self) -> float:
        return effectiveness([s.conflict for s in self.steps])

    @property
    def breach_steps(self) -> tuple[int, ...]:
        return tuple(
            s.index for s in self.steps if s.conflict >= 1.0 - _TOTAL_CONFLICT_EPS
        )


def sliding_effectiveness(
    trace: Sequence[TraceRecord],
    model: EvIohmm,
    window_len: int = 10,
    stride: int = 1,
    *,
    engine: str = "fast",
) -> EffectivenessReport:
    """Windowed effectiveness: every window restarts the forward pass.

    The report carries one step row per record (conflicts of the single
    full-trace pass) and one windowed product per window position; each
    windowed value is the product of that window's own step
    effectivenesses, cross-checked at emission time.
    """
    if window_len < 1:
        raise ValueError(f"window length must be >= 1, got {window_len}")
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")
    if len(trace) < window_len:
        raise TraceTooShort(
            f"trace of {len(trace)} records is shorter than one window of {window_len}"
        )
    if engine == "fast":
        full_conflicts, full_resets, window_logs = _windows_fast(
            trace, model, window_len, stride
        )
    elif engine == "reference":
        full_conflicts, full_resets, window_logs = _windows_reference(
            trace, model, window_len, stride
        )
    else:
        raise ValueError(f"unknown engine {engine!r}")

    reset_set = set(full_resets)
    steps = tuple(
        StepResult(i, trace[i].timestamp, c, 1.0 - c, i in reset_set)
        for i, c in enumerate(full_conflicts)
    )
    windows = []
    for start, conflicts in window_logs:
        value = effectiveness(conflicts)
        check = math.prod(1.0 - c for c in conflicts)
        if abs(value - check) > 1e-12:
            raise AssertionError(
                f"window product mismatch at start={start}: {value} vs {check}"
            )
        end = start + window_len - 1
        windows.append(
            WindowResult(start, end, trace[end].timestamp, window_len, value)
        )
    return EffectivenessReport(steps, tuple(windows), window_len, stride, model.rule)


def _windows_fast(trace, model, window_len, stride):
    """Time-major sweep: one table build per record feeds every consumer."""
    eng = CommonalityEngine(model)
    last_start = len(trace) - window_len
    full_conflicts: list[float] = []
    full_resets: list[int] = []
    active: dict[int, np.ndarray] = {}
    logs: dict[int, list[float]] = {}
    finished: list[tuple[int, list[float]]] = []
    full_state = None
    for t, rec in enumerate(trace):
        q_rows, q_e = eng.record_tables(rec)
        if t == 0:
            full_state, conflict, reset = eng.init_state(q_e)
        else:
            full_state, conflict, reset = eng.advance(full_state, q_rows, q_e)
        full_conflicts.append(conflict)
        if reset:
            full_resets.append(t)
        for start in list(active):
            state, conflict, _ = eng.advance(active[start], q_rows, q_e)
            logs[start].append(conflict)
            if start + window_len - 1 == t:
                finished.append((start, logs.pop(start)))
                del active[start]
            else:
                active[start] = state
        if t <= last_start and t % stride == 0:
            state, conflict, _ = eng.init_state(q_e)
            if window_len == 1:
                finished.append((t, [conflict]))
            else:
                active[t] = state
                logs[t] = [conflict]
    return full_conflicts, full_resets, finished


def _windows_reference(trace, model, window_len, stride):
    def one(start, length):
        state = forward_init(model, trace[start].outputs)
        for rec in trace[start + 1 : start + length]:
            state = forward_step(state, model, rec.inputs, rec.outputs)
        return state

    full = one(0, len(trace))
    window_logs = [
        (start, list(one(start, window_len).conflict_log))
        for start in range(0, len(trace) - window_len + 1, stride)
    ]
    return list(full.conflict_log), list(full.resets), window_logs
