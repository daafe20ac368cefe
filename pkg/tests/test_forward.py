"""Model construction, prediction and forward-pass tests."""

import numpy as np
import pytest

from evimon.belief import (
    Frame,
    MassFunction,
    categorical,
    combine_disjunctive,
    vacuous,
)
from evimon.errors import (
    EmptyLog,
    LengthMismatch,
    MissingVariable,
    TraceTooShort,
    ValidationError,
)
from evimon.forward import (
    CommonalityEngine,
    conditioning_weights,
    effectiveness,
    forward_init,
    forward_step,
    predict,
    run_forward,
    sliding_effectiveness,
)
from evimon.iohmm import (
    ConditionalTransitionBBAs,
    best_deterministic_test,
    build_transition_rows,
    deterministic_test,
    emission_bba,
)
from evimon.trace import TraceRecord

from model_builders import (
    bayesian_mass,
    brute_force_path_sum,
    evidential_bayesian_effectiveness,
    luminosity_crisp_model,
    luminosity_model,
    random_bayesian_structures,
    random_crisp_deterministic_model,
    random_crisp_trace,
    random_possibilistic_model,
    random_trace,
)
TOL = 1e-9


# ---------------------------------------------------------------------------
# transition rows
# ---------------------------------------------------------------------------

def test_walkthrough_transition_rows():
    model = luminosity_model()
    rows = build_transition_rows(model, {"pres": 3.5})
    for i in range(2):
        assert np.allclose(
            rows.singleton_rows[i].masses, [0.25, 0.75, 0.0, 0.0], atol=TOL
        )
    assert np.allclose(rows.row(0).masses, [1, 0, 0, 0])
    assert np.allclose(rows.row(3).masses, [0.0625, 0.9375, 0.0, 0.0], atol=TOL)


def test_rows_equal_disjunctive_of_singletons():
    rng = np.random.default_rng(31)
    for _ in range(25):
        model = random_possibilistic_model(rng, n_states=3)
        rows = build_transition_rows(model, {"u": float(rng.uniform(0, 10))})
        materialized = rows.rows
        assert len(materialized) == 8
        for mask in range(8):
            d = {}
            members = [i for i in range(3) if mask >> i & 1]
            if not members:
                expected = categorical(model.frame, 0)
            else:
                expected = rows.singleton_rows[members[0]]
                for i in members[1:]:
                    expected = combine_disjunctive(expected, rows.singleton_rows[i])
            assert materialized[mask].approx_equals(expected, TOL)


def test_rows_lazy_and_materialized_agree_on_wide_frame():
    from evimon import bundled
    from evimon.modelfile import parse_model

    model = parse_model(bundled.model_path("speed_limits"))
    inputs = {"max_speed": 90.0, "precipitation": 0.3, "visibility": 0.1}
    lazy = build_transition_rows(model, inputs)
    eager = build_transition_rows(model, inputs)
    materialized = eager.rows
    rng = np.random.default_rng(30)
    for mask in rng.integers(0, model.frame.n_subsets, size=12):
        mask = int(mask)
        assert materialized[mask].approx_equals(lazy.row(mask), TOL)


def test_rows_crisp_input_is_categorical():
    model = luminosity_crisp_model()
    rows = build_transition_rows(model, {"pres": 2.0})
    assert np.allclose(rows.row(1).masses, [0, 1, 0, 0])
    assert np.allclose(rows.row(2).masses, [0, 1, 0, 0])
    # input in no crisp zone: the empty-set categorical everywhere
    rows = build_transition_rows(model, {"pres": 10.0})
    assert rows.row(3).conflict == 1.0


def test_rows_missing_variable():
    model = luminosity_model()
    with pytest.raises(MissingVariable) as err:
        build_transition_rows(model, {})
    assert "pres" in str(err.value)


# ---------------------------------------------------------------------------
# prediction
# ---------------------------------------------------------------------------

def test_predict_walkthrough_value():
    model = luminosity_model()
    rows = build_transition_rows(model, {"pres": 3.5})
    predicted = predict(vacuous(model.frame), rows)
    assert np.allclose(predicted.masses, [0.25, 0.75, 0.0, 0.0], atol=TOL)


def test_predict_categorical_prior_collapses_to_row():
    rng = np.random.default_rng(32)
    for _ in range(20):
        model = random_possibilistic_model(rng, n_states=3)
        rows = build_transition_rows(model, {"u": float(rng.uniform(0, 10))})
        for i in range(3):
            prior = categorical(model.frame, 1 << i)
            assert predict(prior, rows).approx_equals(rows.singleton_rows[i], TOL)


def test_predict_bayesian_reduces_to_probability_mixture():
    rng = np.random.default_rng(33)
    frame = Frame(["a", "b", "c"])
    for _ in range(50):
        mat = rng.random((3, 3)) + 0.05
        mat /= mat.sum(axis=1, keepdims=True)
        rows = ConditionalTransitionBBAs(
            frame, [bayesian_mass(frame, mat[i]) for i in range(3)]
        )
        p = rng.random(3) + 0.05
        p /= p.sum()
        prior = bayesian_mass(frame, p)
        predicted = predict(prior, rows)
        expected = p @ mat
        got = np.array([predicted.masses[1 << j] for j in range(3)])
        assert np.max(np.abs(got - expected)) <= TOL


def test_conditioning_weights_structure():
    frame = Frame(["a", "b", "c"])
    w = conditioning_weights(vacuous(frame))
    assert w[1] == w[2] == w[4] == pytest.approx(1 / 3)
    assert w.sum() == pytest.approx(1.0)
    # weight never lands on non-singleton subsets
    assert all(w[mask] == 0.0 for mask in (0, 3, 5, 6, 7))
    w = conditioning_weights(categorical(frame, ("b",)))
    assert w[2] == 1.0


# ---------------------------------------------------------------------------
# emission
# ---------------------------------------------------------------------------

def test_walkthrough_emission():
    model = luminosity_model()
    e = emission_bba(model, {"lum": 2.34})
    assert np.allclose(e.masses, [0, 1, 0, 0], atol=TOL)


def test_emission_outside_everything_and_double_comfort():
    model = luminosity_model()
    assert emission_bba(model, {"lum": 15.0}).conflict == 1.0
    # partial satisfaction: consonant doubt
    e = emission_bba(model, {"lum": 7.5})
    assert e.mass_of(("x1",)) == pytest.approx(0.5, abs=TOL)
    assert e.conflict == pytest.approx(0.5, abs=TOL)


def test_emission_inside_two_comfort_zones_is_vacuous():
    # overlapping curves: both states fully satisfied by the same output
    from evimon.iohmm import EvIohmm
    from evimon.possibility import Constraint, ConstraintVector, ramp_down, ramp_up

    frame = Frame(["slow", "fast"])
    gate = ConstraintVector((Constraint("u", ramp_up(0.0, 1.0)),))
    model = EvIohmm(
        frame,
        ((gate, gate), (gate, gate)),
        (
            ConstraintVector((Constraint("y", ramp_down(50.0, 60.0)),)),
            ConstraintVector((Constraint("y", ramp_down(90.0, 95.0)),)),
        ),
    )
    e = emission_bba(model, {"y": 40.0})
    assert e.is_vacuous()


# ---------------------------------------------------------------------------
# forward passes
# ---------------------------------------------------------------------------

def test_forward_init_examples():
    model = luminosity_model()
    state = forward_init(model, {"lum": 2.34})
    assert state.conflict_log == (0.0,)
    assert np.allclose(state.current.masses, [0, 1, 0, 0], atol=TOL)
    state = forward_init(model, {"lum": 7.5})
    assert state.conflict_log[0] == pytest.approx(0.5, abs=TOL)
    state = forward_init(model, {"lum": 15.0})
    assert state.conflict_log == (1.0,)
    assert state.current.is_vacuous()
    assert state.resets == (0,)


def test_forward_step_walkthrough():
    model = luminosity_model()
    state = forward_init(model, {"lum": 2.0})
    state = forward_step(state, model, {"pres": 3.5}, {"lum": 2.34})
    assert state.conflict_log[-1] == pytest.approx(0.25, abs=TOL)
    assert np.allclose(state.current.masses, [0, 1, 0, 0], atol=TOL)
    assert effectiveness(state.conflict_log) == pytest.approx(0.75, abs=TOL)


def test_forward_comfort_trace_has_zero_conflict():
    model = luminosity_model()
    records = [
        TraceRecord(float(t), {"pres": 2.0}, {"lum": 3.0}) for t in range(8)
    ]
    state = run_forward(model, records)
    assert state.conflict_log == (0.0,) * 8


def test_forward_total_conflict_resets_and_recovers():
    model = luminosity_crisp_model()
    records = [
        TraceRecord(0.0, {}, {"lum": 2.0}),
        TraceRecord(1.0, {"pres": 10.0}, {"lum": 2.0}),  # input in no zone
        TraceRecord(2.0, {"pres": 2.0}, {"lum": 2.0}),
    ]
    state = run_forward(model, records)
    assert state.conflict_log == (0.0, 1.0, 0.0)
    assert state.resets == (1,)


def test_effectiveness_examples():
    assert effectiveness([0.0, 0.0, 0.0]) == 1.0
    assert effectiveness([0.25]) == 0.75
    assert effectiveness([0.1, 1.0, 0.2]) == 0.0
    with pytest.raises(EmptyLog):
        effectiveness([])


# ---------------------------------------------------------------------------
# sliding windows
# ---------------------------------------------------------------------------

def comfort_trace(n):
    return [TraceRecord(float(t), {"pres": 2.0}, {"lum": 3.0}) for t in range(n)]


def test_sliding_window_counts_and_values():
    model = luminosity_model()
    report = sliding_effectiveness(comfort_trace(30), model, 10, 1)
    assert len(report.windows) == 21
    assert len(report.steps) == 30
    assert all(w.value == pytest.approx(1.0) for w in report.windows)
    assert report.windows[0].end_timestamp == 9.0
    report = sliding_effectiveness(comfort_trace(30), model, 10, 5)
    assert [w.start for w in report.windows] == [0, 5, 10, 15, 20]


def test_sliding_window_len_one_equals_step_effectiveness():
    rng = np.random.default_rng(34)
    model = luminosity_model()
    records = [
        TraceRecord(
            float(t),
            {"pres": float(rng.uniform(0, 22))},
            {"lum": float(rng.uniform(0, 27))},
        )
        for t in range(12)
    ]
    report = sliding_effectiveness(records, model, 1, 1)
    # a one-record window has no transition, so its value is the init
    # conflict of that record, which matches the full pass only at t=0;
    # check the defining property instead: value == 1 - init conflict
    for w in report.windows:
        init = forward_init(model, records[w.start].outputs)
        assert w.value == pytest.approx(1.0 - init.conflict_log[0], abs=TOL)


def test_sliding_window_too_short():
    model = luminosity_model()
    with pytest.raises(TraceTooShort):
        sliding_effectiveness(comfort_trace(5), model, 10, 1)
    with pytest.raises(ValueError):
        sliding_effectiveness(comfort_trace(5), model, 0, 1)


# ---------------------------------------------------------------------------
# fast engine vs reference path
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("rule", ["dempster", "yager", "dubois_prade"])
def test_engine_agrees_with_reference(rule):
    rng = np.random.default_rng(35)
    for trial in range(30):
        n = int(rng.integers(2, 5))
        multivariate = trial % 2 == 1
        model = random_possibilistic_model(
            rng, n_states=n, rule=rule, multivariate=multivariate
        )
        records = random_trace(
            rng,
            int(rng.integers(3, 9)),
            input_names=model.input_variables,
            output_names=model.output_variables,
        )
        fast = sliding_effectiveness(records, model, 3, 1, engine="fast")
        ref = sliding_effectiveness(records, model, 3, 1, engine="reference")
        for a, b in zip(fast.steps, ref.steps):
            assert a.conflict == pytest.approx(b.conflict, abs=TOL)
        for a, b in zip(fast.windows, ref.windows):
            assert a.value == pytest.approx(b.value, abs=TOL)
        assert [s.index for s in fast.steps if s.reset] == [
            s.index for s in ref.steps if s.reset
        ]


def test_engine_full_pass_agrees_with_run_forward():
    rng = np.random.default_rng(36)
    for _ in range(20):
        model = random_possibilistic_model(rng, n_states=3)
        records = random_trace(rng, 6)
        eng = CommonalityEngine(model)
        conflicts, resets = eng.run(records, 0, len(records))
        state = run_forward(model, records)
        assert np.allclose(conflicts, state.conflict_log, atol=TOL)
        assert tuple(resets) == state.resets
        assert state.current.conflict == 0.0  # always renormalized
        assert all(0.0 <= c <= 1.0 for c in state.conflict_log)


def test_engine_agrees_with_reference_under_explicit_prior():
    from evimon.iohmm import EvIohmm

    rng = np.random.default_rng(40)
    for _ in range(15):
        base = random_possibilistic_model(rng, n_states=3)
        raw = rng.random(8)
        raw[0] = 0.0
        prior = MassFunction(base.frame, raw / raw.sum())
        model = EvIohmm(
            base.frame,
            base.transitions,
            base.emissions,
            prior=prior,
            rule=str(rng.choice(["dempster", "yager", "dubois_prade"])),
            input_variables=base.input_variables,
            output_variables=base.output_variables,
        )
        records = random_trace(rng, 5)
        fast = sliding_effectiveness(records, model, 2, 1, engine="fast")
        ref = sliding_effectiveness(records, model, 2, 1, engine="reference")
        for a, b in zip(fast.steps, ref.steps):
            assert a.conflict == pytest.approx(b.conflict, abs=TOL)
        for a, b in zip(fast.windows, ref.windows):
            assert a.value == pytest.approx(b.value, abs=TOL)


def test_parallel_traces_share_one_model():
    from concurrent.futures import ThreadPoolExecutor

    rng = np.random.default_rng(42)
    model = random_possibilistic_model(rng, n_states=3)
    traces = [random_trace(np.random.default_rng(100 + k), 12) for k in range(6)]
    sequential = [sliding_effectiveness(t, model, 4, 1) for t in traces]
    with ThreadPoolExecutor(max_workers=4) as pool:
        parallel = list(pool.map(lambda t: sliding_effectiveness(t, model, 4, 1), traces))
    for a, b in zip(sequential, parallel):
        assert [s.conflict for s in a.steps] == [s.conflict for s in b.steps]
        assert [w.value for w in a.windows] == [w.value for w in b.windows]


def test_engine_no_drift_on_long_traces():
    rng = np.random.default_rng(41)
    for rule in ("dempster", "yager"):
        model = random_possibilistic_model(rng, n_states=3, rule=rule)
        records = random_trace(rng, 200)
        eng = CommonalityEngine(model)
        conflicts, _ = eng.run(records, 0, len(records))
        state = run_forward(model, records)
        assert np.max(np.abs(np.array(conflicts) - np.array(state.conflict_log))) <= TOL


def test_engine_agrees_with_reference_on_eleven_states():
    # spot check on the bundled wide-frame model, dip window included
    from evimon import bundled
    from evimon.modelfile import parse_model
    from evimon.trace import read_trace

    model = parse_model(bundled.model_path("speed_limits"))
    trace = read_trace(bundled.trace_path("speed_limits_mixed_600"))
    eng = CommonalityEngine(model)
    for start in (0, 170, 180, 448):
        fast, _ = eng.run(trace, start, 10)
        state = forward_init(model, trace[start].outputs)
        for rec in trace[start + 1 : start + 10]:
            state = forward_step(state, model, rec.inputs, rec.outputs)
        assert np.allclose(fast, state.conflict_log, atol=TOL)


# ---------------------------------------------------------------------------
# monotonicity: wider tolerance never increases a step's conflict
# ---------------------------------------------------------------------------

def widen(dist):
    from evimon import possibility as ps

    if dist.kind == "ramp_up":
        a, b = dist.params
        return ps.ramp_up(a - 1.0, b - 1.0 if b - 1.0 > a - 1.0 else b)
    if dist.kind == "ramp_down":
        a, b = dist.params
        return ps.ramp_down(a + 1.0, b + 1.5)
    if dist.kind == "trapezoid":
        a, b, c, d = dist.params
        return ps.trapezoid(a - 1.0, b - 0.5, c + 0.5, d + 1.0)
    if dist.kind == "crisp_interval":
        lo, hi = dist.params
        return ps.crisp_interval(lo - 1.0, hi + 1.0)
    return dist


def test_step_effectiveness_monotone_under_zone_enlargement():
    rng = np.random.default_rng(37)
    from evimon.iohmm import EvIohmm
    from evimon.possibility import Constraint, ConstraintVector

    for _ in range(40):
        model = random_possibilistic_model(rng, n_states=3)
        u = {"u": float(rng.uniform(0, 10))}
        y = {"y": float(rng.uniform(0, 10))}
        prior_raw = rng.random(8)
        prior_raw[0] = 0.0
        prior = MassFunction(model.frame, prior_raw / prior_raw.sum())

        def step_eff(m):
            rows = build_transition_rows(m, u)
            pred = predict(prior, rows)
            from evimon.belief import conflict_mass

            return 1.0 - conflict_mass(pred, emission_bba(m, y))

        base = step_eff(model)
        # widen one random curve
        widened_tr = [list(row) for row in model.transitions]
        widened_em = list(model.emissions)
        if rng.random() < 0.5:
            i, j = int(rng.integers(0, 3)), int(rng.integers(0, 3))
            old = widened_tr[i][j]
            widened_tr[i][j] = ConstraintVector(
                tuple(
                    Constraint(e.variable, widen(e.distribution), e.inhibited)
                    for e in old.entries
                )
            )
        else:
            j = int(rng.integers(0, 3))
            widened_em[j] = ConstraintVector(
                tuple(
                    Constraint(e.variable, widen(e.distribution), e.inhibited)
                    for e in widened_em[j].entries
                )
            )
        widened = EvIohmm(
            model.frame,
            tuple(tuple(row) for row in widened_tr),
            tuple(widened_em),
            rule=model.rule,
            input_variables=model.input_variables,
            output_variables=model.output_variables,
        )
        assert step_eff(widened) >= base - TOL


# ---------------------------------------------------------------------------
# Bayesian reduction (mini version; the full sweep is in acceptance)
# ---------------------------------------------------------------------------

def test_bayesian_reduction_mini():
    rng = np.random.default_rng(38)
    for _ in range(20):
        frame, mats, emissions = random_bayesian_structures(rng, 3, 5)
        got = evidential_bayesian_effectiveness(frame, mats, emissions)
        expected = brute_force_path_sum(mats, emissions)
        assert got == pytest.approx(expected, rel=1e-9)


# ---------------------------------------------------------------------------
# deterministic test and crisp reduction
# ---------------------------------------------------------------------------

def test_deterministic_test_examples():
    model = luminosity_crisp_model()
    trace = [
        TraceRecord(0.0, {}, {"lum": 2.0}),
        TraceRecord(1.0, {"pres": 2.0}, {"lum": 3.0}),
    ]
    assert deterministic_test(model, ["x1", "x1"], trace) == 1
    trace_bad = [
        TraceRecord(0.0, {}, {"lum": 2.0}),
        TraceRecord(1.0, {"pres": 10.0}, {"lum": 3.0}),
    ]
    assert deterministic_test(model, ["x1", "x1"], trace_bad) == 0
    assert best_deterministic_test(model, trace_bad) == 0
    with pytest.raises(LengthMismatch):
        deterministic_test(model, ["x1"], trace)
    with pytest.raises(ValidationError):
        deterministic_test(luminosity_model(), ["x1", "x1"], trace)


def test_crisp_reduction_mini():
    rng = np.random.default_rng(39)
    for _ in range(30):
        n = int(rng.integers(2, 4))
        model = random_crisp_deterministic_model(rng, n)
        records = random_crisp_trace(rng, n, int(rng.integers(2, 6)), model)
        state = run_forward(model, records)
        eff = effectiveness(state.conflict_log)
        assert eff in (0.0, 1.0)
        assert eff == float(best_deterministic_test(model, records))
