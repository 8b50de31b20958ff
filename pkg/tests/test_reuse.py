"""Reuse index schedules, sample history, and the gated reuse pass."""

import numpy as np
import pytest

from rtga.censoring import CensorConfig, ScaleState, update_scale
from rtga.filters import FilterState, RtgaParams, update_step
from rtga.reuse import (
    ReuseConfig,
    SampleHistory,
    dr_indices,
    idr_indices,
    reuse_pass,
    schedule,
    undr_indices,
)


def test_idr_frozen_examples():
    # Unbounded: anchor L, span i - L, l + 1 even slices.
    assert idr_indices(8000, 9, 3) == [2006, 4004, 6002]
    # Bounded: span capped at the window, anchored at i - span.
    assert idr_indices(8000, 9, 1, window_cap=200) == [7900]


def test_idr_small_cases():
    # i = 20, L = 9, l = 2: span 11, idx = 9 + floor(11 k / 3).
    assert idr_indices(20, 9, 2) == [12, 16]
    # Window smaller than elapsed time: anchor moves to i - W.
    assert idr_indices(1000, 9, 3, window_cap=100) == [925, 950, 975]


def test_idr_indices_strictly_inside_history():
    for i in (50, 321, 7777):
        idx = idr_indices(i, 9, 4, window_cap=200)
        assert all(9 <= k < i for k in idx)
        assert idx == sorted(idx)
        assert all(k > i - 201 for k in idx)


def test_dr_repeats_current_index():
    assert dr_indices(123, 3) == [123, 123, 123]
    assert dr_indices(5, 0) == []


def test_undr_recent_block():
    assert undr_indices(100, 9, 3) == [97, 98, 99]
    # Early on the block clips at the first update index.
    assert undr_indices(11, 9, 5) == [9, 10]


def test_schedule_dispatch_and_guard():
    cfg = ReuseConfig(scheme="idr", l_reused=3)
    # Startup guard: no reuse until i - L >= l + 1.
    assert schedule(cfg, 12, 9) == []
    assert schedule(cfg, 13, 9) != []
    assert schedule(ReuseConfig(scheme="none"), 100, 9) == []
    np.testing.assert_array_equal(
        schedule(ReuseConfig(scheme="dr", l_reused=2), 50, 9), [50, 50]
    )
    assert schedule(ReuseConfig(scheme="undr", l_reused=2), 50, 9) == [48, 49]


def test_reuse_config_validation():
    with pytest.raises(ValueError):
        ReuseConfig(scheme="both")
    with pytest.raises(ValueError):
        ReuseConfig(scheme="idr", l_reused=-1)
    with pytest.raises(ValueError):
        ReuseConfig(scheme="idr", l_reused=2, window_cap=0)
    assert not ReuseConfig(scheme="idr", l_reused=0).active
    assert ReuseConfig(scheme="idr", l_reused=1).active


def test_history_full_storage():
    h = SampleHistory(order=3)
    for k in range(5):
        h.push(np.full(3, float(k)), float(10 * k))
    assert h.latest == 4
    x, d = h.get(2)
    np.testing.assert_array_equal(x, [2.0, 2.0, 2.0])
    assert d == 20.0
    assert h.has(0) and not h.has(5)


def test_history_ring_evicts_old_pairs():
    h = SampleHistory(order=2, capacity=3)
    for k in range(6):
        h.push(np.array([k, -k], dtype=float), float(k))
    assert h.has(5) and h.has(3) and not h.has(2)
    x, d = h.get(4)
    np.testing.assert_array_equal(x, [4.0, -4.0])
    assert d == 4.0
    with pytest.raises(LookupError, match="history gap"):
        h.get(2)
    with pytest.raises(LookupError):
        h.get(6)


def test_history_from_arrays():
    x = np.arange(12, dtype=float).reshape(4, 3)
    d = np.arange(4, dtype=float)
    h = SampleHistory.from_arrays(x, d)
    got_x, got_d = h.get(3)
    np.testing.assert_array_equal(got_x, x[3])
    assert got_d == 3.0


def params(mu=0.05):
    return RtgaParams(a=-100.0, b=2.0, c=0.2, mu=mu, phi=1.0)


def _seeded_history(n=40, order=3, seed=31):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, order))
    d = rng.standard_normal(n)
    return SampleHistory.from_arrays(x, d), x, d


def test_reuse_pass_matches_sequential_updates():
    history, x, d = _seeded_history()
    cfg = ReuseConfig(scheme="idr", l_reused=3)
    censor = CensorConfig(p_ce=0.0)
    p = params()
    state = FilterState(w=np.array([0.3, -0.2, 0.1]))
    manual = FilterState(w=state.w.copy())
    state = reuse_pass(state, history, p, cfg, censor, ScaleState(), i=30, L=3)

    class S:
        def __init__(self, x_tilde, d_tilde):
            self.x_tilde = x_tilde
            self.d_tilde = d_tilde

    for idx in idr_indices(30, 3, 3):
        manual = update_step(manual, S(x[idx], d[idx]), p, censored=False)
    np.testing.assert_array_equal(state.w, manual.w)
    assert state.update_count == manual.update_count == 3


def test_reuse_pass_each_step_individually_censored():
    # A converged scale plus a huge threshold censors every reuse step.
    history, _, _ = _seeded_history()
    cfg = ReuseConfig(scheme="idr", l_reused=3)
    censor = CensorConfig(p_ce=0.7)
    scale = ScaleState()
    for _ in range(9):
        scale = update_scale(scale, 5.0, censor)  # big scale, all errors small
    scale.sigma_e = 1e6
    p = params()
    state = FilterState(w=np.zeros(3))
    state = reuse_pass(state, history, p, cfg, censor, scale, i=30, L=3)
    assert state.censor_count == 3 and state.update_count == 0
    np.testing.assert_array_equal(state.w, np.zeros(3))


def test_reuse_pass_updates_when_scale_not_ready():
    # Before warm-up completes the gate stays open.
    history, _, _ = _seeded_history()
    cfg = ReuseConfig(scheme="idr", l_reused=2)
    censor = CensorConfig(p_ce=0.7)
    p = params()
    state = FilterState(w=np.zeros(3))
    state = reuse_pass(state, history, p, cfg, censor, ScaleState(), i=30, L=3)
    assert state.update_count == 2 and state.censor_count == 0


def test_executed_update_identity():
    # Executed updates per decision step = (1 - c_main) + l (1 - c_reuse).
    history, x, d = _seeded_history(n=400, order=3, seed=32)
    cfg = ReuseConfig(scheme="idr", l_reused=2)
    censor = CensorConfig(p_ce=0.5)
    p = params(mu=0.01)
    state = FilterState(w=np.zeros(3))
    scale = ScaleState()
    main_steps = reuse_steps = 0
    for i in range(3, 400):
        before = state.iteration
        state = reuse_pass(state, history, p, cfg, censor, scale, i, 3)
        reuse_steps += state.iteration - before
        e = d[i] - float(state.w @ x[i])
        from rtga.censoring import censor_decision

        gated = censor.active and scale.ready and censor_decision(
            e, censor.kappa, scale.sigma_e
        )
        state = update_step(state, type("S", (), {"x_tilde": x[i], "d_tilde": d[i]})(), p, gated)
        main_steps += 1
        scale = update_scale(scale, e, censor)
    executed = state.update_count
    censored = state.censor_count
    assert executed + censored == main_steps + reuse_steps
    assert reuse_steps == sum(
        len(schedule(cfg, i, 3)) for i in range(3, 400)
    )
