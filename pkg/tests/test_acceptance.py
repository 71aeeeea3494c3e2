"""Exit criteria, one test each; a PASS/FAIL line per criterion is printed in the summary."""

import io
import math
import time

import numpy as np
from scipy.optimize import bisect

from chainbell.analysis import ExtensionClaim, admissible_envelope, check_extension
from chainbell.chainedbell import ChainedConfig, chained_I, chained_I_pi, closed_form_I, equipartition_settings
from chainbell.cli import main
from chainbell.estimators import estimate_I, fit_visibility, nonsignaling_test
from chainbell.models import QuantumModel, SignalingToyModel, SuarezScaraniModel
from chainbell.montecarlo import run_all_pairs, run_chain, scan_phase
from chainbell.spacetime import (
    AFTER_AFTER,
    ALICE_BEFORE_ONLY,
    BEFORE_BEFORE,
    BOB_BEFORE_ONLY,
    ApparatusGeometry,
    Boost,
    Event,
    classify_timing,
)
from oracles import brute_force_timing

MILLION = 10**6


def test_ac1_worked_example(acceptance):
    t0 = time.perf_counter()
    v = check_extension(ExtensionClaim(0.25, 0.999, math.pi, 500))
    elapsed = time.perf_counter() - t0
    ok = (
        v.N_star == 35
        and abs(v.I_min - 0.0702) <= 0.0005
        and abs(v.bound - 0.105) <= 0.001
        and v.contradictory
        and elapsed < 1.0
    )
    acceptance(
        "AC1 worked example D=0.25 V=0.999",
        ok,
        f"N*={v.N_star} I_min={v.I_min:.5f} bound={v.bound:.5f} contradictory={v.contradictory} t={elapsed:.3f}s",
    )
    assert ok


def test_ac2_closed_form_identity(acceptance):
    Ns = np.arange(2, 1001)
    worst = max(
        float(np.max(np.abs(chained_I(Ns, math.pi, V) - chained_I_pi(Ns, V)))) for V in (0.0, 0.5, 0.97, 0.999, 1.0)
    )
    ok = worst <= 1e-12
    acceptance("AC2 general vs Theta=pi closed form", ok, f"max |diff| = {worst:.2e}")
    assert ok


def test_ac3_chsh(acceptance):
    value = closed_form_I(ChainedConfig(2, math.pi, 1.0)).value_I
    threshold = bisect(lambda V: closed_form_I(ChainedConfig(2, math.pi, V)).value_I - 1.0, 0.5, 1.0, xtol=1e-13)
    ok = abs(value - (2 - math.sqrt(2))) <= 1e-12 and abs(threshold - 1 / math.sqrt(2)) <= 1e-9
    acceptance("AC3 CHSH value and V threshold", ok, f"I(2,pi,1)={value:.15f} V*={threshold:.12f}")
    assert ok


def test_ac4_empirical_vs_closed_form(acceptance):
    t0 = time.perf_counter()
    details, ok = [], True
    for N in (2, 3, 5):
        for V in (0.9, 1.0):
            cfg = ChainedConfig(N, math.pi, V)
            r = estimate_I(run_chain(QuantumModel(V), equipartition_settings(cfg), AFTER_AFTER, MILLION, 100 + N), cfg)
            exact = closed_form_I(cfg).value_I
            z = abs(r.value_I - exact) / r.std_error
            ok &= z < 4
            details.append(f"N={N},V={V}:z={z:.2f}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 120
    acceptance("AC4 empirical I within 4 sigma of closed form", ok, f"{' '.join(details)} t={elapsed:.1f}s")
    assert ok


def test_ac5_figure2_visibility(acceptance):
    grid = [2 * math.pi * k / 16 for k in range(16)]
    est = fit_visibility(scan_phase(QuantumModel(0.97), grid, AFTER_AFTER, 10**5, 2010))
    ok = abs(est.value - 0.97) <= 0.01
    acceptance("AC5 fringe-scan visibility recovery", ok, f"V_hat={est}")
    assert ok


def test_ac6_before_before_signature(acceptance):
    cfg = ChainedConfig(2, math.pi, 1.0)
    settings = equipartition_settings(cfg)
    model = SuarezScaraniModel(1.0)
    aa = estimate_I(run_chain(model, settings, AFTER_AFTER, MILLION, 61), cfg)
    bb = estimate_I(run_chain(model, settings, BEFORE_BEFORE, MILLION, 62), cfg)
    ok = aa.violates_at(4.0) and bb.satisfies_at(4.0)
    acceptance(
        "AC6 Suarez-Scarani AfterAfter violates, BeforeBefore does not",
        ok,
        f"AA={aa.value_I:.4f}+/-{aa.std_error:.4f} BB={bb.value_I:.4f}+/-{bb.std_error:.4f}",
    )
    assert ok


def test_ac7_timing_oracle(acceptance):
    rng = np.random.default_rng(7)
    agree = 0
    for _ in range(50):
        ta, xa = rng.uniform(-10, 10, 2)
        dx = rng.uniform(0.5, 10) * rng.choice([-1, 1])
        tb, xb = ta + rng.uniform(-0.95, 0.95) * abs(dx), xa + dx
        ba, bb = rng.uniform(-0.95, 0.95, 2)
        got = classify_timing(ApparatusGeometry(Event(ta, xa), Event(tb, xb), Boost(ba), Boost(bb))).name
        agree += got == brute_force_timing((ta, xa), (tb, xb), ba, bb)
    ok = agree == 50
    acceptance("AC7 timing classification vs brute-force oracle", ok, f"{agree}/50 agree")
    assert ok


def test_ac8_nonsignaling_detector(acceptance):
    settings = equipartition_settings(ChainedConfig(2, math.pi, 1.0))
    cases = {
        "quantum": (QuantumModel(1.0), AFTER_AFTER),
        "SS BeforeBefore": (SuarezScaraniModel(1.0), BEFORE_BEFORE),
        "SS AfterAfter": (SuarezScaraniModel(1.0), AFTER_AFTER),
        "SS AliceBeforeOnly": (SuarezScaraniModel(1.0), ALICE_BEFORE_ONLY),
        "SS BobBeforeOnly": (SuarezScaraniModel(1.0), BOB_BEFORE_ONLY),
    }
    details, ok = [], True
    for name, (model, timing) in cases.items():
        res = nonsignaling_test(run_all_pairs(model, settings, timing, 10**5, 80), z_threshold=4.0)
        ok &= res.passed
        details.append(f"{name}:max|z|={res.max_abs_z:.2f}")
    toy = nonsignaling_test(run_all_pairs(SignalingToyModel(0.25), settings, AFTER_AFTER, 10**5, 81), z_threshold=4.0)
    ok &= (not toy.passed) and toy.max_abs_z > 10
    details.append(f"toy:max|z|={toy.max_abs_z:.1f}")
    acceptance("AC8 non-signaling detector", ok, " ".join(details))
    assert ok


def test_ac9_determinism(acceptance, tmp_path):
    bodies = []
    for workers in (1, 2, 4):
        d = tmp_path / f"w{workers}"
        code = main(
            ["simulate", "--seed", "99", "--trials", "1000000", "--workers", str(workers), "--out-dir", str(d)],
            out=io.StringIO(),
        )
        assert code == 0
        bodies.append(((d / "counts.csv").read_bytes(), (d / "inequality.csv").read_bytes()))
    ok = bodies[0] == bodies[1] == bodies[2]
    acceptance("AC9 byte-identical CSV across worker counts", ok, "workers 1/2/4")
    assert ok


def test_ac10_grid_falsification(acceptance):
    binding, ok = [], True
    for V in (0.99, 0.999, 0.9999):
        floor = min(d for _, d in admissible_envelope(V, math.pi, range(2, 1001)))
        for D in (0.05, 0.1, 0.25):
            if D > floor:
                binding.append((D, V))
                ok &= check_extension(ExtensionClaim(D, V, math.pi, 1000)).contradictory
    ok &= len(binding) > 0
    acceptance(
        "AC10 N-independent D falsified where the envelope binds",
        ok,
        "binding pairs: " + ", ".join(f"(D={d},V={v})" for d, v in binding),
    )
    assert ok
