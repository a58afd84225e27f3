"""End-to-end acceptance suite.

Each test prints a single PASS/FAIL line (bypassing pytest capture) and
then asserts, so the terminal log always contains one verdict per
criterion.  Criterion 8 is expected to fail at the stated tolerance;
see the analysis notes shipped with the change history.
"""

import time

import conftest
import numpy as np
import pytest
from scipy.stats import spearmanr

from bichrome.analytic import (
    AnalyticParams,
    fit_asymmetry,
    fit_peak_ratio,
    rho_ee_second_order,
    transmission_analytic,
)
from bichrome.floquet import steady_state, time_averaged_observable
from bichrome.liouville import build_liouvillians, unvectorize, vectorize
from bichrome.operators import SpaceOperators
from bichrome.params import DriveTarget, SystemParams
from bichrome.scenarios import (
    ScenarioConfig,
    SweepSpec,
    _offsets_to_delta,
    offresonant_qd_params,
    probe_offset_grid,
    resonant_strong_coupling_params,
    run_scenario,
    write_csv,
)
from bichrome.spectra import Observable, cavity_intensity, find_extrema, probe_sweep, qd_population

LOWER_POLARITON = -30.049893981681418  # closed-form peak at the fig1 parameters
SECOND_MANIFOLD = -(np.sqrt(2.0) - 1.0) * 30.0


def _report(num: int, name: str, ok: bool, detail: str) -> None:
    line = f"ACCEPTANCE {num:2d} [{name}]: {'PASS' if ok else 'FAIL'} — {detail}"
    print(line, flush=True)
    conftest.ACCEPTANCE_LINES.append(line)


@pytest.fixture(scope="module")
def fig1_table():
    t0 = time.time()
    table = run_scenario(ScenarioConfig(scenario="fig1"))
    table.provenance["_runtime_s"] = time.time() - t0
    return table


def test_criterion_1_vacuum_rabi_doublet(fig1_table):
    offs = fig1_table.column("probe_offset_ghz")
    dev = fig1_table.column("deviation")
    peaks = sorted(
        [e for e in find_extrema(offs, dev) if e.kind == "peak"],
        key=lambda e: -e.value,
    )[:2]
    locs = sorted(e.location for e in peaks)
    step = float(fig1_table.provenance["grid_step_ghz"])
    runtime = float(fig1_table.provenance["_runtime_s"])
    err_lo = abs(locs[0] - LOWER_POLARITON)
    err_hi = abs(locs[1] + LOWER_POLARITON)
    ok = len(locs) == 2 and err_lo <= step and err_hi <= step and runtime < 30.0
    _report(1, "vacuum Rabi doublet", ok,
            f"peaks at {locs[0]:+.4f}/{locs[1]:+.4f} GHz vs ±{-LOWER_POLARITON:.4f} "
            f"(tol {step:.3f}), runtime {runtime:.1f}s")
    assert ok


def test_criterion_2_second_manifold_feature(fig1_table):
    loc = float(fig1_table.provenance["third_feature_ghz"])
    err = abs(loc - SECOND_MANIFOLD)
    ok = err <= 0.2
    _report(2, "higher-order dressed state", ok,
            f"third feature at {loc:.3f} GHz vs {SECOND_MANIFOLD:.3f} (err {err:.3f}, tol 0.2)")
    assert ok


def test_criterion_3_supersplitting_onset():
    table = run_scenario(
        ScenarioConfig(scenario="fig2", sweep=SweepSpec("j1", 0.5, 3.0, 11)))
    counts = [int(r[1]) for r in table.rows]
    seps = [r[2] for r in table.rows]
    onset = next((i for i, c in enumerate(counts) if c >= 2), None)
    post = seps[onset:] if onset is not None else []
    # Spearman correlation of exactly monotone data is 1 up to rounding
    monotone = (
        len(post) >= 2
        and all(c >= 2 for c in counts[onset:])
        and spearmanr(range(len(post)), post).statistic > 1.0 - 1e-9
    )
    ok = onset is not None and counts[0] == 1 and monotone
    _report(3, "supersplitting onset", ok,
            f"peak counts {counts}, post-onset separations "
            f"{[round(s, 3) for s in post]} GHz")
    assert ok


def test_criterion_4_ac_stark_knee():
    table = run_scenario(ScenarioConfig(scenario="fig3"))
    knee = table.provenance["knee_j1_ghz"]
    ok = knee != "none" and 4.0 <= float(knee) <= 6.0
    _report(4, "AC Stark knee", ok, f"knee at J1 = {knee} GHz (window [4, 6])")
    assert ok


def test_criterion_5_analytic_transmission_oracle():
    # single weak monochromatic laser scanned across the polariton doublet
    base = SystemParams(nu_c=0.0, nu_d=0.0, g=30.0, kappa=3.0, gamma=1.0,
                        gamma_d=0.0, gamma_r=0.0, j1=0.01, j2=0.0,
                        drive_target=DriveTarget.CAVITY)
    ana = AnalyticParams.from_system(base)
    grid = np.linspace(-1.6 * 30.0, 1.6 * 30.0, 401)
    num = np.array([cavity_intensity(base.with_(nu_l=w)) for w in grid])
    ref = np.array([transmission_analytic(w, ana) for w in grid])
    scale = float(num @ ref / (num @ num))
    rel = np.abs(scale * num - ref) / ref
    ok = rel.max() < 0.02
    _report(5, "analytic transmission oracle", ok,
            f"max relative deviation {rel.max():.2e} over 401 points (tol 2e-2)")
    assert ok


def test_criterion_6_qd_population_oracle():
    base = offresonant_qd_params(j1=1.75).with_(gamma_r=0.0, j2=0.01)
    ana = AnalyticParams.from_system(base)
    grid = np.linspace(-8.0, 8.0, 81)
    num = np.array([qd_population(base.with_(delta=d)) for d in grid])
    ref = rho_ee_second_order(grid, ana)
    unprobed = 1.75**2 / (2 * 1.75**2 + 1.0 * (1.0 + 3.0))
    amplitude = np.abs(ref - unprobed).max()
    err = np.abs(num - ref).max()
    num0 = qd_population(base.with_(j2=0.0))
    ok = err < 0.05 * amplitude and abs(num0 - unprobed) < 1e-10
    _report(6, "QD population oracle", ok,
            f"max error {err:.2e} = {err / amplitude:.1%} of probe amplitude "
            f"(tol 5%), unprobed error {abs(num0 - unprobed):.1e}")
    assert ok


def _analytic_dip_locations(j1: float) -> list:
    p = AnalyticParams.from_system(offresonant_qd_params(j1=j1))
    d = np.linspace(-8.0, 8.0, 40001)
    r = rho_ee_second_order(d, p)
    return [float(d[i]) for i in range(1, d.size - 1)
            if r[i] < r[i - 1] and r[i] < r[i + 1]]


def test_criterion_7_dressed_state_dips():
    # At the published pump (J1 = 1.75) the pure-dephasing rate keeps the
    # two dressed-state dips merged into one: the second-order formula has
    # a single minimum at delta = 0, and the solver agrees.  The two-dip
    # check is therefore run at J1 = 2.5, the first default-rate pump for
    # which the same formula predicts two minima.
    merged = run_scenario(ScenarioConfig(scenario="fig5"))
    n_merged = int(merged.provenance["n_dips"])
    consistent = n_merged == len(_analytic_dip_locations(1.75)) == 1

    split = run_scenario(ScenarioConfig(scenario="fig5", overrides={"j1": 2.5}))
    dips = sorted(float(s) for s in
                  str(split.provenance["dip_locations_ghz"]).split(";") if s)
    ref = _analytic_dip_locations(2.5)
    two = len(dips) == 2
    symmetric = two and abs(sum(dips)) < 0.05
    within = two and all(
        abs(d - r) <= 0.05 * abs(r) for d, r in zip(dips, ref))

    lorentzian = run_scenario(
        ScenarioConfig(scenario="fig5", overrides={"j1": 0.4}))
    no_dips = int(lorentzian.provenance["n_dips"]) == 0

    ok = consistent and two and symmetric and within and no_dips
    _report(7, "dressed-state dips", ok,
            f"J1=2.5: dips {[round(d, 3) for d in dips]} vs analytic "
            f"{[round(r, 3) for r in ref]} GHz, sum {sum(dips):+.1e}; "
            f"J1=1.75: {n_merged} dip (formula agrees); 2J1<gamma: "
            f"{int(lorentzian.provenance['n_dips'])} dips")
    assert ok


def test_criterion_8_asymmetry_law():
    table = run_scenario(ScenarioConfig(scenario="fig6"))
    diffs = table.column("peak_diff")
    ratios = table.column("peak_ratio")
    diff_rms = float(table.provenance["diff_fit_rms"])
    diff_frac = diff_rms / diffs.max()

    pts = [(x, r - 1.0) for x, r in
           zip(table.column("g_ghz") ** 2 / table.column("detuning_ghz"), ratios)]
    _, _, ratio_rms = fit_peak_ratio(pts)
    ratio_frac = ratio_rms / (ratios - 1.0).max()

    ok = diff_frac < 0.02 and ratio_frac < 0.02
    _report(8, "asymmetry law", ok,
            f"diff fit rms {diff_frac:.1%} of max, ratio fit rms "
            f"{ratio_frac:.1%} of max (tol 2%); the rational law is "
            f"asymptotic in detuning and is violated by the 4*kappa row")
    assert ok


def test_criterion_9_time_domain_equivalence():
    sets = {
        "resonant": resonant_strong_coupling_params(j1=1.0).with_(delta=10.0),
        "offresonant": offresonant_qd_params(j1=1.75).with_(delta=3.0),
    }
    rng = np.random.default_rng(20260823)
    gamma, gamma_d, gamma_r, kappa = (float(x) for x in rng.uniform(0.5, 20.0, 4))
    sets["randomized"] = SystemParams(
        nu_c=0.0, nu_d=0.0, nu_l=0.0, g=5.0, kappa=kappa, gamma=gamma,
        gamma_d=gamma_d, gamma_r=gamma_r, j1=1.0, j2=0.01 * gamma, delta=4.0,
        drive_target=DriveTarget.CAVITY)

    worst = 0.0
    for name, p in sets.items():
        ops = SpaceOperators(p.hilbert)
        for cf_val, op in ((cavity_intensity(p), ops.number),
                           (qd_population(p), ops.qd_excited)):
            td_val = time_averaged_observable(p, op)
            worst = max(worst, abs(cf_val - td_val) / abs(td_val))
    ok = worst < 1e-3
    _report(9, "time-domain oracle equivalence", ok,
            f"worst relative disagreement {worst:.2e} over three parameter "
            f"sets (tol 1e-3)")
    assert ok


def _fig1_peak_locations(params) -> np.ndarray:
    offs = probe_offset_grid(params, 1.6 * params.g, 801)
    sweep = probe_sweep(params, _offsets_to_delta(params, offs))
    peaks = sorted(
        [e for e in find_extrema(offs, sweep.deviation) if e.kind == "peak"],
        key=lambda e: -e.value,
    )[:2]
    return np.array(sorted(e.location for e in peaks))


def _fig5_dip_indices(params) -> list:
    grid = np.linspace(-4.0, 4.0, 81)
    sweep = probe_sweep(params, grid, Observable.SPECTRUM_PEAK_NEAR_CAVITY,
                        spectrum_points=301)
    y = sweep.deviation
    return [i for i in range(1, 80) if y[i] < y[i - 1] and y[i] < y[i + 1]]


def test_criterion_10_invariant_suite(tmp_path):
    checks = {}

    # trace annihilation by every Liouvillian block
    worst_tr = 0.0
    for p in (resonant_strong_coupling_params(j1=0.1).with_(delta=3.0),
              offresonant_qd_params(j1=1.75).with_(delta=2.0)):
        dim = p.hilbert.dim
        tr = vectorize(np.eye(dim)).conj()
        for L in build_liouvillians(p):
            scale = max(np.abs(L).max(), 1.0)
            worst_tr = max(worst_tr, float(np.abs(tr @ L).max()) / scale)
    checks["trace"] = worst_tr < 1e-12

    # harmonic pairing rho_{-1} = rho_1^dag
    worst_h = 0.0
    for p in (resonant_strong_coupling_params(j1=1.0).with_(delta=5.0),
              offresonant_qd_params(j1=1.75).with_(delta=2.0)):
        ss = steady_state(p)
        r1 = unvectorize(ss.harmonics[1])
        rm1 = unvectorize(ss.harmonics[-1])
        worst_h = max(worst_h, float(np.abs(rm1 - r1.conj().T).max()))
    checks["hermiticity"] = worst_h < 1e-10

    # refinement convergence of the doublet peak positions (criterion 1)
    p1 = resonant_strong_coupling_params(j1=0.1)
    base = _fig1_peak_locations(p1)
    conv1 = max(
        float(np.abs((_fig1_peak_locations(p1.with_(**kw)) - base) / base).max())
        for kw in ({"n_max": 5}, {"fock_levels": 4}))
    checks["peak convergence"] = conv1 < 1e-8

    # dip positions (criterion 7) compared at grid resolution: the dip
    # bottom is flat enough that sub-grid refinement amplifies value noise
    # far beyond the underlying observable convergence
    p5 = offresonant_qd_params(j1=2.5)
    dips = _fig5_dip_indices(p5)
    conv5 = all(_fig5_dip_indices(p5.with_(**kw)) == dips
                for kw in ({"n_max": 5}, {"fock_levels": 4}))
    checks["dip convergence"] = bool(dips) and conv5

    # bitwise CSV determinism, including serial vs parallel dispatch
    cfg = dict(scenario="custom",
               overrides={"nu_c": 0.0, "nu_d": 0.0, "nu_l": 0.0, "g": 2.0,
                          "kappa": 2.0, "gamma": 1.0, "j1": 0.2, "j2": 0.02},
               sweep=SweepSpec("delta", -1.0, 1.0, 5))
    paths = [tmp_path / f"run{i}.csv" for i in range(3)]
    for path, jobs in zip(paths, (1, 1, 3)):
        write_csv(run_scenario(ScenarioConfig(jobs=jobs, **cfg)), path)
    checks["determinism"] = (paths[0].read_bytes() == paths[1].read_bytes()
                             == paths[2].read_bytes())

    ok = all(checks.values())
    _report(10, "invariant suite", ok,
            f"trace {worst_tr:.1e} (<1e-12), pairing {worst_h:.1e} (<1e-10), "
            f"peak-location drift {conv1:.1e} (<1e-8), dip indices stable: "
            f"{checks['dip convergence']}, CSV determinism: {checks['determinism']}")
    assert ok, checks
