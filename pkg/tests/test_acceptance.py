"""Acceptance suite: one test per criterion, printed one line per criterion.

Run with  pytest tests/test_acceptance.py -s  to see the lines as they pass.
Every tolerance is pinned here; nothing is deferred to later calibration.
"""

import json
import time

import mpmath
import numpy as np
import pytest
import scipy.linalg

from walklab.asymptotics import (WeakLimitDensity, empirical_density_compare,
                                 normalization_integral, time_averaged_density)
from walklab.bessel import bessel_i_scaled_array
from walklab.classical import (classical_limit_evolve, combined_density,
                               combined_density_diffusion_check, diffusion_evolve,
                               persistent_step, persistent_two_step_check)
from walklab.cli import EXIT_OK, main
from walklab.ctqw import (CtqwParams, chiral_decompose, ctqw_analytic_field,
                          ctqw_evolve, limit_analytic_field, limit_pair_evolve)
from walklab.dtqw import (DtqwParams, dispersion, dtqw_evolve, dtqw_step,
                          initial_symmetric_entangled)
from walklab.lattice import (ChiralProbabilityField, MomentumGrid,
                             ProbabilityField, ScalarWaveField, SpinorField,
                             density)
from walklab.limits import (bch_order_fit, convergence_scan,
                            coinless_spectral_equivalence, even_odd_split,
                            lattice_laplacian)
from walklab.walk3d import (Scalar3DField, ctqw3d_evolve, effective_generator_3d,
                            limit_coefficients_3d, limit_hamiltonian_3d,
                            zeroth_order_defect)

GAMMA = 0.125


def report(num: int, name: str, ok: bool, detail: str) -> None:
    print(f"criterion {num:2d} [{name}]: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {num} failed: {detail}"


def random_spinor(n, seed):
    rng = np.random.default_rng(seed)
    pr = rng.normal(size=n) + 1j * rng.normal(size=n)
    pl = rng.normal(size=n) + 1j * rng.normal(size=n)
    norm = np.sqrt(np.sum(np.abs(pr) ** 2 + np.abs(pl) ** 2))
    return SpinorField(pr / norm, pl / norm)


@pytest.mark.filterwarnings("ignore::walklab.lattice.WraparoundRiskWarning")
def test_criterion_01_unitarity_and_conservation():
    drifts = []
    for theta in (0.0, np.pi / 6, np.pi / 4, np.pi / 2 - 0.01):
        out = dtqw_evolve(random_spinor(2048, seed=42), DtqwParams(theta, 2048, 1000))
        drifts.append(abs(out.norm() - 1.0))
    dtqw_drift = max(drifts)

    ctqw_out = ctqw_evolve(ScalarWaveField.delta(1024), CtqwParams(GAMMA, 1000.0, 1024))
    ctqw_drift = abs(ctqw_out.norm() - 1.0)
    pair_out = limit_pair_evolve(random_spinor(1024, seed=7),
                                 CtqwParams(GAMMA, 1000.0, 1024))
    pair_drift = abs(pair_out.norm() - 1.0)

    walked = ChiralProbabilityField.delta(64)
    for _ in range(10_000):
        walked = persistent_step(walked, 0.3)
    rate = classical_limit_evolve(ChiralProbabilityField.delta(256), GAMMA, 100.0)
    heat = diffusion_evolve(ProbabilityField.delta(256), GAMMA, 100.0)
    classical_drift = max(abs(walked.total() - 1.0), abs(rate.total() - 1.0),
                          abs(heat.total() - 1.0))
    least = min(walked.p_r.min(), walked.p_l.min(), rate.p_r.min(),
                rate.p_l.min(), heat.values.min())

    ok = (dtqw_drift <= 1e-12 and ctqw_drift <= 1e-13 and pair_drift <= 1e-13
          and classical_drift <= 1e-12 and least >= -1e-14)
    report(1, "unitarity/conservation", ok,
           f"dtqw drift {dtqw_drift:.2e}, ctqw {ctqw_drift:.2e}, "
           f"pair {pair_drift:.2e}, classical {classical_drift:.2e}, min {least:.1e}")


def test_criterion_02_closed_form_oracles():
    n = 512
    params = CtqwParams(GAMMA, 100.0, n)
    ctqw_err = np.abs(ctqw_evolve(ScalarWaveField.delta(n), params).amps
                      - ctqw_analytic_field(params).amps).max()

    pair = limit_pair_evolve(initial_symmetric_entangled(n), params)
    exact = limit_analytic_field(params)
    pair_err = max(np.abs(pair.psi_r - exact.psi_r).max(),
                   np.abs(pair.psi_l - exact.psi_l).max())

    m = 128
    t = 40.0  # 2*gamma*t = 10
    heat = diffusion_evolve(ProbabilityField.delta(m), GAMMA, t)
    kernel = bessel_i_scaled_array(m // 2, 2 * GAMMA * t)[:m]
    heat_err = np.abs(heat.values - kernel).max()

    ok = ctqw_err <= 1e-10 and pair_err <= 1e-9 and heat_err <= 1e-10
    report(2, "closed-form oracles", ok,
           f"ctqw {ctqw_err:.2e} <= 1e-10, pair {pair_err:.2e} <= 1e-9, "
           f"diffusion {heat_err:.2e} <= 1e-10")


def test_criterion_03_double_step_collapse_order():
    start = time.perf_counter()
    _, slope = bch_order_fit([0.1, 0.05, 0.025, 0.0125], k_grid_points=32)
    elapsed = time.perf_counter() - start
    ok = abs(slope - 2.0) <= 0.1 and elapsed < 1.0
    report(3, "collapse order", ok, f"slope {slope:.4f} = 2.0 +- 0.1, {elapsed:.2f}s")


def test_criterion_04_limit_convergence():
    initial = initial_symmetric_entangled(128)
    details = []
    ok = True
    for two_gt, taus in ((1.0, [20, 40, 80, 160]),
                         (2.0, [40, 80, 160, 320]),
                         (4.0, [80, 160, 320, 640])):
        scan = convergence_scan(GAMMA, two_gt / (2 * GAMMA), taus, initial)
        errors = [e.state_error for e in scan.entries]
        decreasing = all(a > b for a, b in zip(errors, errors[1:]))
        ok = ok and abs(scan.fitted_slope - 1.0) <= 0.15 and decreasing
        details.append(f"2gt={two_gt:g}: slope {scan.fitted_slope:.4f}")
    report(4, "limit convergence", ok, "; ".join(details) + " (all 1.0 +- 0.15)")


def test_criterion_05_chiral_structure():
    n = 512
    f = initial_symmetric_entangled(n)
    worst_minus = 0.0
    for t in np.arange(0.0, 100.5, 5.0):
        out = limit_pair_evolve(f, CtqwParams(GAMMA, float(t), n))
        worst_minus = max(worst_minus,
                          chiral_decompose(out, GAMMA, float(t)).minus.norm())

    t = 60.0
    g = random_spinor(n, seed=5)
    params = CtqwParams(GAMMA, t, n)
    late = chiral_decompose(limit_pair_evolve(g, params), GAMMA, t)
    early = chiral_decompose(g, GAMMA, 0.0)
    plus_r = ctqw_evolve(ScalarWaveField(early.plus.psi_r), params).amps
    plus_l = ctqw_evolve(ScalarWaveField(early.plus.psi_l), params).amps
    minus_r = ctqw_evolve(ScalarWaveField(early.minus.psi_r), params, lap_sign=-1).amps
    minus_l = ctqw_evolve(ScalarWaveField(early.minus.psi_l), params, lap_sign=-1).amps
    commute_err = max(np.abs(plus_r - late.plus.psi_r).max(),
                      np.abs(plus_l - late.plus.psi_l).max(),
                      np.abs(minus_r - late.minus.psi_r).max(),
                      np.abs(minus_l - late.minus.psi_l).max())

    ok = worst_minus <= 1e-12 and commute_err <= 1e-12
    report(5, "chiral structure", ok,
           f"max |minus| {worst_minus:.2e} <= 1e-12, commute {commute_err:.2e} <= 1e-12")


@pytest.mark.filterwarnings("ignore::walklab.lattice.WraparoundRiskWarning")
def test_criterion_06_weak_limits():
    theta = np.arccos(0.5)
    norm_ctqw = normalization_integral(WeakLimitDensity.ctqw(GAMMA, 1000.0))
    norm_dtqw = normalization_integral(WeakLimitDensity.dtqw(theta, 1000.0))

    def ctqw_distance(t, n):
        state = ctqw_evolve(ScalarWaveField.delta(n), CtqwParams(GAMMA, t, n))
        return empirical_density_compare(density(state),
                                         WeakLimitDensity.ctqw(GAMMA, t)).distance

    def dtqw_distance(tau, n):
        state = dtqw_evolve(initial_symmetric_entangled(n), DtqwParams(theta, n, tau))
        smoothed = time_averaged_density(density(state),
                                         density(dtqw_step(state, theta)))
        return empirical_density_compare(
            smoothed, WeakLimitDensity.dtqw(theta, tau + 0.5)).distance

    c1000 = ctqw_distance(1000.0, 2048)
    c500 = ctqw_distance(500.0, 1024)
    c2000 = ctqw_distance(2000.0, 2048)
    d1000 = dtqw_distance(1000, 2048)
    d500 = dtqw_distance(500, 1024)
    d2000 = dtqw_distance(2000, 4096)

    ok = (abs(norm_ctqw - 1.0) <= 1e-6 and abs(norm_dtqw - 1.0) <= 1e-6
          and c1000 <= 0.05 and d1000 <= 0.05
          and c2000 < c500 and d2000 < d500)
    report(6, "weak limits", ok,
           f"norms {norm_ctqw:.8f}/{norm_dtqw:.8f}; L1@1000 ctqw {c1000:.4f}, "
           f"dtqw {d1000:.4f} <= 0.05; monotone ctqw {c500:.4f}->{c2000:.4f}, "
           f"dtqw {d500:.4f}->{d2000:.4f}")


def test_criterion_07_classical_limit_chain():
    rng = np.random.default_rng(11)
    raw_r, raw_l = rng.random(64), rng.random(64)
    total = raw_r.sum() + raw_l.sum()
    p = ChiralProbabilityField(raw_r / total, raw_l / total)
    two_step_defect = persistent_two_step_check(p, 0.37)

    n, t, dt = 64, 20.0, 1e-3
    exact = classical_limit_evolve(ChiralProbabilityField.delta(n), GAMMA, t)
    walked = ChiralProbabilityField.delta(n)
    for _ in range(int(round(t / dt))):
        walked = persistent_step(walked, 2 * GAMMA * dt)
    ode_l1 = float(np.sum(np.abs(walked.p_r - exact.p_r))
                   + np.sum(np.abs(walked.p_l - exact.p_l)))

    combined_defect = combined_density_diffusion_check(
        ChiralProbabilityField.delta(128), GAMMA, 40.0)

    ok = two_step_defect <= 1e-14 and ode_l1 <= 1e-3 and combined_defect <= 1e-10
    report(7, "classical limit chain", ok,
           f"two-step {two_step_defect:.2e} <= 1e-14, small-step L1 {ode_l1:.2e} "
           f"<= 1e-3, combined {combined_defect:.2e} <= 1e-10")


def test_criterion_08_coinless_equivalence():
    exact_sum = all(
        np.array_equal(np.add(*[h.matrix for h in even_odd_split(n)]),
                       lattice_laplacian(n).matrix)
        for n in (8, 16, 32))
    worst = max(coinless_spectral_equivalence(theta, n)
                for theta in (np.pi / 6, np.pi / 3) for n in (8, 16, 32))
    ok = exact_sum and worst <= 1e-10
    report(8, "coinless equivalence", ok,
           f"split exact: {exact_sum}, max spectral distance {worst:.2e} <= 1e-10")


@pytest.mark.filterwarnings("ignore::walklab.lattice.WraparoundRiskWarning")
def test_criterion_09_three_dimensional():
    grid7 = np.linspace(-np.pi, np.pi, 7, endpoint=False)
    identity_err = 0.0
    for kx in grid7:
        for ky in grid7:
            for kz in grid7:
                a, b = limit_coefficients_3d((kx, ky, kz))
                identity_err = max(identity_err, abs(
                    np.sqrt(a * a + b @ b) - abs(np.cos(kx) * np.cos(ky) * np.cos(kz))))

    grid5 = np.linspace(-np.pi, np.pi, 5, endpoint=False)
    sym_defect = max(zeroth_order_defect((a, b, c), "symmetric")
                     for a in grid5 for b in grid5 for c in grid5)
    naive_defect = max(zeroth_order_defect((a, b, c), "naive")
                       for a in grid5 for b in grid5 for c in grid5)

    k = (0.5, 0.7, 0.9)
    h = limit_hamiltonian_3d(k, GAMMA).matrix
    deltas = [0.04, 0.02, 0.01, 0.005]
    errs = [np.linalg.norm(effective_generator_3d(k, d, "symmetric", GAMMA).matrix - h)
            for d in deltas]
    slope = float(np.polyfit(np.log(deltas), np.log(errs), 1)[0])

    edge, t = 8, 10.0

    def idx(x, y, z):
        return (x % edge) * edge * edge + (y % edge) * edge + (z % edge)

    dense_h = np.zeros((edge ** 3, edge ** 3), dtype=complex)
    for x in range(edge):
        for y in range(edge):
            for z in range(edge):
                for dx in (-1, 1):
                    for dy in (-1, 1):
                        for dz in (-1, 1):
                            dense_h[idx(x, y, z), idx(x + dx, y + dy, z + dz)] += -GAMMA / 4
    psi0 = np.zeros(edge ** 3, complex)
    psi0[idx(edge // 2, edge // 2, edge // 2)] = 1.0
    dense = scipy.linalg.expm(-1j * dense_h * t) @ psi0
    spectral = ctqw3d_evolve(Scalar3DField.delta((edge,) * 3), GAMMA, t)
    evolve_err = np.abs(spectral.amps.reshape(-1) - dense).max()

    ok = (identity_err <= 1e-13 and sym_defect <= 1e-13 and naive_defect >= 0.1
          and abs(slope - 1.0) <= 0.2 and evolve_err <= 1e-10)
    report(9, "three-dimensional walk", ok,
           f"eig identity {identity_err:.2e} <= 1e-13, defects sym {sym_defect:.2e}"
           f"/naive {naive_defect:.2f}, slope {slope:.3f} = 1.0 +- 0.2, "
           f"evolve vs expm {evolve_err:.2e} <= 1e-10")


def test_criterion_10_figure_reproduction(tmp_path):
    outdir = tmp_path / "figure1"
    code = main(["figure1", "--outdir", str(outdir)])
    files_ok = code == EXIT_OK and all(
        (outdir / f"panel_{p}.{ext}").exists()
        for p in ("a", "b", "c") for ext in ("csv", "svg"))

    summary = json.loads((outdir / "summary.json").read_text())
    metrics = summary["metrics"]

    mpmath.mp.dps = 30
    j0_25 = float(mpmath.besselj(0, 25))  # independent high-precision oracle
    rho_origin_err = abs(metrics["rho_origin_c"] - j0_25 ** 2)

    theta = np.arccos(0.25)
    gv = max(abs(dispersion(k, theta)[1]) for k in MomentumGrid(256).values)

    # twin peaks of the emitted panel (a) sit at +- cos(theta) * tau
    rows = np.loadtxt(outdir / "panel_a.csv", delimiter=",", skiprows=1)
    final = rows[rows[:, 0] == 100.0]
    pos, rho = final[:, 1], final[:, 2]
    left_peak = pos[pos < 0][np.argmax(rho[pos < 0])]
    right_peak = pos[pos > 0][np.argmax(rho[pos > 0])]
    peaks_ok = abs(right_peak - 25) <= 3 and abs(left_peak + 25) <= 3

    ok = (files_ok and metrics["l1_bc"] <= 0.02 and metrics["l1_ab"] <= 0.35
          and rho_origin_err <= 1e-12 and abs(gv - 0.25) <= 1e-5 and peaks_ok)
    report(10, "figure reproduction", ok,
           f"l1_bc {metrics['l1_bc']:.2e} <= 0.02, l1_ab {metrics['l1_ab']:.4f} "
           f"<= 0.35, rho(0) err {rho_origin_err:.2e}, max gv {gv:.8f} = 0.25 "
           f"+- 1e-5, peaks at {left_peak:g}/{right_peak:g}")
