"""Command-line front end: runs experiments, reproduces the three-panel
density figure, and emits deterministic CSV / JSON / SVG.

Exit codes: 0 on success, 1 on usage/config errors, 2 when the ring-size
guard is violated under --strict (without --strict the run proceeds and
the output is flagged wraparound-risk).  Config files use one key=value
per line, keys matching the long flag names; later command-line flags
override config values.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

import numpy as np

from .asymptotics import (DEFAULT_INTERIOR_FRACTION, DEFAULT_N_BINS,
                          WeakLimitDensity, empirical_density_compare,
                          normalization_integral, time_averaged_density)
from .classical import classical_limit_evolve, diffusion_evolve, persistent_step
from .ctqw import CtqwParams, ctqw_evolve, limit_pair_evolve
from .dtqw import (DtqwParams, dtqw_evolve, dtqw_step,
                   initial_symmetric_entangled, max_group_velocity)
from .lattice import (ChiralProbabilityField, ProbabilityField, ScalarWaveField,
                      SpinorField, WraparoundRiskWarning, density)
from .limits import bch_order_fit, coinless_propagator, coinless_spectral_equivalence, \
    convergence_scan
from .output import (read_state_csv, write_json, write_state_csv,
                     write_surface_csv, write_surface_svg)
from .pauli import unitarity_defect
from .walk3d import (NoContinuousTimeLimitError, Scalar3DField, ctqw3d_evolve,
                     effective_generator_3d, limit_coefficients_3d,
                     limit_hamiltonian_3d, zeroth_order_defect)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_GUARD = 2


class UsageError(Exception):
    pass


class GuardViolation(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with code 2
        raise UsageError(message)


def _expand_config(argv: list[str]) -> list[str]:
    """Replace --config PATH (or --config=PATH) with the flags it contains."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if token == "--config" or token.startswith("--config="):
            if token == "--config":
                if i + 1 >= len(argv):
                    raise UsageError("--config needs a file path")
                path = argv[i + 1]
                i += 2
            else:
                path = token.split("=", 1)[1]
                i += 1
            out.extend(_config_tokens(path))
        else:
            out.append(token)
            i += 1
    return out


def _config_tokens(path: str) -> list[str]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    tokens: list[str] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if value.lower() in ("true", "false"):
            if value.lower() == "true":
                tokens.append(f"--{key}")
        else:
            tokens.extend([f"--{key}", value])
    return tokens


def _resolve_theta(args) -> float:
    has_theta = args.theta is not None
    has_cos = args.cos_theta is not None
    if has_theta == has_cos:
        raise UsageError("give exactly one of --theta / --cos-theta")
    if has_theta:
        return args.theta
    if not -1.0 <= args.cos_theta <= 1.0:
        raise UsageError("--cos-theta must lie in [-1, 1]")
    return float(np.arccos(args.cos_theta))


def _initial_spinor(source: str, n_sites: int) -> SpinorField:
    if source == "delta":
        return SpinorField.delta(n_sites)
    if source == "symmetric-entangled":
        return initial_symmetric_entangled(n_sites)
    state = read_state_csv(source)
    if not isinstance(state, SpinorField):
        raise UsageError(f"{source} does not hold a spinor state")
    if state.n_sites != n_sites:
        raise UsageError(f"{source} has {state.n_sites} sites, expected {n_sites}")
    return state


def _initial_scalar(source: str, n_sites: int) -> ScalarWaveField:
    if source == "delta":
        return ScalarWaveField.delta(n_sites)
    state = read_state_csv(source)
    if not isinstance(state, ScalarWaveField):
        raise UsageError(f"{source} does not hold a scalar state")
    if state.n_sites != n_sites:
        raise UsageError(f"{source} has {state.n_sites} sites, expected {n_sites}")
    return state


def _run_guarded(compute, strict: bool):
    """Run compute() recording ring-guard warnings; enforce them under strict."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", WraparoundRiskWarning)
        result = compute()
    risky = [w for w in caught if issubclass(w.category, WraparoundRiskWarning)]
    if risky and strict:
        raise GuardViolation(str(risky[0].message))
    return result, bool(risky)


def _smoothed_by_initial_kernel(rho: np.ndarray) -> np.ndarray:
    # (1/4, 1/2, 1/4) convolution: the density smearing produced by the
    # symmetric two-site initial state relative to a point source
    return 0.25 * np.roll(rho, 1) + 0.5 * rho + 0.25 * np.roll(rho, -1)


# ---------------------------------------------------------------------------
# subcommand handlers

def _run_dtqw(args) -> int:
    theta = _resolve_theta(args)
    params = DtqwParams(theta, args.n_sites, args.steps)
    initial = _initial_spinor(args.initial, args.n_sites)
    config = {"subcommand": "dtqw", "theta": theta, "n_sites": args.n_sites,
              "steps": args.steps, "initial": args.initial, "format": args.format}

    if args.format == "svg":
        def compute():
            state = initial
            rows = [density(state).values]
            for _ in range(args.steps):
                state = dtqw_step(state, theta)
                rows.append(density(state).values)
            return np.array(rows)
        rho, risk = _run_guarded(compute, args.strict)
        meta = dict(config, wraparound_risk=risk)
        write_surface_svg(args.output, np.arange(args.steps + 1),
                          initial.positions, rho, meta)
        return EXIT_OK

    final, risk = _run_guarded(lambda: dtqw_evolve(initial, params), args.strict)
    if args.format == "csv":
        write_state_csv(args.output, final)
    else:
        results = {"state": [[int(n), z.real, z.imag, w.real, w.imag]
                             for n, z, w in zip(final.positions, final.psi_r, final.psi_l)]}
        write_json(args.output, config, results,
                   {"norm": final.norm(), "wraparound_risk": risk})
    return EXIT_OK


def _run_ctqw(args) -> int:
    params = CtqwParams(args.gamma, args.time, args.n_sites)
    initial = _initial_scalar(args.initial, args.n_sites)
    config = {"subcommand": "ctqw", "gamma": args.gamma, "time": args.time,
              "n_sites": args.n_sites, "initial": args.initial, "format": args.format}

    if args.format == "svg":
        times = np.arange(int(np.floor(args.time)) + 1)

        def compute():
            return np.array([density(ctqw_evolve(initial, CtqwParams(
                args.gamma, float(t), args.n_sites))).values for t in times])
        rho, risk = _run_guarded(compute, args.strict)
        write_surface_svg(args.output, times, initial.positions, rho,
                          dict(config, wraparound_risk=risk))
        return EXIT_OK

    final, risk = _run_guarded(lambda: ctqw_evolve(initial, params), args.strict)
    if args.format == "csv":
        write_state_csv(args.output, final)
    else:
        results = {"state": [[int(n), z.real, z.imag]
                             for n, z in zip(final.positions, final.amps)]}
        write_json(args.output, config, results,
                   {"norm": final.norm(), "wraparound_risk": risk})
    return EXIT_OK


def _run_limit_scan(args) -> int:
    taus = _parse_int_list(args.tau)
    initial = _initial_spinor(args.initial, args.n_sites)
    config = {"subcommand": "limit-scan", "gamma": args.gamma, "time": args.time,
              "tau": taus, "n_sites": args.n_sites, "initial": args.initial}
    scan, risk = _run_guarded(
        lambda: convergence_scan(args.gamma, args.time, taus, initial), args.strict)
    results = {"entries": [{"tau": e.tau, "delta": e.delta, "state_error": e.state_error}
                           for e in scan.entries]}
    write_json(args.output, config, results,
               {"fitted_slope": scan.fitted_slope, "wraparound_risk": risk})
    return EXIT_OK


def _run_bch_scan(args) -> int:
    deltas = _parse_float_list(args.deltas)
    means, slope = bch_order_fit(deltas, args.k_points)
    config = {"subcommand": "bch-scan", "deltas": deltas, "k_points": args.k_points}
    write_json(args.output, config,
               {"mean_residuals": list(means)},
               {"fitted_slope": slope})
    return EXIT_OK


def _run_classical(args) -> int:
    config = {"subcommand": "classical", "mode": args.mode, "n_sites": args.n_sites,
              "format": args.format}

    if args.mode == "persistent":
        if args.alpha is None:
            raise UsageError("persistent mode needs --alpha")
        if args.steps is None:
            raise UsageError("persistent mode needs --steps")
        config.update(alpha=args.alpha, steps=args.steps)
        state = ChiralProbabilityField.delta(args.n_sites)
        if args.format == "svg":
            rows = [state.site_density().values]
            for _ in range(args.steps):
                state = persistent_step(state, args.alpha)
                rows.append(state.site_density().values)
            write_surface_svg(args.output, np.arange(args.steps + 1),
                              state.positions, np.array(rows), config)
            return EXIT_OK
        for _ in range(args.steps):
            state = persistent_step(state, args.alpha)
        final = state.site_density()
        chiral = state
    elif args.mode == "limit":
        _need_gamma_time(args)
        config.update(gamma=args.gamma, time=args.time)
        start = ChiralProbabilityField.delta(args.n_sites)
        if args.format == "svg":
            times = np.arange(int(np.floor(args.time)) + 1)
            rows = [classical_limit_evolve(start, args.gamma, float(t)).site_density().values
                    for t in times]
            write_surface_svg(args.output, times, start.positions, np.array(rows), config)
            return EXIT_OK
        chiral = classical_limit_evolve(start, args.gamma, args.time)
        final = chiral.site_density()
    else:  # diffusion
        _need_gamma_time(args)
        config.update(gamma=args.gamma, time=args.time)
        start = ProbabilityField.delta(args.n_sites)
        if args.format == "svg":
            times = np.arange(int(np.floor(args.time)) + 1)
            rows = [diffusion_evolve(start, args.gamma, float(t)).values for t in times]
            write_surface_svg(args.output, times, start.positions, np.array(rows), config)
            return EXIT_OK
        final = diffusion_evolve(start, args.gamma, args.time)
        chiral = None

    if args.format == "csv":
        write_state_csv(args.output, final)
    else:
        results = {"density": [[int(n), p] for n, p in zip(final.positions, final.values)]}
        if chiral is not None:
            results["p_r"] = list(chiral.p_r)
            results["p_l"] = list(chiral.p_l)
        write_json(args.output, config, results, {"total_probability": final.total()})
    return EXIT_OK


def _need_gamma_time(args) -> None:
    if args.gamma is None or args.time is None:
        raise UsageError(f"{args.mode} mode needs --gamma and --time")


def _run_weaklimit(args) -> int:
    config = {"subcommand": "weaklimit", "walk": args.walk, "n_sites": args.n_sites,
              "interior_fraction": args.interior_fraction, "n_bins": args.n_bins}

    if args.walk == "ctqw":
        if args.gamma is None or args.time is None:
            raise UsageError("ctqw weak limit needs --gamma and --time")
        config.update(gamma=args.gamma, time=args.time)
        analytic = WeakLimitDensity.ctqw(args.gamma, args.time)

        def compute():
            state = ctqw_evolve(ScalarWaveField.delta(args.n_sites),
                                CtqwParams(args.gamma, args.time, args.n_sites))
            return density(state)
        simulated, risk = _run_guarded(compute, args.strict)
    else:
        theta = _resolve_theta(args)
        if args.steps is None:
            raise UsageError("dtqw weak limit needs --steps")
        config.update(theta=theta, steps=args.steps)
        # parity smoothing: average two consecutive steps, compare at tau + 1/2
        analytic = WeakLimitDensity.dtqw(theta, args.steps + 0.5)

        def compute():
            state = dtqw_evolve(initial_symmetric_entangled(args.n_sites),
                                DtqwParams(theta, args.n_sites, args.steps))
            later = dtqw_step(state, theta)
            return time_averaged_density(density(state), density(later))
        simulated, risk = _run_guarded(compute, args.strict)

    comparison = empirical_density_compare(simulated, analytic,
                                           args.interior_fraction, args.n_bins)
    if args.density_output:
        write_state_csv(args.density_output, simulated)
    write_json(args.output, config, {},
               {"interior_l1": comparison.distance,
                "excluded_mass": comparison.excluded_mass,
                "bin_width": comparison.bin_width,
                "normalization": normalization_integral(analytic),
                "wraparound_risk": risk})
    return EXIT_OK


def _run_walk3d(args) -> int:
    k = tuple(_parse_float_list(args.k))
    if len(k) != 3:
        raise UsageError("--k needs three comma-separated components")
    config = {"subcommand": "walk3d", "mode": args.mode, "ordering": args.ordering,
              "k": list(k), "gamma": args.gamma}

    if args.mode == "defect":
        write_json(args.output, config, {},
                   {"zeroth_order_defect": zeroth_order_defect(k, args.ordering)})
        return EXIT_OK

    if args.mode == "hamiltonian":
        h = limit_hamiltonian_3d(k, args.gamma)
        a, b = limit_coefficients_3d(k)
        eigs = sorted(float(v) for v in np.linalg.eigvalsh(h.matrix))
        identity_err = abs(np.sqrt(a * a + float(b @ b))
                           - abs(np.cos(k[0]) * np.cos(k[1]) * np.cos(k[2])))
        write_json(args.output, config, {"eigenvalues": eigs},
                   {"coefficient_identity_error": identity_err})
        return EXIT_OK

    if args.mode == "generator":
        config["delta"] = args.delta
        try:
            h_eff = effective_generator_3d(k, args.delta, args.ordering, args.gamma)
        except NoContinuousTimeLimitError:
            write_json(args.output, config, {},
                       {"no_continuous_time_limit": True,
                        "zeroth_order_defect": zeroth_order_defect(k, args.ordering)})
            return EXIT_OK
        target = limit_hamiltonian_3d(k, args.gamma)
        write_json(args.output, config, {},
                   {"no_continuous_time_limit": False,
                    "distance_to_limit": float(np.linalg.norm(h_eff.matrix - target.matrix))})
        return EXIT_OK

    # evolve
    config.update(time=args.time, n_sites=args.n_sites)
    dims = (args.n_sites,) * 3
    state, risk = _run_guarded(
        lambda: ctqw3d_evolve(Scalar3DField.delta(dims), args.gamma, args.time),
        args.strict)
    origin = state.amps[dims[0] // 2, dims[1] // 2, dims[2] // 2]
    write_json(args.output, config, {},
               {"norm": state.norm(), "origin_re": origin.real,
                "origin_im": origin.imag, "wraparound_risk": risk})
    return EXIT_OK


def _run_coinless(args) -> int:
    theta = _resolve_theta(args)
    config = {"subcommand": "coinless", "theta": theta, "n_sites": args.n_sites}
    u = coinless_propagator(theta - np.pi / 2, np.pi / 2, args.n_sites)
    write_json(args.output, config, {},
               {"spectral_distance": coinless_spectral_equivalence(theta, args.n_sites),
                "unitarity_defect": unitarity_defect(u)})
    return EXIT_OK


def run_figure1(args) -> int:
    """Reproduce the three-panel density figure and its summary metrics.

    Panel (a): the discrete walk at the configured cos(theta); panel (b):
    the flip-point limit system; panel (c): the continuous-time walk from
    a point source.  Panels (a) and (b) start from the symmetric
    entangled two-site state.  Densities are sampled at integer times so
    the three time axes coincide under the speed matching
    cos(theta) = 2 gamma.
    """
    theta = float(np.arccos(args.cos_theta))
    n_sites = args.n_sites
    t_max = args.time
    gamma = args.gamma
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    spinor0 = initial_symmetric_entangled(n_sites)
    scalar0 = ScalarWaveField.delta(n_sites)
    times = np.arange(t_max + 1)

    def compute():
        state = spinor0
        rho_a = [density(state).values]
        for _ in range(t_max):
            state = dtqw_step(state, theta)
            rho_a.append(density(state).values)
        rho_b = [density(limit_pair_evolve(
            spinor0, CtqwParams(gamma, float(t), n_sites))).values for t in times]
        rho_c = [density(ctqw_evolve(
            scalar0, CtqwParams(gamma, float(t), n_sites))).values for t in times]
        return np.array(rho_a), np.array(rho_b), np.array(rho_c)

    (rho_a, rho_b, rho_c), risk = _run_guarded(compute, args.strict)

    final_a, final_b, final_c = rho_a[-1], rho_b[-1], rho_c[-1]
    l1_ab = float(np.sum(np.abs(final_a - final_b)))
    l1_bc_raw = float(np.sum(np.abs(final_b - final_c)))
    # panel (b) carries the two-site initial smearing of its source state;
    # compare against panel (c) with that fixed kernel applied
    l1_bc = float(np.sum(np.abs(final_b - _smoothed_by_initial_kernel(final_c))))

    config = {"subcommand": "figure1", "cos_theta": args.cos_theta, "theta": theta,
              "gamma": gamma, "t_max": t_max, "n_sites": n_sites,
              "initial_ab": "symmetric-entangled", "initial_c": "delta"}
    conventions = {
        "time_axis": "densities sampled at integer steps/times, shared axes "
                     "under the speed matching cos_theta = 2*gamma",
        "svg_lightness": "(rho/rho_max)^0.5 grayscale",
        "l1_bc": "panel (b) vs panel (c) smoothed by the (1/4,1/2,1/4) "
                 "kernel of the two-site initial state",
        "l1_ab": "plain per-site L1 at the final time",
    }
    positions = spinor0.positions
    panel_meta = dict(config, wraparound_risk=risk)
    files = {}
    for name, rho in (("a", rho_a), ("b", rho_b), ("c", rho_c)):
        csv_path = outdir / f"panel_{name}.csv"
        svg_path = outdir / f"panel_{name}.svg"
        write_surface_csv(csv_path, times, positions, rho)
        write_surface_svg(svg_path, times, positions, rho,
                          dict(panel_meta, panel=name))
        files[name] = {"csv": csv_path.name, "svg": svg_path.name}

    metrics = {"l1_ab": l1_ab, "l1_bc": l1_bc, "l1_bc_raw": l1_bc_raw,
               "rho_origin_c": float(final_c[n_sites // 2]),
               "max_group_velocity": max_group_velocity(theta),
               "wraparound_risk": risk}
    write_json(outdir / "summary.json", config,
               {"panels": files, "conventions": conventions}, metrics)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

def _parse_float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise UsageError(f"bad numeric list {text!r}") from exc


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise UsageError(f"bad integer list {text!r}") from exc


def _add_common(sub, *, fmt: bool = True) -> None:
    sub.add_argument("--output", "-o", required=True, help="output file path")
    if fmt:
        sub.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
    sub.add_argument("--strict", action="store_true",
                     help="treat ring-guard violations as errors (exit 2)")


def build_parser() -> _Parser:
    parser = _Parser(prog="walklab", description=__doc__)
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser("dtqw", help="discrete-time walk evolution")
    p.add_argument("--theta", type=float)
    p.add_argument("--cos-theta", type=float)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--n-sites", type=int, default=256)
    p.add_argument("--initial", default="symmetric-entangled",
                   help="delta | symmetric-entangled | path to a state CSV")
    _add_common(p)
    p.set_defaults(handler=_run_dtqw)

    p = subs.add_parser("ctqw", help="continuous-time walk evolution")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--time", type=float, required=True)
    p.add_argument("--n-sites", type=int, default=256)
    p.add_argument("--initial", default="delta",
                   help="delta | path to a state CSV")
    _add_common(p)
    p.set_defaults(handler=_run_ctqw)

    p = subs.add_parser("limit-scan", help="convergence of the coin-flip limit")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--time", type=float, required=True)
    p.add_argument("--tau", required=True, help="comma-separated even step counts")
    p.add_argument("--n-sites", type=int, default=128)
    p.add_argument("--initial", default="symmetric-entangled")
    _add_common(p, fmt=False)
    p.set_defaults(handler=_run_limit_scan)

    p = subs.add_parser("bch-scan", help="double-step collapse order")
    p.add_argument("--deltas", default="0.1,0.05,0.025,0.0125")
    p.add_argument("--k-points", type=int, default=32)
    _add_common(p, fmt=False)
    p.set_defaults(handler=_run_bch_scan)

    p = subs.add_parser("classical", help="persistent walk and its limits")
    p.add_argument("--mode", choices=("persistent", "limit", "diffusion"),
                   required=True)
    p.add_argument("--alpha", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--gamma", type=float)
    p.add_argument("--time", type=float)
    p.add_argument("--n-sites", type=int, default=256)
    _add_common(p)
    p.set_defaults(handler=_run_classical)

    p = subs.add_parser("weaklimit", help="long-time density comparison")
    p.add_argument("--walk", choices=("ctqw", "dtqw"), required=True)
    p.add_argument("--gamma", type=float)
    p.add_argument("--time", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--cos-theta", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--n-sites", type=int, default=2048)
    p.add_argument("--interior-fraction", type=float,
                   default=DEFAULT_INTERIOR_FRACTION)
    p.add_argument("--n-bins", type=int, default=DEFAULT_N_BINS)
    p.add_argument("--density-output", help="also write the simulated density CSV")
    _add_common(p, fmt=False)
    p.set_defaults(handler=_run_weaklimit)

    p = subs.add_parser("walk3d", help="3D automaton diagnostics")
    p.add_argument("--mode", choices=("defect", "hamiltonian", "generator", "evolve"),
                   required=True)
    p.add_argument("--ordering", choices=("naive", "symmetric"), default="symmetric")
    p.add_argument("--k", default="0,0,0", help="comma-separated k_x,k_y,k_z")
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--gamma", type=float, default=0.125)
    p.add_argument("--time", type=float, default=10.0)
    p.add_argument("--n-sites", type=int, default=32, help="cube edge length")
    _add_common(p, fmt=False)
    p.set_defaults(handler=_run_walk3d)

    p = subs.add_parser("coinless", help="coinless walk spectral equivalence")
    p.add_argument("--theta", type=float)
    p.add_argument("--cos-theta", type=float)
    p.add_argument("--n-sites", type=int, default=16)
    _add_common(p, fmt=False)
    p.set_defaults(handler=_run_coinless)

    p = subs.add_parser("figure1", help="three-panel density figure")
    p.add_argument("--outdir", required=True)
    p.add_argument("--cos-theta", type=float, default=0.25)
    p.add_argument("--gamma", type=float, default=0.125)
    p.add_argument("--time", type=int, default=100)
    p.add_argument("--n-sites", type=int, default=256)
    p.add_argument("--strict", action="store_true")
    p.set_defaults(handler=run_figure1)

    return parser


def main(argv=None) -> int:
    raw = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(_expand_config(raw))
        return args.handler(args)
    except UsageError as exc:
        print(f"walklab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GuardViolation as exc:
        print(f"walklab: ring-size guard violation: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ValueError, OSError) as exc:
        print(f"walklab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
