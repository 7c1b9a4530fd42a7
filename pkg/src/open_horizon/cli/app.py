#!/usr/bin/env python3
"""
open-horizon Command Line
=========================

Scenario-driven front end. Each task subcommand reads a scenario file, runs
the matching library routines and writes CSV/JSON files plus a manifest.

Usage:
    python3 -m open_horizon horizon --scenario bh.json --out out/bh
    python3 -m open_horizon sweep --scenario scenarios/ --out out
    python3 -m open_horizon validate --scenario bh.json

Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 I/O error.
"""

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from ..core.constants import BOLTZMANN, HBAR
from ..core.errors import NoHorizonError, NumericalError, ScenarioError, ValidationError
from ..core.medium import (
    light_speed,
    permittivity_curve,
    refractive_index,
    static_permittivity,
    truncated_permittivity,
)
from ..core.metric import (
    REST,
    FieldStrength,
    contravariant_metric,
    covariant_metric,
    four_velocity,
    inverse_residual,
    lagrangian_covariant,
    lagrangian_geometric,
    lagrangian_magnitude,
    lagrangian_rest,
    metric_determinant,
)
from ..flow.coords import covariant_block, metric_profile, static_surface_gravity
from ..flow.horizon import analyze, find_ergosurface, planck_spectrum, sonic_surface_gravity
from ..rays.geodesic import RayDirection, RayTraceSettings, sweep_rays
from ..waves.wavesim import Grid1D, centroid, coefficients, init_packet, run
from .outputs import OutputWriter
from .scenario import TASKS, Scenario, load_scenario


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


class Console:
    """Progress lines on stdout, silenced by --quiet."""

    def __init__(self, quiet: bool = False):
        self.quiet = quiet

    def line(self, message: str = ""):
        if not self.quiet:
            print(message)

    def banner(self, title: str):
        self.line("=" * 50)
        self.line(f"  {title}")
        self.line("=" * 50)


@dataclass
class RunResult:
    status: int
    out_dir: Path
    files: List[str] = field(default_factory=list)
    message: str = ""


# =============================================================================
# TASKS
# =============================================================================

def metric_identities(rng: np.random.Generator, n_samples: int) -> dict:
    """
    Worst residuals of the metric identities over random (eps, beta, F) draws.

    eps in [1, 100], |beta| <= 0.99 in a random direction.
    """
    worst_inverse = 0.0
    worst_det = 0.0
    worst_lagrangian = 0.0
    for _ in range(n_samples):
        eps = rng.uniform(1.0, 100.0)
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        u = four_velocity(rng.uniform(0.0, 0.99) * axis)
        g_up = contravariant_metric(eps, u)
        g_down = covariant_metric(eps, u)
        worst_inverse = max(worst_inverse, inverse_residual(g_up, g_down))
        worst_det = max(worst_det, abs(metric_determinant(g_up) + eps) / eps)

        F = FieldStrength(tuple(rng.normal(size=3)), tuple(rng.normal(size=3)))
        covariant = lagrangian_covariant(F, u, eps)
        geometric = lagrangian_geometric(F, g_up)
        worst_lagrangian = max(worst_lagrangian,
                               abs(covariant - geometric) / lagrangian_magnitude(F, g_up))

    F = FieldStrength(tuple(rng.normal(size=3)), tuple(rng.normal(size=3)))
    eps = rng.uniform(1.0, 100.0)
    rest_gap = abs(lagrangian_covariant(F, REST, eps) - lagrangian_rest(F, eps))
    return {
        'n_samples': n_samples,
        'max_inverse_residual': worst_inverse,
        'max_determinant_error': worst_det,
        'max_lagrangian_mismatch': worst_lagrangian,
        'rest_frame_gap': rest_gap,
    }


def run_metric(scenario: Scenario, writer: OutputWriter, console: Console):
    profile, eps = scenario.flow, scenario.epsilon
    r = np.linspace(profile.r_min, profile.r_max, scenario.params['n_points'])
    report = find_ergosurface(profile, eps)
    if report.has_horizon:
        r = np.unique(np.append(r, report.roots))
    writer.write_csv('metric_profile.csv', metric_profile(profile, eps, r))

    rng = np.random.default_rng(scenario.seed)
    identities = metric_identities(rng, scenario.params['n_samples'])
    identities['horizon_radius'] = report.radius
    identities['g00_at_horizon'] = (
        float(covariant_block(profile, eps, report.radius)[0]) if report.has_horizon else None
    )
    writer.write_json('metric_identities.json', identities)
    console.line(f"  {len(r)} radii, max inverse residual {identities['max_inverse_residual']:.2e}")


def run_horizon(scenario: Scenario, writer: OutputWriter, console: Console):
    profile, eps = scenario.flow, scenario.epsilon
    report = analyze(profile, eps, scenario.length_scale_m)
    data = report.to_dict()
    data['flow'] = profile.describe()
    if report.has_horizon:
        data['sonic_kappa'] = {'value': sonic_surface_gravity(profile, eps, report.radius), 'unit': '1/r0'}
        data['static_kappa'] = {'value': static_surface_gravity(profile, eps, report.radius), 'unit': '1/r0'}
        console.line(f"  {report.kind.value} hole, r_h = {report.radius:.10g} r0, "
                     f"kappa = {report.kappa:.10g} / r0")
        if report.temperature is not None:
            console.line(f"  T = {report.temperature:.6g} K (estimate {report.estimate:.3g} K)")
    else:
        console.line("  no horizon")
    writer.write_json('horizon.json', data)


def _default_radii(profile, r_h: float, n_inside: int, n_outside: int) -> np.ndarray:
    inside = np.linspace(profile.r_min + 0.1 * (r_h - profile.r_min),
                         r_h - 0.05 * (r_h - profile.r_min), n_inside)
    outside = np.linspace(r_h + 0.05 * (profile.r_max - r_h),
                          profile.r_max - 0.1 * (profile.r_max - r_h), n_outside)
    return np.concatenate((inside, outside))


def run_geodesic(scenario: Scenario, writer: OutputWriter, console: Console):
    profile, eps, params = scenario.flow, scenario.epsilon, scenario.params
    report = find_ergosurface(profile, eps)
    if not report.has_horizon:
        raise NoHorizonError(f"profile has no horizon at eps = {eps}")
    r_h = report.radius

    if params['radii'] is not None:
        radii = np.asarray(params['radii'], dtype=float)
    else:
        radii = _default_radii(profile, r_h, params['n_inside'], params['n_outside'])
    settings = RayTraceSettings(step=params['step'], max_time=params['max_time'])
    outcomes = sweep_rays(profile, eps, radii, (RayDirection.OUTWARD, RayDirection.INWARD), r_h,
                          settings=settings, keep_trajectories=params['write_trajectories'])

    counts: Dict[str, int] = {}
    for outcome in outcomes:
        key = outcome.classification.value
        counts[key] = counts.get(key, 0) + 1
        if outcome.trajectory is not None:
            writer.write_csv(f'trajectories/ray_{outcome.index:03d}.csv', outcome.trajectory.to_frame())

    writer.write_json('rays.json', {
        'kind': report.kind.value,
        'r_h': {'value': r_h, 'unit': 'r0'},
        'counts': counts,
        'max_drift': max(o.max_drift for o in outcomes),
        'rays': [o.to_dict() for o in outcomes],
    })
    console.line(f"  {len(outcomes)} rays: " + ", ".join(f"{k} {v}" for k, v in sorted(counts.items())))


def run_wave(scenario: Scenario, writer: OutputWriter, console: Console):
    profile, eps, params = scenario.flow, scenario.epsilon, scenario.params
    grid = Grid1D.for_profile(profile, eps, params['n_cells'], cfl_factor=params['cfl_factor'],
                              sponge_fraction=params['sponge_fraction'])
    initial = init_packet(grid, params['center'], params['width'], params['wavenumber'],
                          params['direction'], epsilon=eps, amplitude=params['amplitude'])
    result = run(grid, profile, eps, initial, params['t_final'], probes=params['probes'],
                 sample_every=params['sample_every'], snapshot_every=params['snapshot_every'],
                 cfl_factor=params['cfl_factor'])
    coeffs = coefficients(profile, eps, grid)

    writer.write_csv('field_initial.csv', initial.to_frame(grid))
    writer.write_csv('field_final.csv', result.final.to_frame(grid))
    if result.probe_radii:
        writer.write_csv('probes.csv', result.probe_frame())
    for index, snapshot in enumerate(result.snapshots):
        frame = snapshot.to_frame(grid)
        frame.insert(0, 't', snapshot.t)
        writer.write_csv(f'snapshots/snapshot_{index:04d}.csv', frame)

    writer.write_json('wave_summary.json', {
        'n_cells': grid.n_cells,
        'dr': grid.dr,
        'dt': grid.dt,
        't_final': result.final.t,
        'launch_amplitude': initial.amplitude,
        'energy_initial': result.energies[0],
        'energy_final': result.energies[-1],
        'centroid_initial': centroid(initial, grid, coeffs),
        'centroid_final': centroid(result.final, grid, coeffs),
        'probe_peaks': [{'r': r, 'peak': result.probe_peak(i)}
                        for i, r in enumerate(result.probe_radii)],
    })
    console.line(f"  {grid.n_cells} cells, dt = {grid.dt:.3g}, t = {result.final.t:.6g}")


def run_dispersion(scenario: Scenario, writer: OutputWriter, console: Console):
    medium, params = scenario.medium, scenario.params
    omega_max = params['omega_max']
    if omega_max is None:
        omega_max = 0.9 * medium.min_frequency if medium.modes else 1.0
    omega = np.linspace(0.0, omega_max, params['n_points'])

    columns = {'omega': omega, 'eps': permittivity_curve(medium, omega)}
    # same scale as the mode frequencies, not 1/r0
    units = {'omega': '1'}
    for order in range(params['max_order'] + 1):
        name = f'eps_n{order}'
        columns[name] = np.array([truncated_permittivity(medium, w, order) for w in omega])
        units[name] = '1'
    writer.write_csv('dispersion.csv', pd.DataFrame(columns), units)

    exact = columns['eps'][-1]
    writer.write_json('dispersion.json', {
        'static_permittivity': static_permittivity(medium),
        'refractive_index': refractive_index(medium),
        'light_speed': light_speed(medium),
        'min_frequency': medium.min_frequency,
        'omega_max': omega_max,
        'truncation_error_at_omega_max': [
            abs(columns[f'eps_n{order}'][-1] - exact) for order in range(params['max_order'] + 1)
        ],
    })
    console.line(f"  eps(0) = {static_permittivity(medium):.10g}, n = {refractive_index(medium):.10g}")


def run_spectrum(scenario: Scenario, writer: OutputWriter, console: Console):
    profile, eps, params = scenario.flow, scenario.epsilon, scenario.params
    if scenario.length_scale_m is None:
        raise ValidationError("the spectrum task needs length_scale_m")
    report = analyze(profile, eps, scenario.length_scale_m)
    if not report.has_horizon:
        raise NoHorizonError(f"profile has no horizon at eps = {eps}")
    thermal = BOLTZMANN * report.temperature / HBAR
    omega_max = params['omega_max_factor'] * thermal
    omega = np.linspace(omega_max / params['n_points'], omega_max, params['n_points'])

    frame = pd.DataFrame({'omega': omega, 'occupation': planck_spectrum(report.temperature, omega)})
    writer.write_csv('spectrum.csv', frame, {'omega': 'rad/s'})
    writer.write_json('spectrum.json', {
        'temperature': {'value': report.temperature, 'unit': 'K'},
        'estimate': {'value': report.estimate, 'unit': 'K'},
        'kappa': {'value': report.kappa, 'unit': '1/r0'},
        'thermal_frequency': {'value': thermal, 'unit': 'rad/s'},
    })
    console.line(f"  T = {report.temperature:.6g} K, k_B T / hbar = {thermal:.6g} rad/s")


TASK_RUNNERS: Dict[str, Callable[[Scenario, OutputWriter, Console], None]] = {
    'metric': run_metric,
    'horizon': run_horizon,
    'geodesic': run_geodesic,
    'wave': run_wave,
    'dispersion': run_dispersion,
    'spectrum': run_spectrum,
}


# =============================================================================
# RUNNING
# =============================================================================

def run_scenario(scenario: Scenario, out_dir: Optional[Path] = None,
                 console: Optional[Console] = None) -> RunResult:
    """
    Run one validated scenario and write its outputs and manifest.

    Library errors come back as a nonzero status with a one-line message.
    """
    console = console or Console(quiet=True)
    out_dir = Path(out_dir if out_dir is not None else scenario.out)
    logger.debug("running %s scenario into %s", scenario.task, out_dir)
    try:
        writer = OutputWriter(out_dir)
        writer.write_json('scenario.json', scenario.describe())
        TASK_RUNNERS[scenario.task](scenario, writer, console)
        writer.write_manifest()
    except ValidationError as exc:
        return RunResult(EXIT_VALIDATION, out_dir, message=f"invalid input: {exc}")
    except NumericalError as exc:
        return RunResult(EXIT_NUMERICAL, out_dir, message=f"numerical failure: {exc}")
    except OSError as exc:
        return RunResult(EXIT_IO, out_dir, message=f"I/O error: {exc}")
    return RunResult(EXIT_OK, out_dir, files=writer.relative_files)


def _fail(status: int, message: str) -> int:
    print(f"open-horizon: {message}", file=sys.stderr)
    return status


def _load(path: str, task: Optional[str], seed: Optional[int]) -> Scenario:
    scenario = load_scenario(path, task)
    if seed is not None:
        scenario = replace(scenario, seed=seed)
    return scenario


def task_command(args) -> int:
    console = Console(args.quiet)
    try:
        scenario = _load(args.scenario, args.command, args.seed)
    except ValidationError as exc:
        return _fail(EXIT_VALIDATION, f"invalid scenario: {exc}")
    except OSError as exc:
        return _fail(EXIT_IO, f"I/O error: {exc}")

    out_dir = Path(args.out) if args.out else Path(scenario.out)
    console.banner(f"open-horizon - {scenario.task}")
    console.line(f"  Scenario: {args.scenario}")
    console.line(f"  eps = {scenario.epsilon:.10g}, seed = {scenario.seed}")
    result = run_scenario(scenario, out_dir, console)
    if result.status != EXIT_OK:
        return _fail(result.status, result.message)
    console.line(f"  Wrote {len(result.files)} files to {out_dir}")
    return EXIT_OK


def collect_scenarios(paths: Sequence[str]) -> List[Path]:
    """Scenario files named directly or found (*.json) in named directories."""
    found: List[Path] = []
    for name in paths:
        path = Path(name)
        if path.is_dir():
            found.extend(sorted(path.glob('*.json')))
        else:
            found.append(path)
    return found


def sweep_command(args) -> int:
    console = Console(args.quiet)
    paths = collect_scenarios(args.scenario)
    if not paths:
        return _fail(EXIT_VALIDATION, "sweep found no scenario files")
    stems = [p.stem for p in paths]
    if len(set(stems)) != len(stems):
        return _fail(EXIT_VALIDATION, "sweep scenarios must have distinct file names")
    out_root = Path(args.out or 'out')

    def one(path: Path) -> int:
        try:
            scenario = _load(str(path), None, args.seed)
        except ValidationError as exc:
            return _fail(EXIT_VALIDATION, f"{path}: invalid scenario: {exc}")
        except OSError as exc:
            return _fail(EXIT_IO, f"{path}: I/O error: {exc}")
        result = run_scenario(scenario, out_root / path.stem)
        if result.status != EXIT_OK:
            return _fail(result.status, f"{path}: {result.message}")
        console.line(f"  {path.stem}: {scenario.task}, {len(result.files)} files")
        return EXIT_OK

    console.banner(f"open-horizon - sweep of {len(paths)} scenarios")
    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        statuses = list(pool.map(one, paths))
    return max(statuses)


def validate_command(args) -> int:
    try:
        scenario = load_scenario(args.scenario)
    except ScenarioError as exc:
        for path, message in exc.issues:
            print(f"{path or '<root>'}: {message}")
        return EXIT_VALIDATION
    except ValidationError as exc:
        return _fail(EXIT_VALIDATION, f"invalid scenario: {exc}")
    except OSError as exc:
        return _fail(EXIT_IO, f"I/O error: {exc}")
    if not args.quiet:
        print(f"{args.scenario}: valid {scenario.task} scenario")
    return EXIT_OK


# =============================================================================
# ENTRY POINT
# =============================================================================

def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must be in [0, 2^64), got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--out', help="Output directory (overrides the scenario)")
    common.add_argument('--seed', type=_seed, help="Random seed (overrides the scenario)")
    common.add_argument('--quiet', action='store_true', help="No progress output")
    common.add_argument('-v', '--verbose', action='store_true', help="Enable debug logging")

    parser = argparse.ArgumentParser(prog='open-horizon',
                                     description="Dielectric black-hole analogue toolkit")
    commands = parser.add_subparsers(dest='command', required=True)
    for task in TASKS:
        sub = commands.add_parser(task, parents=[common], help=f"Run a {task} scenario")
        sub.add_argument('--scenario', required=True, help="Scenario JSON file")

    sweep = commands.add_parser('sweep', parents=[common], help="Run many scenarios concurrently")
    sweep.add_argument('--scenario', required=True, nargs='+',
                       help="Scenario files or directories of *.json")
    sweep.add_argument('--workers', type=int, default=None, help="Thread pool size")

    validate = commands.add_parser('validate', parents=[common], help="Check a scenario only")
    validate.add_argument('--scenario', required=True, help="Scenario JSON file")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.command == 'validate':
        return validate_command(args)
    if args.command == 'sweep':
        return sweep_command(args)
    return task_command(args)


if __name__ == "__main__":
    sys.exit(main())
