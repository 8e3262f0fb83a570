"""
One task per command. A task turns cleaned parameters into artifacts and
checks on the RunContext; the runner writes the manifest around it.
"""
from dataclasses import replace
from typing import Callable, Dict, List
import logging
import math

import numpy as np
from django.conf import settings
from scipy.spatial.distance import pdist

from capacity.energy import (
    energy,
    log_scaling_bound,
    minimize_energy,
    pair_distance_range,
    scale_measure,
    uniform_measure,
    write_measure_csv,
)
from capacity.kernels import LOG_PLUS_POW, RIESZ, Kernel, kernel_values
from capacity.test_sets import make_test_set
from core.exceptions import InvariantViolationError
from core.statistics import jackknife_stderr, second_moment_matrix
from core.streams import derive_seed, stream
from fbm.export import read_path_binary, write_path_binary, write_path_csv
from fbm.process import FbmParams, TimeGrid, covariance_matrix
from fbm.simulation import CIRCULANT, path_seed, simulate_batch, simulate_path
from gaussian.analysis import (
    TimeTuple,
    build_cov,
    dense_det,
    detcov_product,
    detcov_upper_bound,
    gershgorin_max,
    interval_det_bound,
    joint_cov,
    normalize_increments,
    interval_structured_tuple,
    power_iteration_max,
    random_tuple,
)
from gaussian.scanner import chain_det_lower_bound, chain_ratios, lnd_ratio, lnd_scan
from multipoint.config import (
    DECOMPOSITION_TOLERANCE,
    MomentReport,
    MultipointConfig,
    first_moment_ratio,
    first_moment_stable,
    pz_consistency,
)
from multipoint.detection import detect_near_ktuple, write_witness_json
from multipoint.functional import compute_I_eps
from multipoint.moments import epsilon_sweep, mc_moments, write_reports_csv, write_reports_json
from oracles.closed_forms import (
    envelope_point,
    envelope_ratio,
    l_bound,
    l_part,
    m_bound,
    m_integral,
    verification_table,
    write_verification_csv,
)
from oracles.quadrature import GapBand, quad_region
from .runner import RunContext

logger = logging.getLogger(__name__)

# Stream indices kept clear of the per-path indices 0, 1, 2, ...
COVARIANCE_STREAM = 1 << 40
RIGID_MOTION_STREAM = 1 << 41

COVARIANCE_TIMES = 8
COVARIANCE_SIGMAS = 4.0
JACKKNIFE_BATCHES = 50
BRUTE_FORCE_ATOMS = 4000
REFINEMENT_PATHS = 20
TRANSLATIONS = (0.0, 2.0, 5.0)


def _relative(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


# ----- simulate -----

def _covariance_check(fbm: FbmParams, index: int, params: Dict, context: RunContext) -> List:
    grid = TimeGrid(start=1.0 / COVARIANCE_TIMES, step=1.0 / COVARIANCE_TIMES, count=COVARIANCE_TIMES)
    batch = simulate_batch(fbm, grid, derive_seed(context.seed, COVARIANCE_STREAM + index),
                           params['covariance_paths'], CIRCULANT, context.threads)
    samples = batch[:, :, 0]
    empirical = second_moment_matrix(samples)
    stderr = jackknife_stderr(samples, second_moment_matrix, JACKKNIFE_BATCHES)
    analytic = covariance_matrix(fbm, grid.times)
    z = np.abs(empirical - analytic) / np.where(stderr > 0, stderr, np.inf)

    context.checks.add(f'empirical_covariance[H={fbm.hurst:g}]', z.max() <= COVARIANCE_SIGMAS,
                       f'max deviation {z.max():.3f} jackknife standard errors over {samples.shape[0]} samples')
    times = grid.times
    return [
        [fbm.hurst, times[i], times[j], analytic[i, j], empirical[i, j], stderr[i, j]]
        for i in range(COVARIANCE_TIMES) for j in range(COVARIANCE_TIMES)
    ]


def simulate(params: Dict, context: RunContext) -> None:
    fbm = FbmParams(hurst=params['hurst'], dim=params['dim'])
    grid = TimeGrid(start=params['start'], step=params['step'], count=params['count'])
    method = params['method']

    roundtrip = True
    summaries = []
    first = None
    for index in range(params['n_paths']):
        path = simulate_path(fbm, grid, path_seed(context.seed, index), method)
        if first is None:
            first = path
        context.record(write_path_csv(path, context.path(f'path_{index:04d}.csv')))
        binary = context.record(write_path_binary(path, context.path(f'path_{index:04d}.bin')))
        dump = read_path_binary(binary)
        roundtrip &= bool(np.array_equal(dump.values, path.values) and np.array_equal(dump.times, path.times))
        summaries.append({'index': index, 'seed': path.seed, 'method': path.method,
                          'warnings': list(path.warnings)})
    context.write_json('paths.json', {'grid': {'start': grid.start, 'step': grid.step, 'count': grid.count},
                                      'hurst': fbm.hurst, 'dim': fbm.dim, 'paths': summaries})

    context.checks.add('binary_roundtrip', roundtrip, f"{params['n_paths']} path(s) read back bit-for-bit")
    rerun = simulate_path(fbm, grid, path_seed(context.seed, 0), method)
    context.checks.add('deterministic_rerun', np.array_equal(rerun.values, first.values),
                       'path 0 redrawn from its seed')
    batch = simulate_batch(fbm, grid, context.seed, min(params['n_paths'], 4), method, context.threads)
    context.checks.add('batch_matches_single', np.array_equal(batch[0], first.values),
                       'batch row 0 against path 0')
    if not params['covariance_paths']:
        context.checks.skip('empirical_covariance', 'covariance_paths is 0')
        return
    rows = []
    for index, hurst in enumerate(params['covariance_hursts']):
        rows.extend(_covariance_check(FbmParams(hurst=hurst), index, params, context))
    context.write_csv('covariance.csv', ['hurst', 't', 's', 'analytic', 'empirical', 'stderr'], rows)


# ----- lnd_scan -----

def lnd_scan_task(params: Dict, context: RunContext) -> None:
    fbm = FbmParams(hurst=params['hurst'])
    time_range = (params['time_lo'], params['time_hi'])
    try:
        result = lnd_scan(fbm, params['n_configs'], params['max_cond'], time_range,
                          context.seed, context.threads)
    except InvariantViolationError as e:
        context.checks.add('upper_bound', False, str(e))
        context.checks.skip('positive_minimum', 'scan aborted at the upper bound violation')
        context.checks.skip('markov_property', 'scan aborted at the upper bound violation')
        return
    context.write_json('lnd_scan.json', {'hurst': fbm.hurst, **result.to_dict()})
    context.checks.add('upper_bound', True, f'max ratio {result.max_ratio!r}')
    context.checks.add('positive_minimum', result.min_ratio > 0, f'min ratio {result.min_ratio!r}')

    if fbm.hurst != 0.5:
        context.checks.skip('markov_property', f'applies to H = 0.5 only, got H = {fbm.hurst}')
    elif not params['markov_configs']:
        context.checks.skip('markov_property', 'markov_configs is 0')
    else:
        lo, hi = time_range
        worst = 0.0
        for index in range(params['markov_configs']):
            rng = stream(derive_seed(context.seed, index), component=1)
            s, t = np.sort(rng.uniform(lo, hi, size=2))
            if s == t:
                continue
            worst = max(worst, abs(lnd_ratio(fbm, float(t), TimeTuple((float(s),))) - 1.0))
        context.checks.add('markov_property', worst <= 1e-10,
                           f"max |ratio - 1| = {worst:.3e} over {params['markov_configs']} single past times")


# ----- energy and capacity -----

def _kernel(params: Dict) -> Kernel:
    if params['kernel'] == RIESZ:
        return Kernel.riesz_for(FbmParams(hurst=params['hurst'], dim=params['dim']), params['k'])
    return Kernel.log_plus(params['k'])


def _atoms(params: Dict, context: RunContext) -> np.ndarray:
    return make_test_set(params['shape'], params['scale'], params['n_atoms'], context.seed, params['dim'])


def _rigid_motion(atoms: np.ndarray, seed: int) -> np.ndarray:
    rng = stream(derive_seed(seed, RIGID_MOTION_STREAM))
    dim = atoms.shape[1]
    rotation, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    return atoms @ rotation.T + rng.uniform(-5.0, 5.0, size=dim)


def energy_task(params: Dict, context: RunContext) -> None:
    kernel = _kernel(params)
    atoms = _atoms(params, context)
    measure = uniform_measure(atoms)
    block_size = settings.MULTIPOINT_ENERGY_BLOCK

    def measure_energy(m) -> float:
        return energy(m, kernel, block_size, context.threads).energy

    result = energy(measure, kernel, block_size, context.threads)
    nearest, farthest = pair_distance_range(atoms)
    context.record(write_measure_csv(measure, context.path('measure.csv')))
    context.write_json('energy.json', {**result.to_dict(), 'shape': params['shape'], 'scale': params['scale'],
                                       'min_distance': nearest, 'max_distance': farthest})

    if len(measure) <= BRUTE_FORCE_ATOMS:
        rows, columns = np.triu_indices(len(measure), 1)
        products = measure.weights[rows] * measure.weights[columns]
        brute = 2.0 * math.fsum(products * kernel_values(kernel, pdist(atoms)))
        context.checks.add('brute_force_agreement', _relative(result.energy, brute) <= 1e-12,
                           f'blocked {result.energy!r} vs pairwise {brute!r}')
    else:
        context.checks.skip('brute_force_agreement',
                            f'{len(measure)} atoms exceed the pairwise comparison limit {BRUTE_FORCE_ATOMS}')

    moved = measure_energy(uniform_measure(_rigid_motion(atoms, context.seed)))
    context.checks.add('rigid_motion_invariance', _relative(moved, result.energy) <= 1e-10,
                       f'energy after rotation and translation {moved!r}')

    lambdas = params['scaling_lambdas']
    if kernel.kind == RIESZ:
        worst = max(
            _relative(measure_energy(scale_measure(measure, lam)), lam ** (-kernel.exponent) * result.energy)
            for lam in lambdas
        )
        context.checks.add('riesz_homogeneity', worst <= 1e-12,
                           f'worst relative error {worst:.3e} over lambda in {lambdas}')
    else:
        context.checks.skip('riesz_homogeneity', f'{kernel.kind} kernel is not homogeneous')

    if kernel.kind != LOG_PLUS_POW:
        for name in ('log_scaling_monotone', 'log_scaling_split', 'radius_third_lower_bound'):
            context.checks.skip(name, f'applies to the {LOG_PLUS_POW} kernel only')
        return
    growing = [lam for lam in lambdas if lam >= 1]
    if growing:
        monotone = all(measure_energy(scale_measure(measure, lam)) <= result.energy * (1 + 1e-12)
                       for lam in growing)
        context.checks.add('log_scaling_monotone', monotone, f'lambda in {growing}')
    else:
        context.checks.skip('log_scaling_monotone', f'no lambda >= 1 in {lambdas}')
    shrinking = [lam for lam in lambdas if lam < 1 and farthest <= 1.0 / lam]
    if shrinking:
        split = all(
            measure_energy(scale_measure(measure, lam)) <= log_scaling_bound(measure, kernel.k, lam) * (1 + 1e-12)
            for lam in shrinking
        )
        context.checks.add('log_scaling_split', split, f'lambda in {shrinking}')
    else:
        context.checks.skip('log_scaling_split', f'no lambda < 1 in {lambdas} keeps the diameter within 1/lambda')
    radius = float(np.linalg.norm(atoms, axis=1).max())
    if radius <= 1.0 / 3.0 + 1e-15:
        floor = math.log(1.5) ** kernel.k
        smallest = float(kernel_values(kernel, np.array([farthest]))[0])
        mass = 1.0 - float(measure.weights @ measure.weights)
        context.checks.add('radius_third_lower_bound',
                           smallest >= floor * (1 - 1e-12) and result.energy >= floor * mass * (1 - 1e-12),
                           f'min kernel value {smallest!r}, floor log(3/2)^{kernel.k} = {floor!r}')
    else:
        context.checks.skip('radius_third_lower_bound', f'atoms reach radius {radius!r} beyond 1/3')


def capacity_task(params: Dict, context: RunContext) -> None:
    kernel = _kernel(params)
    atoms = _atoms(params, context)
    measure, result = minimize_energy(atoms, kernel, params['max_iters'], params['tol'])
    uniform = energy(uniform_measure(atoms), kernel, settings.MULTIPOINT_ENERGY_BLOCK, context.threads)
    context.record(write_measure_csv(measure, context.path('weights.csv')))
    context.write_json('capacity.json', {**result.to_dict(), 'uniform_energy': uniform.energy,
                                         'uniform_capacity': uniform.capacity})

    trace = result.trace
    objectives = np.array(trace.objectives)
    rises = np.diff(objectives) - 1e-12 * np.maximum(1.0, np.abs(objectives[:-1]))
    context.checks.add('objective_nonincreasing', not (rises > 0).any(),
                       f'{trace.iterations} iterations from {objectives[0]!r} to {objectives[-1]!r}')
    weights = measure.weights
    context.checks.add('simplex_weights', weights.min() >= 0 and abs(weights.sum() - 1.0) <= 1e-12,
                       f'min weight {weights.min()!r}, total {weights.sum()!r}')
    context.checks.add('no_worse_than_uniform', result.energy <= uniform.energy + params['tol'],
                       f'optimized {result.energy!r} vs uniform {uniform.energy!r}')
    context.checks.add('duality_gap', trace.converged,
                       f"final gap {trace.final_gap:.3e} against tol {params['tol']:.1e}")


# ----- multipoint -----

def _multipoint_config(params: Dict, context: RunContext, epsilon: float) -> MultipointConfig:
    fbm = FbmParams(hurst=params['hurst'], dim=params['dim'])
    atoms = make_test_set(params['shape'], params['scale'], params['n_atoms'], context.seed, params['dim'])
    return MultipointConfig(params=fbm, k=params['k'], epsilon=epsilon, measure=uniform_measure(atoms),
                            n_paths=params['n_paths'], seed=context.seed, grid_step=params.get('grid_step'))


def _report_checks(report: MomentReport, context: RunContext, suffix: str = '') -> None:
    checks = context.checks
    checks.add(f'pz_consistency{suffix}', pz_consistency(report),
               f'pz {report.pz_bound:.6g} vs P(I > 0) {report.hit_freq:.6g} +- {report.hit_stderr:.2g}')
    total = report.F_part + report.S_part
    checks.add(f'decomposition{suffix}',
               abs(total - report.mean_I_sq) <= DECOMPOSITION_TOLERANCE * max(report.mean_I_sq, 1e-300),
               f'F + S = {total!r}, E(I^2) = {report.mean_I_sq!r}')
    checks.add(f'jensen{suffix}', report.mean_I_sq >= report.mean_I ** 2 * (1 - 1e-9),
               f'E(I^2) {report.mean_I_sq:.6g} vs E(I)^2 {report.mean_I ** 2:.6g}')
    checks.add(f'pz_positive{suffix}', report.pz_bound > 0, f'pz {report.pz_bound:.6g}')


REPORT_CHECKS = ('pz_consistency', 'decomposition', 'jensen', 'pz_positive')


def _skip_report_checks(context: RunContext, suffixes: List[str], reason: str) -> None:
    for suffix in suffixes:
        for name in REPORT_CHECKS:
            context.checks.skip(f'{name}{suffix}', reason)


def _moments_mode(params: Dict, context: RunContext) -> None:
    config = _multipoint_config(params, context, params['epsilon'])
    try:
        report = mc_moments(config, context.threads)
    except InvariantViolationError as e:
        context.checks.add('moment_report', False, str(e))
        _skip_report_checks(context, [''], 'no moment report')
        return
    context.record(write_reports_csv([report], context.path('moments.csv')))
    context.record(write_reports_json([report], context.path('moments.json')))
    _report_checks(report, context)


def _sweep_mode(params: Dict, context: RunContext) -> None:
    eps_list = params['eps_list']
    config = _multipoint_config(params, context, eps_list[0])
    try:
        reports = epsilon_sweep(config, eps_list, context.threads)
    except InvariantViolationError as e:
        context.checks.add('moment_report', False, str(e))
        _skip_report_checks(context, [f'[eps={eps:g}]' for eps in eps_list], 'sweep aborted')
        context.checks.skip('first_moment_stable', 'sweep aborted')
        return
    context.record(write_reports_csv(reports, context.path('sweep.csv')))
    context.record(write_reports_json(reports, context.path('sweep.json')))
    for report in reports:
        _report_checks(report, context, f'[eps={report.epsilon:g}]')
    ratio = first_moment_ratio(reports)
    context.checks.add('first_moment_stable', first_moment_stable(reports),
                       f'max/min of E(I) across the sweep {ratio:.4g}')


def _detect_mode(params: Dict, context: RunContext) -> None:
    config = _multipoint_config(params, context, params['epsilon'])
    grid = config.grid()
    rows = []
    witnesses = []
    occupied = True
    best = None
    for index in range(config.n_paths):
        path = simulate_path(config.params, grid, path_seed(context.seed, index))
        found = detect_near_ktuple(path, config)
        hit = found.min_spread <= config.epsilon
        rows.append([index, found.min_spread, int(hit), *found.times, *found.center])
        witnesses.append({'path': index, **found.to_dict()})
        if hit:
            single = replace(config, measure=uniform_measure(found.center[None, :]))
            occupied &= compute_I_eps(path, single) > 0
        if best is None or found.min_spread < best.min_spread:
            best = found

    hits = sum(row[2] for row in rows)
    header = (['path', 'min_spread', 'hit'] + [f't{j}' for j in range(config.k)]
              + [f'z{axis}' for axis in range(config.params.dim)])
    context.write_csv('witnesses.csv', header, rows)
    context.write_json('witnesses.json', {'config': config.to_dict(), 'hit_freq': hits / config.n_paths,
                                          'witnesses': witnesses})
    context.record(write_witness_json(best, context.path('best_witness.json')))
    context.checks.add('witness_occupation', occupied,
                       f'{hits} of {config.n_paths} paths have a k-tuple within eps; each centre is occupied')

    fine_config = replace(config, grid_step=config.grid_step / 2.0)
    fine_grid = TimeGrid(start=0.0, step=fine_config.grid_step, count=2 * (grid.count - 1) + 1)
    monotone = True
    for index in range(min(config.n_paths, REFINEMENT_PATHS)):
        fine = simulate_path(config.params, fine_grid, path_seed(context.seed, index))
        fine_spread = detect_near_ktuple(fine, fine_config).min_spread
        coarse_spread = detect_near_ktuple(fine.every(2), config).min_spread
        monotone &= fine_spread <= coarse_spread + 1e-12
    context.checks.add('refinement_monotone', monotone,
                       f'halving the step never increased the spread on {min(config.n_paths, REFINEMENT_PATHS)} paths')


MULTIPOINT_MODES = {
    'moments': _moments_mode,
    'sweep': _sweep_mode,
    'detect': _detect_mode,
}


def multipoint(params: Dict, context: RunContext) -> None:
    MULTIPOINT_MODES[params['mode']](params, context)


# ----- verify_integrals -----

def verify_integrals(params: Dict, context: RunContext) -> None:
    tol = params['tol']
    rows = verification_table(params['xs'], params['hds'], tol)
    context.record(write_verification_csv(rows, context.path('integrals.csv')))
    worst = max(rows, key=lambda row: row.rel_err)
    context.checks.add('closed_form_agreement', worst.rel_err < 1e-6,
                       f'worst relative error {worst.rel_err:.3e} at x={worst.x}, hd={worst.hd}')

    def gap_log(s, s_hat):
        return 1.0 / np.abs(s_hat - s)

    shifted = [quad_region(gap_log, GapBand.above(0.25), 1e-8, a=a).value for a in TRANSLATIONS]
    spread = max(shifted) - min(shifted)
    context.checks.add('translation_invariance', spread <= 1e-7,
                       f'2-D values over a in {list(TRANSLATIONS)} differ by {spread:.3e}')

    envelope = {hd: envelope_ratio(envelope_point(hd), hd) for hd in params['hds']}
    context.checks.add('power_envelope', all(1 / 1.1 <= ratio <= 1.1 for ratio in envelope.values()),
                       ', '.join(f'hd={hd}: {ratio:.4f}' for hd, ratio in envelope.items()))

    bound_rows = []
    m_ok = l_ok = True
    for hurst in params['hursts']:
        for r in params['radii']:
            m_value = m_integral(hurst, r, tol).value
            l_value = l_part(hurst, 2, r, tol).value
            m_ok &= m_value <= m_bound(hurst, r) + 1e-9
            l_ok &= math.isfinite(l_value) and l_value <= l_bound(hurst, 2)
            bound_rows.append([hurst, r, m_value, m_bound(hurst, r), l_value, l_bound(hurst, 2)])
    context.write_csv('bounds.csv', ['hurst', 'r', 'M', 'M_bound', 'L', 'L_bound'], bound_rows)
    context.checks.add('m_bound', m_ok, f"{len(bound_rows)} (H, r) pairs")
    context.checks.add('l_bound', l_ok, f"{len(bound_rows)} (H, r) pairs with k = 2")

    hurst, r = max(params['hursts']), max(params['radii'])
    radial = l_part(hurst, 2, r, 1e-9).value
    planar = l_part(hurst, 2, r, 1e-5, radial=False)
    context.checks.add('l_part_2d_agreement', planar.converged and abs(planar.value - radial) <= 1e-4,
                       f'H={hurst}, r={r}: 2-D {planar.value!r} vs reduced {radial!r}')


# ----- verify_detcov -----

def _detcov_for_hurst(fbm: FbmParams, params: Dict, context: RunContext, rows: List, structured_rows: List) -> None:
    label = f'[H={fbm.hurst:g}]'
    scalar = FbmParams(hurst=fbm.hurst)
    worst_identity = 0.0
    worst_upper = 0.0
    index = 0
    for size in range(params['min_size'], params['max_size'] + 1):
        worst_size = 0.0
        for _ in range(params['n_tuples']):
            tuple_ = random_tuple(size, 0.1, 10.0, stream(derive_seed(context.seed, index)), min_gap=0.05)
            index += 1
            product = detcov_product(scalar, tuple_)
            worst_size = max(worst_size, _relative(product, dense_det(build_cov(scalar, tuple_))))
            worst_upper = max(worst_upper, product / detcov_upper_bound(scalar, tuple_))
        rows.append([fbm.hurst, size, params['n_tuples'], worst_size])
        worst_identity = max(worst_identity, worst_size)
    context.checks.add(f'determinant_identity{label}', worst_identity < 1e-9,
                       f'worst relative error {worst_identity:.3e}')
    context.checks.add(f'detcov_upper_bound{label}', worst_upper <= 1 + 1e-9,
                       f'largest det / bound {worst_upper!r}')

    gershgorin_ok = dominates = True
    samples = []
    for i in range(params['n_structured']):
        k = 1 + i % params['max_k']
        tuple_ = interval_structured_tuple(k, stream(derive_seed(context.seed, i), component=1))
        matrix = normalize_increments(scalar, tuple_)
        bound = gershgorin_max(matrix)
        gershgorin_ok &= bound <= 2 * k * (1 + 1e-12)
        dominates &= bound >= power_iteration_max(matrix) - 1e-9
        samples.append((k, tuple_, dense_det(matrix), chain_ratios(scalar, tuple_)))
    context.checks.add(f'gershgorin_bound{label}', gershgorin_ok, 'max row sum at most 2k')
    context.checks.add(f'gershgorin_dominates{label}', dominates, 'row-sum bound above the power-iteration eigenvalue')

    min_ratio = min(min(ratios) for _, _, _, ratios in samples if ratios)
    chain_ok = all(det >= chain_det_lower_bound(scalar, tuple_, min_ratio) * (1 - 1e-6)
                   for _, tuple_, det, _ in samples)
    context.checks.add(f'chain_det_lower_bound{label}', chain_ok, f'empirical LND constant {min_ratio:.6g}')

    interval_ok = power_ok = True
    for k, tuple_, det, _ in samples:
        starts = TimeTuple(tuple_.times[0::2])
        joint = dense_det(joint_cov(fbm, starts))
        interval_ok &= joint <= interval_det_bound(fbm, k) * (1 + 1e-12)
        power_ok &= _relative(joint, detcov_product(scalar, starts) ** fbm.dim) <= 1e-9
        structured_rows.append([fbm.hurst, k, det, joint, interval_det_bound(fbm, k)])
    context.checks.add(f'interval_det_bound{label}', interval_ok, f'd = {fbm.dim}')
    context.checks.add(f'joint_det_power{label}', power_ok, f'det of the {fbm.dim}-dimensional covariance')


def verify_detcov(params: Dict, context: RunContext) -> None:
    rows = []
    structured_rows = []
    for hurst in params['hursts']:
        _detcov_for_hurst(FbmParams(hurst=hurst, dim=params['dim']), params, context, rows, structured_rows)
    context.write_csv('detcov.csv', ['hurst', 'size', 'n_tuples', 'worst_rel_err'], rows)
    context.write_csv('structured.csv', ['hurst', 'k', 'normalized_det', 'joint_det', 'interval_bound'],
                      structured_rows)


TASKS: Dict[str, Callable[[Dict, RunContext], None]] = {
    'simulate': simulate,
    'lnd_scan': lnd_scan_task,
    'energy': energy_task,
    'capacity': capacity_task,
    'multipoint': multipoint,
    'verify_integrals': verify_integrals,
    'verify_detcov': verify_detcov,
}
