from experiments.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = 'Draw exact fBm sample paths and write them as CSV and binary dumps'
    command_name = 'simulate'
    extra_options = (
        ('--hurst', 'hurst', float, 'Hurst index in (0, 1)'),
        ('--dim', 'dim', int, 'Spatial dimension'),
        ('--n-paths', 'n_paths', int, 'Number of paths to dump'),
        ('--method', 'method', str, 'circulant or cholesky'),
        ('--covariance-paths', 'covariance_paths', int, 'Paths per Hurst index for the covariance check, 0 skips it'),
        ('--covariance-hursts', 'covariance_hursts', str, 'Comma-separated Hurst indices for the covariance check'),
    )
