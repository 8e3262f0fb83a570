from experiments.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = 'Energy of the uniform measure on a test set, with scaling checks'
    command_name = 'energy'
    extra_options = (
        ('--shape', 'shape', str, 'disk, segment, grid_square or two_points'),
        ('--n-atoms', 'n_atoms', int, 'Number of atoms'),
        ('--kernel', 'kernel', str, 'log_plus_pow or riesz'),
        ('--k', 'k', int, 'Kernel multiplicity'),
        ('--hurst', 'hurst', float, 'Hurst index (riesz kernel only)'),
    )
