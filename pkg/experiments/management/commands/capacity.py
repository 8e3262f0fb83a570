from experiments.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = 'Minimize the energy over weights on a test set (Frank-Wolfe) and report the capacity'
    command_name = 'capacity'
    extra_options = (
        ('--shape', 'shape', str, 'disk, segment, grid_square or two_points'),
        ('--n-atoms', 'n_atoms', int, 'Number of atoms'),
        ('--kernel', 'kernel', str, 'log_plus_pow or riesz'),
        ('--k', 'k', int, 'Kernel multiplicity'),
        ('--hurst', 'hurst', float, 'Hurst index (riesz kernel only)'),
        ('--max-iters', 'max_iters', int, 'Frank-Wolfe iteration cap'),
    )
