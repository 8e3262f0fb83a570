from experiments.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = 'Monte Carlo moments of the occupation functional, epsilon sweeps and near k-tuple detection'
    command_name = 'multipoint'
    extra_options = (
        ('--mode', 'mode', str, 'moments, sweep or detect'),
        ('--hurst', 'hurst', float, 'Hurst index in (0, 1)'),
        ('--dim', 'dim', int, 'Spatial dimension'),
        ('--k', 'k', int, 'Multiplicity of the points sought'),
        ('--epsilon', 'epsilon', float, 'Ball radius for moments and detect'),
        ('--n-paths', 'n_paths', int, 'Paths per estimate'),
    )
