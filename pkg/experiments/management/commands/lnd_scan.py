from experiments.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = 'Scan random configurations for the local nondeterminism ratio'
    command_name = 'lnd_scan'
    extra_options = (
        ('--hurst', 'hurst', float, 'Hurst index in (0, 1)'),
        ('--n-configs', 'n_configs', int, 'Number of random configurations'),
        ('--max-cond', 'max_cond', int, 'Largest number of conditioning times'),
    )
