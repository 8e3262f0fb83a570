from experiments.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = 'Check determinant identities and eigenvalue bounds for fBm covariance matrices'
    command_name = 'verify_detcov'
    extra_options = (
        ('--dim', 'dim', int, 'Spatial dimension for the joint covariance'),
        ('--n-tuples', 'n_tuples', int, 'Random tuples per size and Hurst index'),
        ('--n-structured', 'n_structured', int, 'Interval-structured tuples per Hurst index'),
    )
