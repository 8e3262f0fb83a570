from experiments.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = 'Compare the gap-integral closed forms with quadrature and check the L and M bounds'
    command_name = 'verify_integrals'
    extra_options = (
        ('--tol', 'tol', float, 'Absolute quadrature tolerance'),
    )
