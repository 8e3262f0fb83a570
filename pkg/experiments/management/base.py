from django.core.management.base import BaseCommand, CommandError

from core.exceptions import MultipointError
from experiments.forms import ConfigFileError, bind_form, format_errors, load_config_file
from experiments.runner import run


class ExperimentCommand(BaseCommand):
    """
    Shared driver for the experiment commands: read --config, apply flag
    overrides, validate through the command's form and hand the cleaned
    values to the runner. Exits non-zero when any check fails.
    """
    command_name = None
    # (flag, form field, type, help) for command-specific overrides
    extra_options = ()

    def add_arguments(self, parser):
        parser.add_argument('--config', help='JSON run configuration (schema_version 1)')
        parser.add_argument('--seed', type=int, help='Master seed')
        parser.add_argument('--threads', type=int, help='Worker threads; results do not depend on it')
        parser.add_argument('--out', dest='output_dir', help='Output directory')
        for flag, dest, kind, help_text in self.extra_options:
            parser.add_argument(flag, dest=dest, type=kind, help=help_text)

    def overrides(self, options) -> dict:
        names = ['seed', 'threads', 'output_dir'] + [dest for _, dest, _, _ in self.extra_options]
        return {name: options.get(name) for name in names}

    def handle(self, *args, **options):
        try:
            payload = load_config_file(options['config']) if options.get('config') else {}
        except ConfigFileError as e:
            raise CommandError(str(e))

        form = bind_form(self.command_name, payload, self.overrides(options))
        if not form.is_valid():
            raise CommandError(f'Invalid configuration for {self.command_name}:\n{format_errors(form)}')

        try:
            manifest = run(self.command_name, form.cleaned_data)
        except MultipointError as e:
            raise CommandError(f'{self.command_name} failed: {e}')

        markers = {'pass': self.style.SUCCESS('pass'), 'fail': self.style.ERROR('FAIL'),
                   'not_run': self.style.WARNING('skip')}
        for check in manifest.checks:
            marker = markers[check['status']]
            self.stdout.write(f"  {marker} {check['name']} {check['detail']}")
        if not manifest.passed:
            raise CommandError(f"{len(manifest.failures)} check(s) failed: {', '.join(manifest.failures)}")
        self.stdout.write(
            self.style.SUCCESS(f'{self.command_name}: {len(manifest.checks)} checks passed, '
                               f'artifacts in {manifest.output_dir}')
        )
