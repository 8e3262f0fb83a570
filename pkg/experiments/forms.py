import json
import math
from pathlib import Path

from django import forms
from django.conf import settings
from django.core.exceptions import ValidationError

from capacity.kernels import KINDS, LOG_PLUS_POW, RIESZ
from capacity.test_sets import DISK, SHAPES
from fbm.simulation import CIRCULANT, METHODS

SCHEMA_VERSION = 1
MAX_SEED = (1 << 63) - 1
# Fields every form carries that configure the run rather than the experiment
RUN_FIELDS = ('schema_version', 'seed', 'threads', 'output_dir')


class ConfigFileError(Exception):
    """The --config file is unreadable or not a JSON object"""


def load_config_file(path) -> dict:
    """Read a JSON run configuration; the schema version is validated by the form"""
    try:
        payload = json.loads(Path(path).read_text(encoding='utf-8'))
    except (OSError, ValueError) as e:
        raise ConfigFileError(f"Cannot read config file {path}: {e}")
    if not isinstance(payload, dict):
        raise ConfigFileError(f"Config file {path} must hold a JSON object")
    return payload


class FloatListField(forms.Field):
    """A list of reals given as a JSON list or a comma-separated string"""

    def to_python(self, value):
        if value in self.empty_values:
            return []
        if isinstance(value, str):
            value = [item for item in value.split(',') if item.strip()]
        if not isinstance(value, (list, tuple)):
            raise ValidationError('Enter a list of numbers.', code='invalid')
        try:
            return [float(item) for item in value]
        except (TypeError, ValueError):
            raise ValidationError('Enter a list of numbers.', code='invalid')


def _choices(values):
    return [(value, value) for value in values]


class ExperimentForm(forms.Form):
    """Fields every run shares: master seed, thread count, output directory and schema version"""

    schema_version = forms.IntegerField(required=False, initial=SCHEMA_VERSION)
    seed = forms.IntegerField(required=False, min_value=0, max_value=MAX_SEED, initial=0,
                              help_text='Master seed; every random stream derives from it.')
    threads = forms.IntegerField(required=False, min_value=1,
                                 help_text='Worker threads; never changes the results.')
    output_dir = forms.CharField(required=False, max_length=500)

    def __init__(self, *args, unknown_fields=(), **kwargs):
        super().__init__(*args, **kwargs)
        self.unknown_fields = sorted(unknown_fields)

    def clean(self):
        cleaned = super().clean()
        if self.unknown_fields:
            raise ValidationError(f"Unknown config fields: {', '.join(self.unknown_fields)}.")
        return cleaned

    def clean_schema_version(self):
        version = self.cleaned_data.get('schema_version')
        if version is None:
            return SCHEMA_VERSION
        if version != SCHEMA_VERSION:
            raise ValidationError(f'Unsupported schema_version {version}; expected {SCHEMA_VERSION}.')
        return version

    def clean_seed(self):
        seed = self.cleaned_data.get('seed')
        return 0 if seed is None else seed

    def clean_threads(self):
        threads = self.cleaned_data.get('threads')
        return settings.MULTIPOINT_THREADS if threads is None else threads

    def clean_hurst(self):
        hurst = self.cleaned_data.get('hurst')
        if hurst is not None and not (0.0 < hurst < 1.0):
            raise ValidationError('Hurst index must lie strictly between 0 and 1.')
        return hurst


class SimulateForm(ExperimentForm):
    hurst = forms.FloatField(initial=0.5)
    dim = forms.IntegerField(min_value=1, initial=1)
    start = forms.FloatField(min_value=0.0, initial=0.0)
    step = forms.FloatField(initial=1.0 / 64)
    count = forms.IntegerField(min_value=1, initial=129)
    method = forms.ChoiceField(choices=_choices(METHODS), initial=CIRCULANT)
    n_paths = forms.IntegerField(min_value=1, max_value=1000, initial=1)
    covariance_paths = forms.IntegerField(min_value=0, initial=50000,
                                          help_text='Paths per Hurst index on an 8-point grid for the '
                                                    'covariance check; 0 skips it.')
    covariance_hursts = FloatListField(required=False)

    def clean_step(self):
        step = self.cleaned_data.get('step')
        if step is not None and not step > 0:
            raise ValidationError('Grid step must be positive.')
        return step

    def clean_covariance_paths(self):
        paths = self.cleaned_data.get('covariance_paths')
        if paths and paths < 100:
            raise ValidationError('Use at least 100 paths for the covariance check, or 0 to skip it.')
        return paths

    def clean_covariance_hursts(self):
        hursts = self.cleaned_data.get('covariance_hursts') or [0.3, 0.5, 0.75]
        if any(not (0.0 < h < 1.0) for h in hursts):
            raise ValidationError('Every Hurst index must lie strictly between 0 and 1.')
        if len(set(hursts)) != len(hursts):
            raise ValidationError('Hurst indices must be distinct.')
        return hursts


class LndScanForm(ExperimentForm):
    hurst = forms.FloatField(initial=0.5)
    n_configs = forms.IntegerField(min_value=1, initial=10000)
    max_cond = forms.IntegerField(min_value=1, max_value=64, initial=6)
    time_lo = forms.FloatField(initial=0.1)
    time_hi = forms.FloatField(initial=10.0)
    markov_configs = forms.IntegerField(min_value=0, initial=1000,
                                        help_text='Single past-time configurations checked at H = 1/2.')

    def clean(self):
        cleaned = super().clean()
        lo, hi = cleaned.get('time_lo'), cleaned.get('time_hi')
        if lo is not None and hi is not None and not (0.0 < lo < hi):
            raise ValidationError('The time range must satisfy 0 < time_lo < time_hi.')
        return cleaned


class MeasureForm(ExperimentForm):
    """Test set and kernel shared by the energy and capacity commands"""

    shape = forms.ChoiceField(choices=_choices(SHAPES), initial=DISK)
    scale = forms.FloatField(initial=1.0 / 3.0)
    n_atoms = forms.IntegerField(min_value=1, max_value=20000, initial=400)
    dim = forms.IntegerField(min_value=1, initial=2)
    kernel = forms.ChoiceField(choices=_choices(KINDS), initial=LOG_PLUS_POW)
    k = forms.IntegerField(min_value=1, initial=2)
    hurst = forms.FloatField(required=False,
                             help_text='Needed by the riesz kernel, whose exponent is k(d - 1/H).')

    def clean_scale(self):
        scale = self.cleaned_data.get('scale')
        if scale is not None and not scale > 0:
            raise ValidationError('Scale must be positive.')
        return scale

    def clean(self):
        cleaned = super().clean()
        if cleaned.get('kernel') == RIESZ:
            hurst, dim = cleaned.get('hurst'), cleaned.get('dim')
            if hurst is None:
                self.add_error('hurst', 'The riesz kernel needs a Hurst index.')
            elif dim is not None and not hurst * dim > 1:
                self.add_error('hurst', 'The riesz kernel needs Hd > 1.')
        shape, n_atoms = cleaned.get('shape'), cleaned.get('n_atoms')
        if shape == 'grid_square' and n_atoms and math.isqrt(n_atoms) ** 2 != n_atoms:
            self.add_error('n_atoms', 'grid_square needs a perfect square number of atoms.')
        if shape == 'grid_square' and (cleaned.get('dim') or 0) < 2:
            self.add_error('dim', 'grid_square needs dimension at least 2.')
        return cleaned


class EnergyForm(MeasureForm):
    n_atoms = forms.IntegerField(min_value=2, max_value=20000, initial=400)
    scaling_lambdas = FloatListField(required=False, initial=[0.1, 0.5, 2.0, 10.0])

    def clean_scaling_lambdas(self):
        lambdas = self.cleaned_data.get('scaling_lambdas') or [0.1, 0.5, 2.0, 10.0]
        if any(not lam > 0 for lam in lambdas):
            raise ValidationError('Scaling factors must be positive.')
        return lambdas


class CapacityForm(MeasureForm):
    n_atoms = forms.IntegerField(min_value=2, max_value=5000, initial=400)
    max_iters = forms.IntegerField(min_value=1, initial=2000)
    tol = forms.FloatField(initial=1e-9)

    def clean_tol(self):
        tol = self.cleaned_data.get('tol')
        if tol is not None and not tol > 0:
            raise ValidationError('Tolerance must be positive.')
        return tol


MODES = ('moments', 'sweep', 'detect')


class MultipointForm(ExperimentForm):
    mode = forms.ChoiceField(choices=_choices(MODES), initial='sweep')
    hurst = forms.FloatField(initial=0.5)
    dim = forms.IntegerField(min_value=1, initial=2)
    k = forms.IntegerField(min_value=2, initial=2)
    epsilon = forms.FloatField(initial=0.2)
    eps_list = FloatListField(required=False, initial=[0.2, 0.1, 0.05])
    grid_step = forms.FloatField(required=False)
    shape = forms.ChoiceField(choices=_choices(SHAPES), initial=DISK)
    scale = forms.FloatField(initial=1.0 / 3.0)
    n_atoms = forms.IntegerField(min_value=1, max_value=5000, initial=64)
    n_paths = forms.IntegerField(min_value=1, initial=2000)

    def clean_epsilon(self):
        epsilon = self.cleaned_data.get('epsilon')
        if epsilon is not None and not (0.0 < epsilon < 1.0):
            raise ValidationError('epsilon must lie strictly between 0 and 1.')
        return epsilon

    def clean_eps_list(self):
        eps_list = self.cleaned_data.get('eps_list') or [0.2, 0.1, 0.05]
        if any(not (0.0 < eps < 1.0) for eps in eps_list):
            raise ValidationError('Every epsilon must lie strictly between 0 and 1.')
        if any(later >= earlier for earlier, later in zip(eps_list, eps_list[1:])):
            raise ValidationError('eps_list must be strictly decreasing.')
        return eps_list

    def clean_grid_step(self):
        step = self.cleaned_data.get('grid_step')
        if step is not None and not step > 0:
            raise ValidationError('Grid step must be positive.')
        return step

    def clean(self):
        cleaned = super().clean()
        mode, n_paths = cleaned.get('mode'), cleaned.get('n_paths')
        if mode in ('moments', 'sweep') and n_paths is not None and n_paths < 20:
            self.add_error('n_paths', 'Moment estimates need at least 20 paths (one per batch).')
        hurst, epsilon, step = cleaned.get('hurst'), cleaned.get('epsilon'), cleaned.get('grid_step')
        if hurst and epsilon and step and step > epsilon ** (1.0 / hurst) * (1.0 + 1e-12):
            self.add_error('grid_step', 'grid_step must not exceed epsilon^(1/H).')
        if cleaned.get('shape') == 'grid_square':
            n_atoms = cleaned.get('n_atoms')
            if n_atoms and math.isqrt(n_atoms) ** 2 != n_atoms:
                self.add_error('n_atoms', 'grid_square needs a perfect square number of atoms.')
            if (cleaned.get('dim') or 0) < 2:
                self.add_error('dim', 'grid_square needs dimension at least 2.')
        return cleaned


class VerifyIntegralsForm(ExperimentForm):
    xs = FloatListField(required=False)
    hds = FloatListField(required=False)
    tol = forms.FloatField(initial=1e-10)
    radii = FloatListField(required=False)
    hursts = FloatListField(required=False)

    def clean_xs(self):
        xs = self.cleaned_data.get('xs') or [0.01, 0.05, 0.1, 0.25, 0.5, 0.9]
        if any(not (0.0 < x < 1.0) for x in xs):
            raise ValidationError('Every x must lie strictly between 0 and 1.')
        return xs

    def clean_hds(self):
        hds = self.cleaned_data.get('hds') or [1.2, 1.5, 1.8, 2.5, 3.0]
        if any(not hd > 1 for hd in hds):
            raise ValidationError('Every hd must exceed 1.')
        return hds

    def clean_radii(self):
        radii = self.cleaned_data.get('radii') or [0.01, 0.1, 0.5]
        if any(not (0.0 < r < 1.0) for r in radii):
            raise ValidationError('Every radius must lie strictly between 0 and 1.')
        return radii

    def clean_hursts(self):
        hursts = self.cleaned_data.get('hursts') or [0.4, 0.5, 0.75]
        if any(not (0.0 < h < 1.0) for h in hursts):
            raise ValidationError('Every Hurst index must lie strictly between 0 and 1.')
        return hursts

    def clean_tol(self):
        tol = self.cleaned_data.get('tol')
        if tol is not None and not tol > 0:
            raise ValidationError('Tolerance must be positive.')
        return tol


class VerifyDetcovForm(ExperimentForm):
    hursts = FloatListField(required=False)
    dim = forms.IntegerField(min_value=1, initial=2)
    min_size = forms.IntegerField(min_value=1, initial=2)
    max_size = forms.IntegerField(min_value=1, max_value=32, initial=8)
    n_tuples = forms.IntegerField(min_value=1, initial=100)
    max_k = forms.IntegerField(min_value=1, max_value=8, initial=4)
    n_structured = forms.IntegerField(min_value=1, initial=1000)

    def clean_hursts(self):
        hursts = self.cleaned_data.get('hursts') or [0.3, 0.5, 0.75]
        if any(not (0.0 < h < 1.0) for h in hursts):
            raise ValidationError('Every Hurst index must lie strictly between 0 and 1.')
        return hursts

    def clean(self):
        cleaned = super().clean()
        lo, hi = cleaned.get('min_size'), cleaned.get('max_size')
        if lo is not None and hi is not None and lo > hi:
            self.add_error('max_size', 'max_size must be at least min_size.')
        return cleaned


FORMS = {
    'simulate': SimulateForm,
    'lnd_scan': LndScanForm,
    'energy': EnergyForm,
    'capacity': CapacityForm,
    'multipoint': MultipointForm,
    'verify_integrals': VerifyIntegralsForm,
    'verify_detcov': VerifyDetcovForm,
}


def bind_form(command: str, file_payload: dict = None, overrides: dict = None) -> ExperimentForm:
    """
    Form for ``command`` bound to the config file values, with CLI flag
    overrides applied on top and field initials filling the rest.
    """
    form_class = FORMS[command]
    data = {
        name: field.initial for name, field in form_class.base_fields.items()
        if field.initial is not None
    }
    data.update(file_payload or {})
    data.update({name: value for name, value in (overrides or {}).items() if value is not None})
    unknown = set(file_payload or {}) - set(form_class.base_fields) - {'command'}
    return form_class(data=data, unknown_fields=unknown)


def task_parameters(cleaned: dict) -> dict:
    """Cleaned values without the run-level fields"""
    return {name: value for name, value in cleaned.items() if name not in RUN_FIELDS}


def format_errors(form: forms.Form) -> str:
    lines = []
    for field, errors in form.errors.items():
        label = 'config' if field == '__all__' else field
        lines.extend(f'{label}: {error}' for error in errors)
    return '\n'.join(lines)
