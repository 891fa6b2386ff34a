# -*- coding: utf-8 -*-
"""
Run configuration: a flat, line oriented `section.key = value` format.

Physics parameters have no defaults; numerical knobs do. Unknown keys,
duplicated keys and malformed values are errors.
"""
from __future__ import unicode_literals
from __future__ import print_function

import hashlib
import io
import logging
import math
from collections import OrderedDict

from decochaos.__version__ import __version__
from decochaos.constants import (
    DEFAULT_X_MIN, DEFAULT_X_MAX, DEFAULT_X_COUNT,
    DEFAULT_P_MIN, DEFAULT_P_MAX, DEFAULT_P_COUNT,
    STEPS_PER_PERIOD, OUTPUT_EVERY, T_FINAL, ENSEMBLE_COUNT,
    DIVERGENCE_THRESHOLD, DIVERGENCE_DEBOUNCE, CHI_EPSILON,
    RENORMALIZATION_INTERVAL, LYAPUNOV_HORIZON, LYAPUNOV_TRAJECTORIES,
    KERNEL_PRECOMPUTED, KERNEL_MODES, BOUNDARY_MARGIN, BOUNDARY_TOLERANCE,
    MAX_CELLS, SWEEP_LAMBDA_MIN, SWEEP_PROBE_HORIZON,
    SWEEP_PROBE_TRAJECTORIES, SWEEP_MAX_ATTEMPTS, MIN_ENSEMBLE_COUNT,
    STEP_DIVISOR_TOLERANCE, TRACE
)
from decochaos.errors import ConfigurationError, BaseError
from decochaos.grid import build_axis
from decochaos.potential import DrivenDoubleWell, HarmonicOracle
from decochaos.evolve.settings import (
    EvolverSettings, GaussianInitialState, steps_in
)
from decochaos.evolve.results import RunPlan

logger = logging.getLogger('decochaos.config')

REQUIRED = object()
KIND_SPECIFIC = object()
OPTIONAL = None

KIND_DOUBLE_WELL = 'double-well'
KIND_HARMONIC = 'harmonic'
KIND_FREE = 'free'
KIND_KEYS = OrderedDict((
    (KIND_DOUBLE_WELL, ('potential.B', 'potential.A', 'potential.drive')),
    (KIND_HARMONIC, ('potential.k',)),
    (KIND_FREE, ()),
))


def _parse_float(text):
    value = float(text)
    if not math.isfinite(value):
        raise ValueError("not a finite number")
    return value


def _parse_int(text):
    return int(text, 10)


def _parse_bool(text):
    lowered = text.lower()
    if lowered in ('true', 'yes', 'on', '1'):
        return True
    if lowered in ('false', 'no', 'off', '0'):
        return False
    raise ValueError("not a boolean")


def _parse_floats(text):
    if not text.strip():
        return ()
    return tuple(_parse_float(part.strip()) for part in text.split(','))


def _parse_float_or_none(text):
    if text.lower() == 'none':
        return None
    return _parse_float(text)


def _format_value(value, kind):
    if value is None:
        return 'none'
    if kind == 'bool':
        return 'true' if value else 'false'
    if kind == 'floats':
        return ', '.join(repr(float(v)) for v in value)
    if kind in ('float', 'float?'):
        return repr(float(value))
    return str(value)


PARSERS = {
    'float': _parse_float,
    'int': _parse_int,
    'str': lambda text: text,
    'bool': _parse_bool,
    'floats': _parse_floats,
    'float?': _parse_float_or_none,
}


class ConfigKey(object):
    """
    One entry of the configuration key table.

    Attributes:
        name (str):
            Dotted key.
        kind (str):
            One of the PARSERS keys.
        default:
            The default value, `REQUIRED`, `KIND_SPECIFIC` or `OPTIONAL`.
        help (str):
            One line description.
    """
    def __init__(self, name, kind, default, help=''):
        """ Constructor. """
        super(ConfigKey, self).__init__()
        self.name = name
        self.kind = kind
        self.default = default
        self.help = help

    def __repr__(self):
        return 'ConfigKey(%r, %r)' % (self.name, self.kind)

    def parse(self, text, line=None):
        try:
            return PARSERS[self.kind](text)
        except ValueError:
            raise ConfigurationError(
                "%s: cannot read %r as %s" % (self.name, text, self.kind),
                line=line)

    def format(self, value):
        return _format_value(value, self.kind)


KEY_TABLE = (
    ConfigKey('potential.kind', 'str', REQUIRED,
              'double-well | harmonic | free'),
    ConfigKey('potential.mass', 'float', REQUIRED),
    ConfigKey('potential.B', 'float', KIND_SPECIFIC, 'quartic coefficient'),
    ConfigKey('potential.A', 'float', KIND_SPECIFIC, 'quadratic coefficient'),
    ConfigKey('potential.drive', 'float', KIND_SPECIFIC, 'drive amplitude'),
    ConfigKey('potential.k', 'float', KIND_SPECIFIC, 'spring constant'),
    ConfigKey('potential.omega', 'float', REQUIRED,
              'drive angular frequency, defines the period T'),
    ConfigKey('physics.hbar', 'float', REQUIRED),
    ConfigKey('physics.diffusion', 'float', REQUIRED),
    ConfigKey('initial.x0', 'float', REQUIRED),
    ConfigKey('initial.p0', 'float', REQUIRED),
    ConfigKey('initial.var_x', 'float', REQUIRED),
    ConfigKey('initial.var_p', 'float', REQUIRED),
    ConfigKey('initial.cov_xp', 'float', 0.0),
    ConfigKey('grid.x.min', 'float', DEFAULT_X_MIN),
    ConfigKey('grid.x.max', 'float', DEFAULT_X_MAX),
    ConfigKey('grid.x.count', 'int', DEFAULT_X_COUNT),
    ConfigKey('grid.p.min', 'float', DEFAULT_P_MIN),
    ConfigKey('grid.p.max', 'float', DEFAULT_P_MAX),
    ConfigKey('grid.p.count', 'int', DEFAULT_P_COUNT),
    ConfigKey('time.steps_per_period', 'int', STEPS_PER_PERIOD),
    ConfigKey('time.dt', 'float', OPTIONAL,
              'overrides steps_per_period; must divide T'),
    ConfigKey('time.t_final', 'float', T_FINAL, 'in units of T'),
    ConfigKey('output.every', 'int', OUTPUT_EVERY),
    ConfigKey('output.snapshots', 'floats', (), 'in units of T'),
    ConfigKey('ensemble.count', 'int', ENSEMBLE_COUNT),
    ConfigKey('ensemble.seed', 'int', 0),
    ConfigKey('analysis.threshold', 'float', DIVERGENCE_THRESHOLD),
    ConfigKey('analysis.debounce', 'int', DIVERGENCE_DEBOUNCE),
    ConfigKey('analysis.epsilon', 'float', CHI_EPSILON),
    ConfigKey('analysis.lambda', 'float', OPTIONAL),
    ConfigKey('lyapunov.tau', 'float', RENORMALIZATION_INTERVAL),
    ConfigKey('lyapunov.horizon', 'float', LYAPUNOV_HORIZON,
              'in units of T'),
    ConfigKey('lyapunov.trajectories', 'int', LYAPUNOV_TRAJECTORIES),
    ConfigKey('lyapunov.noisy', 'bool', True),
    ConfigKey('numerics.kernel_mode', 'str', KERNEL_PRECOMPUTED),
    ConfigKey('numerics.boundary_margin', 'float', BOUNDARY_MARGIN),
    ConfigKey('numerics.boundary_tolerance', 'float?', BOUNDARY_TOLERANCE),
    ConfigKey('numerics.workers', 'int', 1),
    ConfigKey('numerics.max_cells', 'int', MAX_CELLS),
    ConfigKey('compare.schrodinger', 'bool', False),
    ConfigKey('compare.ensemble', 'bool', False),
    ConfigKey('sweep.x_min', 'float', -4.0),
    ConfigKey('sweep.x_max', 'float', 4.0),
    ConfigKey('sweep.p_min', 'float', -10.0),
    ConfigKey('sweep.p_max', 'float', 10.0),
    ConfigKey('sweep.energy_min', 'float', -35.0),
    ConfigKey('sweep.energy_max', 'float', 0.0),
    ConfigKey('sweep.lambda_min', 'float', SWEEP_LAMBDA_MIN),
    ConfigKey('sweep.probe_horizon', 'float', SWEEP_PROBE_HORIZON,
              'in units of T'),
    ConfigKey('sweep.probe_trajectories', 'int', SWEEP_PROBE_TRAJECTORIES),
    ConfigKey('sweep.max_attempts', 'int', SWEEP_MAX_ATTEMPTS),
)
KEYS = OrderedDict((key.name, key) for key in KEY_TABLE)

# ---- Presets ----
DOUBLE_WELL_SNAPSHOTS = (0.0, 4.0, 8.0)

_DOUBLE_WELL = OrderedDict((
    ('potential.kind', KIND_DOUBLE_WELL),
    ('potential.mass', 1.0),
    ('potential.B', 0.5),
    ('potential.A', 10.0),
    ('potential.drive', 10.0),
    ('potential.omega', 6.07),
    ('physics.hbar', 0.1),
    ('physics.diffusion', 0.0),
    ('initial.x0', -3.0),
    ('initial.p0', 8.0),
    ('initial.var_x', 0.0025),
    ('initial.var_p', 1.0),
    ('output.snapshots', DOUBLE_WELL_SNAPSHOTS),
    ('analysis.lambda', 0.45),
))

_HARMONIC_HBAR = 0.1
_HARMONIC_OMEGA = 2.0 * math.pi

PRESETS = OrderedDict((
    ('paper-fig1', OrderedDict(_DOUBLE_WELL, **{
        'time.t_final': 16.0,
    })),
    ('paper-fig2', OrderedDict(_DOUBLE_WELL, **{
        'physics.diffusion': 0.025,
        'time.t_final': 8.0,
    })),
    ('harmonic', OrderedDict((
        ('potential.kind', KIND_HARMONIC),
        ('potential.mass', 1.0),
        ('potential.k', _HARMONIC_OMEGA ** 2),
        ('potential.omega', _HARMONIC_OMEGA),
        ('physics.hbar', _HARMONIC_HBAR),
        ('physics.diffusion', 0.0),
        ('initial.x0', 1.0),
        ('initial.p0', _HARMONIC_OMEGA),
        ('initial.var_x', _HARMONIC_HBAR / (2.0 * _HARMONIC_OMEGA)),
        ('initial.var_p', _HARMONIC_HBAR * _HARMONIC_OMEGA / 2.0),
        ('grid.x.min', -4.0),
        ('grid.x.max', 4.0),
        ('grid.x.count', 512),
        ('grid.p.min', -16.0),
        ('grid.p.max', 16.0),
        ('grid.p.count', 256),
        ('time.t_final', 4.0),
        ('lyapunov.horizon', 100.0),
        ('sweep.x_min', -2.0),
        ('sweep.x_max', 2.0),
        ('sweep.p_min', -8.0),
        ('sweep.p_max', 8.0),
    ))),
))
# Presets whose snapshot times are always kept.
PINNED_SNAPSHOTS = {
    'paper-fig1': DOUBLE_WELL_SNAPSHOTS,
    'paper-fig2': DOUBLE_WELL_SNAPSHOTS,
}


class RunConfig(object):
    """
    A fully resolved and validated run description.

    Values are looked up by their dotted key, `config['physics.hbar']`;
    the helpers build the objects the evolvers need.

    Attributes:
        values (OrderedDict):
            Every key of the table; unset optional keys hold None.
        preset (str):
            The preset the values started from, if any.
    """
    def __init__(self, values, preset=None):
        """ Constructor. """
        super(RunConfig, self).__init__()
        resolved = OrderedDict()
        for name, key in KEYS.items():
            if name in values:
                resolved[name] = values[name]
            elif key.default is REQUIRED:
                raise ConfigurationError("missing required key %r" % name)
            elif key.default is KIND_SPECIFIC:
                resolved[name] = None
            else:
                resolved[name] = key.default
        unknown = set(values) - set(KEYS)
        if unknown:
            raise ConfigurationError(
                "unknown keys %s" % ', '.join(sorted(unknown)))
        self.values = resolved
        self.preset = preset
        self.validate()

    def __repr__(self):
        return 'RunConfig(preset=%r, kind=%r, hbar=%r, diffusion=%r)' % (
            self.preset, self.kind, self.hbar, self.diffusion)

    def __eq__(self, other):
        if not isinstance(other, RunConfig):
            return NotImplemented
        return self.values == other.values

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __getitem__(self, key):
        try:
            return self.values[key]
        except KeyError:
            raise ConfigurationError("unknown key %r" % (key,))

    # ---- validation ----

    def validate(self):
        """ Raises ConfigurationError for the first problem found. """
        v = self.values
        kind = v['potential.kind']
        if kind not in KIND_KEYS:
            raise ConfigurationError(
                "potential.kind must be one of %s, got %r" % (
                    ', '.join(KIND_KEYS), kind))
        for other_kind, names in KIND_KEYS.items():
            for name in names:
                if other_kind == kind and v[name] is None:
                    raise ConfigurationError(
                        "missing key %r required by %s" % (name, kind))
                if other_kind != kind and v[name] is not None:
                    raise ConfigurationError(
                        "%r is not used by potential kind %s" % (name, kind))

        def positive(*names):
            for name in names:
                if not v[name] > 0:
                    raise ConfigurationError(
                        "%s must be positive, got %r" % (name, v[name]))

        def non_negative(*names):
            for name in names:
                if not v[name] >= 0:
                    raise ConfigurationError(
                        "%s must not be negative, got %r" % (name, v[name]))

        positive('potential.mass', 'potential.omega', 'physics.hbar',
                 'initial.var_x', 'initial.var_p', 'time.steps_per_period',
                 'output.every', 'analysis.debounce', 'analysis.epsilon',
                 'lyapunov.tau', 'lyapunov.horizon', 'lyapunov.trajectories',
                 'numerics.workers', 'numerics.max_cells',
                 'sweep.probe_horizon', 'sweep.probe_trajectories',
                 'sweep.max_attempts')
        non_negative('physics.diffusion', 'time.t_final', 'ensemble.seed')
        if v['time.dt'] is not None:
            positive('time.dt')
        if v['analysis.lambda'] is not None:
            positive('analysis.lambda')
        if v['ensemble.count'] < MIN_ENSEMBLE_COUNT:
            raise ConfigurationError(
                "ensemble.count must be at least %d" % MIN_ENSEMBLE_COUNT)
        if not 0.0 < v['analysis.threshold'] < 1.0:
            raise ConfigurationError("analysis.threshold must be in (0, 1)")
        if v['numerics.kernel_mode'] not in KERNEL_MODES:
            raise ConfigurationError(
                "numerics.kernel_mode must be one of %s" % (
                    ', '.join(KERNEL_MODES)))
        if any(t < 0 for t in v['output.snapshots']):
            raise ConfigurationError("snapshot times must not be negative")
        for low, high in (('sweep.x_min', 'sweep.x_max'),
                          ('sweep.p_min', 'sweep.p_max'),
                          ('sweep.energy_min', 'sweep.energy_max')):
            if not v[low] < v[high]:
                raise ConfigurationError(
                    "%s must be below %s" % (low, high))

        try:
            self.build_axes()
            self.build_potential()
            self.initial_state()
            self.evolver_settings()
            self.total_steps
            self.snapshot_steps()
        except ConfigurationError:
            raise
        except BaseError as exc:
            raise ConfigurationError(str(exc))

    # ---- derived values ----

    @property
    def kind(self):
        return self.values['potential.kind']

    @property
    def hbar(self):
        return self.values['physics.hbar']

    @property
    def diffusion(self):
        return self.values['physics.diffusion']

    @property
    def seed(self):
        return self.values['ensemble.seed']

    @property
    def period(self):
        return 2.0 * math.pi / self.values['potential.omega']

    @property
    def steps_per_period(self):
        if self.values['time.dt'] is not None:
            return steps_in(self.period, self.values['time.dt'],
                            'drive period')
        return self.values['time.steps_per_period']

    @property
    def dt(self):
        if self.values['time.dt'] is not None:
            return self.values['time.dt']
        return self.period / self.values['time.steps_per_period']

    def _periods_to_steps(self, periods, what):
        ratio = periods * self.steps_per_period
        steps = int(round(ratio))
        if abs(ratio - steps) > STEP_DIVISOR_TOLERANCE * max(1.0, ratio):
            raise ConfigurationError(
                "%s %r T does not fall on a time step" % (what, periods))
        return steps

    @property
    def total_steps(self):
        return self._periods_to_steps(self.values['time.t_final'], 'final time')

    def snapshot_steps(self):
        return tuple(self._periods_to_steps(t, 'snapshot time')
                     for t in self.values['output.snapshots'])

    def build_potential(self):
        v = self.values
        kind = v['potential.kind']
        if kind == KIND_DOUBLE_WELL:
            return DrivenDoubleWell(
                mass=v['potential.mass'], B=v['potential.B'],
                A=v['potential.A'], drive_amplitude=v['potential.drive'],
                omega=v['potential.omega'])
        elif kind == KIND_HARMONIC:
            return HarmonicOracle(
                mass=v['potential.mass'], k=v['potential.k'],
                omega=v['potential.omega'])
        return HarmonicOracle(
            mass=v['potential.mass'], k=0.0, omega=v['potential.omega'])

    def build_axes(self):
        v = self.values
        return (
            build_axis(v['grid.x.min'], v['grid.x.max'], v['grid.x.count']),
            build_axis(v['grid.p.min'], v['grid.p.max'], v['grid.p.count']),
        )

    def initial_state(self):
        v = self.values
        return GaussianInitialState(
            v['initial.x0'], v['initial.p0'],
            v['initial.var_x'], v['initial.var_p'], v['initial.cov_xp'])

    def evolver_settings(self):
        v = self.values
        return EvolverSettings(
            hbar=v['physics.hbar'],
            diffusion=v['physics.diffusion'],
            dt=self.dt,
            output_every=v['output.every'],
            kernel_mode=v['numerics.kernel_mode'],
            boundary_margin=v['numerics.boundary_margin'],
            boundary_tolerance=v['numerics.boundary_tolerance'],
            workers=v['numerics.workers'],
            period=self.period)

    def run_plan(self):
        return RunPlan(self.total_steps, self.values['output.every'],
                       self.snapshot_steps())

    # ---- copies and rendering ----

    def replace(self, updates=None, **kwargs):
        """
        A validated copy with some keys changed.

        Keys are dotted names, so they normally come in `updates`;
        keyword arguments use `__` in place of the dots.
        """
        changes = OrderedDict(updates or {})
        for name, value in kwargs.items():
            changes[name.replace('__', '.')] = value
        for name in changes:
            if name not in KEYS:
                raise ConfigurationError("unknown key %r" % (name,))
        values = OrderedDict(self.values)
        values.update(changes)
        return RunConfig(values, preset=self.preset)

    def render(self, header=True):
        lines = []
        if header:
            lines.append('# decochaos run configuration')
            lines.append('# version %s' % __version__)
        for name, key in KEYS.items():
            value = self.values[name]
            if value is None and key.kind != 'float?':
                continue
            lines.append('%s = %s' % (name, key.format(value)))
        return '\n'.join(lines) + '\n'

    def digest(self):
        """ SHA-256 of the resolved values. """
        text = self.render(header=False)
        return hashlib.sha256(text.encode('utf-8')).hexdigest()


def load_preset(name):
    """ The configuration a preset expands to. """
    if name not in PRESETS:
        raise ConfigurationError(
            "unknown preset %r; known presets: %s" % (
                name, ', '.join(PRESETS)))
    return RunConfig(OrderedDict(PRESETS[name]), preset=name)


def build_config(values, preset=None):
    """ Merges explicit values over a preset and validates the result. """
    merged = OrderedDict()
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigurationError("unknown preset %r" % (preset,))
        merged.update(PRESETS[preset])
    merged.update(values)
    pinned = PINNED_SNAPSHOTS.get(preset)
    if pinned and 'output.snapshots' in values:
        merged['output.snapshots'] = tuple(sorted(
            set(pinned) | set(values['output.snapshots'])))
    return RunConfig(merged, preset=preset)


def parse_config_text(text, source='<string>'):
    """
    Parses configuration text.

    The first directive may be `preset = NAME`; it loads the preset
    before the explicit values.
    """
    values = OrderedDict()
    lines = OrderedDict()
    preset = None
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigurationError(
                "expected 'key = value', got %r" % line, line=number)
        name, text_value = [part.strip() for part in line.split('=', 1)]
        if name == 'preset':
            if values or preset is not None:
                raise ConfigurationError(
                    "preset must be the first directive", line=number)
            preset = text_value
            if preset not in PRESETS:
                raise ConfigurationError(
                    "unknown preset %r" % preset, line=number)
            continue
        if name not in KEYS:
            raise ConfigurationError("unknown key %r" % name, line=number)
        if name in values:
            raise ConfigurationError(
                "key %r already set on line %d" % (name, lines[name]),
                line=number)
        values[name] = KEYS[name].parse(text_value, line=number)
        lines[name] = number
    logger.log(TRACE, "parsed %d keys from %s (preset %r)",
               len(values), source, preset)
    return build_config(values, preset)


def parse_config(path):
    """ Reads and validates a configuration file. """
    with io.open(path, 'r', encoding='utf-8') as stream:
        text = stream.read()
    config = parse_config_text(text, source=path)
    logger.debug("loaded configuration %r from %s", config, path)
    return config


def write_config(config, path=None):
    """ Renders a configuration; writes it to `path` when given. """
    text = config.render()
    if path is not None:
        with io.open(path, 'w', encoding='utf-8') as stream:
            stream.write(text)
    return text
