"""
Run configuration files
"""

import logging
import math
import re

import numpy as np

from resonant_ratchet.misc import named_group
from resonant_ratchet.propagator import KickPotential, ResonanceError, ResonanceOrder
from resonant_ratchet.state import (BUILTIN_STATES, GridSpec, named_state,
                                    plane_wave_state, uniform_state)

log = logging.getLogger('resonant-ratchet')


class ConfigError(ValueError):
    """
    Invalid configuration, rendered as FILE:LINE: field: message.
    """

    def __init__(self, message, line=None, field=None, source=None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.field = field
        self.source = source

    def __str__(self):
        location = self.source or '<config>'
        if self.line is not None:
            location += ':%d' % self.line
        if self.field is not None:
            return '%s: %s: %s' % (location, self.field, self.message)
        return '%s: %s' % (location, self.message)


# one `key = value` pair per line, optional trailing comment
line_pattern = re.compile(r'^\s*{}\s*=\s*{}\s*(?:#.*)?$'.format(
    named_group('key', r'[A-Za-z_][A-Za-z0-9_]*'),
    named_group('value', r'[^#\s](?:[^#]*[^#\s])?')))

_unsigned = r'(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d+)?'
# float literal or multiple of pi: 0.5, -pi, pi/4, 2*pi/3, 1e-2
real_pattern = re.compile(r'^{}?\s*(?:{}\s*\*?\s*)?{}?(?:\s*/\s*{})?$'.format(
    named_group('sign', r'[-+]'),
    named_group('coefficient', _unsigned),
    named_group('pi', r'pi'),
    named_group('denominator', _unsigned)))

initial_pattern = re.compile(r'^(?:{}|plane:{}|expr:{})$'.format(
    named_group('uniform', r'uniform'),
    named_group('plane', r'[-+]?\d+'),
    named_group('expr', r'\w+')))


def parse_real(text):
    m = real_pattern.match(text.strip())
    if not m or not (m.group('coefficient') or m.group('pi')):
        raise ValueError('not a real number or multiple of pi: %r' % text)
    value = float(m.group('coefficient') or 1)
    if m.group('pi'):
        value *= math.pi
    if m.group('denominator'):
        denominator = float(m.group('denominator'))
        if denominator == 0:
            raise ValueError('zero denominator in %r' % text)
        value /= denominator
    return -value if m.group('sign') == '-' else value


def parse_integer(text):
    if not re.match(r'^[-+]?\d+$', text.strip()):
        raise ValueError('not an integer: %r' % text)
    return int(text)


def parse_initial(text):
    m = initial_pattern.match(text.strip())
    if not m:
        raise ValueError('expected uniform, plane:L or expr:NAME, got %r' % text)
    if m.group('expr') is not None and m.group('expr') not in BUILTIN_STATES:
        raise ValueError('unknown builtin state %r, expected one of: %s'
                         % (m.group('expr'), ', '.join(sorted(BUILTIN_STATES))))
    return text.strip()


class RunConfig:
    """
    Parameters of an evolution (single k) or a sweep (k range).
    """

    fields = {
        'r': parse_integer,
        'q': parse_integer,
        'k': parse_real,
        'k_min': parse_real,
        'k_max': parse_real,
        'k_steps': parse_integer,
        'a': parse_real,
        'alpha': parse_real,
        'n_kicks': parse_integer,
        'initial': parse_initial,
        'm_max': parse_integer,
        'seed': parse_integer,
    }
    defaults = {
        'r': 1,
        'q': 3,
        'k': None,
        'k_min': None,
        'k_max': None,
        'k_steps': None,
        'a': 0.0,
        'alpha': 0.0,
        'n_kicks': 100,
        'initial': 'uniform',
        'm_max': None,
        'seed': None,
    }

    def __init__(self, source=None, **kwargs):
        unknown = set(kwargs) - set(self.fields)
        if unknown:
            raise ConfigError('unknown keys: %s' % ', '.join(sorted(unknown)), source=source)
        values = dict(self.defaults)
        values.update(kwargs)
        for key, value in values.items():
            setattr(self, key, value)
        self.source = source
        self.validate()

    def validate(self):
        def fail(field, message):
            raise ConfigError(message, field=field, source=self.source)

        try:
            ResonanceOrder(self.r, self.q)
        except ResonanceError as e:
            fail('q', str(e))
        if self.k is None and self.k_min is None:
            fail('k', 'either k or k_min/k_max/k_steps is required')
        if self.k is not None and self.k < 0:
            fail('k', 'must be non-negative')
        if self.k_min is not None or self.k_max is not None or self.k_steps is not None:
            if None in (self.k_min, self.k_max, self.k_steps):
                fail('k_min', 'k_min, k_max and k_steps go together')
            if not 0 <= self.k_min < self.k_max:
                fail('k_max', 'need 0 <= k_min < k_max')
            if self.k_steps < 2:
                fail('k_steps', 'need at least 2 points')
        if self.a < 0:
            fail('a', 'must be non-negative')
        if self.n_kicks < 1:
            fail('n_kicks', 'need at least one kick')
        if self.m_max is not None and self.m_max < 1:
            fail('m_max', 'must be positive')
        try:
            self.initial = parse_initial(self.initial)
        except ValueError as e:
            fail('initial', str(e))
        if self.m_max is not None and abs(self.plane_momentum()) > self.m_max:
            fail('initial', 'plane wave outside the momentum cutoff')

    @classmethod
    def from_text(cls, text, source=None):
        values = {}
        for number, line in enumerate(text.splitlines(), start=1):
            if not line.strip() or line.lstrip().startswith('#'):
                continue
            m = line_pattern.match(line)
            if not m:
                raise ConfigError('expected `key = value`, got %r' % line.strip(),
                                  line=number, source=source)
            key, value = m.group('key'), m.group('value')
            if key not in cls.fields:
                raise ConfigError('unknown key', line=number, field=key, source=source)
            if key in values:
                raise ConfigError('given twice', line=number, field=key, source=source)
            try:
                values[key] = cls.fields[key](value)
            except ValueError as e:
                raise ConfigError(str(e), line=number, field=key, source=source) from None
        return cls(source=source, **values)

    @classmethod
    def from_file(cls, path):
        log.info('Reading config %s' % path)
        try:
            with open(path) as f:
                text = f.read()
        except OSError as e:
            raise ConfigError('cannot read: %s' % e.strerror, source=path) from None
        return cls.from_text(text, source=path)

    def items(self):
        """
        (key, text) pairs of the set fields in a fixed order.
        """
        for key in self.fields:
            value = getattr(self, key)
            if value is None:
                continue
            yield key, repr(float(value)) if isinstance(value, float) else str(value)

    def to_text(self):
        return ''.join('%s = %s\n' % item for item in self.items())

    def replace(self, **changes):
        values = {key: getattr(self, key) for key in self.fields}
        values.update(changes)
        return RunConfig(source=self.source, **values)

    @property
    def is_sweep(self):
        return self.k_min is not None

    @property
    def order(self):
        return ResonanceOrder(self.r, self.q)

    def potential(self, k=None):
        k = self.k if k is None else k
        if k is None:
            raise ConfigError('a single k is required', field='k', source=self.source)
        return KickPotential(k, self.a, self.alpha)

    def k_values(self):
        if not self.is_sweep:
            raise ConfigError('a k range is required', field='k_min', source=self.source)
        return np.linspace(self.k_min, self.k_max, self.k_steps)

    def plane_momentum(self):
        """
        L of a `plane:L` initial state, else 0.
        """
        m = initial_pattern.match(self.initial)
        return int(m.group('plane')) if m.group('plane') is not None else 0

    def grid(self, potential):
        return GridSpec.for_kicks(potential.k, potential.a, self.n_kicks, self.m_max,
                                  offset=self.plane_momentum())

    def initial_state(self, grid):
        m = initial_pattern.match(self.initial)
        if m.group('uniform'):
            return uniform_state(grid)
        if m.group('plane') is not None:
            return plane_wave_state(int(m.group('plane')), grid)
        return named_state(m.group('expr'), grid)

    def __eq__(self, other):
        if not isinstance(other, RunConfig):
            return NotImplemented
        return all(getattr(self, key) == getattr(other, key) for key in self.fields)

    def __repr__(self):
        return 'RunConfig(%s)' % ', '.join('%s=%s' % item for item in self.items())
