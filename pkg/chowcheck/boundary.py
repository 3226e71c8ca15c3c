# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import logging
import os
import re
from itertools import combinations

from . import shared_utils as utils
from .shared_utils import ParserError

logger = logging.getLogger(__name__)

KNOWN_SECTIONS = ('components', 'nu', 'strata', 'J', 'meta')
REQUIRED_SECTIONS = ('components', 'nu', 'meta')

META_FIELDS = {
    'base_dim': int,
    'fiber_dim': int,
    'z_support': list,
    'w_nonzero_on': list,
    'expect': str,
    'name': str,
}
REQUIRED_META = ('base_dim', 'fiber_dim')
EXPECTATIONS = ('certified', 'rejected')

YAML_EXTENSIONS = ('.yaml', '.yml')

SECTION_RE = re.compile(r'^\[\s*([A-Za-z_]+)\s*\]$')


class HypothesisError(ValueError):
    """The configuration is well formed but violates a hypothesis of the theorem."""

    def __init__(self, message, expect=None):
        super(HypothesisError, self).__init__(message)
        self.expect = expect


class BoundaryConfig(object):
    """
    The combinatorics of a compactified family's boundary.

    Boundary components Y_i upstairs and T_j downstairs are named by strings and ordered
    as declared. nu[(i, j)] is the multiplicity of Y_i in the pullback of T_j. Validation
    happens on construction; instances are immutable afterwards.
    """

    def __init__(self, components_y, components_t, nu, strata=(), j_overrides=None,
                 base_dim=None, fiber_dim=None, z_support=None, w_nonzero_on=(),
                 name=None, expect=None):
        self._name = name or 'config'
        self.validate_names(components_y, components_t)
        self._components_y = tuple(components_y)
        self._components_t = tuple(components_t)
        self._y_index = {y: k for k, y in enumerate(self._components_y)}
        self._t_index = {t: k for k, t in enumerate(self._components_t)}

        self.validate_nu(nu)
        self._nu = {(y, t): int(k) for (y, t), k in nu.items() if k}

        self.validate_meta(base_dim, fiber_dim, expect)
        self._base_dim = base_dim
        self._fiber_dim = fiber_dim
        self._expect = expect

        self._strata = self.close_strata(strata)
        self._j_of = self.build_j(j_overrides or {})

        self._z_support = self.validate_z_support(z_support)
        self._w_nonzero_on = frozenset(self._known_y(w_nonzero_on, 'w_nonzero_on'))
        self.validate_hypotheses()

    def validate_names(self, components_y, components_t):
        """Names must be distinct identifiers, and both index sets nonempty.

        :raises ParserError: on a bad or duplicated name.
        """
        if not components_y or not components_t:
            raise ParserError('{}: both Y and T component lists must be nonempty'
                              .format(self._name))
        for kind, names in (('Y component', components_y), ('T component', components_t)):
            for n in names:
                utils.validate_name(n, kind)
        all_names = list(components_y) + list(components_t)
        duplicates = sorted(set(n for n in all_names if all_names.count(n) > 1))
        if duplicates:
            raise ParserError('{}: duplicated component names {}'.format(self._name, duplicates))

    def validate_nu(self, nu):
        """Check multiplicities are nonnegative integers on known names, and that every
        Y_i lies over some T_j.

        :raises ParserError: if nu is malformed.
        """
        for (y, t), k in nu.items():
            if y not in self._y_index or t not in self._t_index:
                raise ParserError('{}: nu entry ({}, {}) names an unknown component'
                                  .format(self._name, y, t))
            if isinstance(k, bool) or not isinstance(k, int) or k < 0:
                raise ParserError('{}: multiplicity of {} in {} must be a nonnegative integer, '
                                  'got {!r}'.format(self._name, y, t, k))
        for y in self._y_index:
            if not any(nu.get((y, t), 0) for t in self._t_index):
                raise ParserError('{}: component {} does not lie over any T_j'
                                  .format(self._name, y))

    def validate_meta(self, base_dim, fiber_dim, expect):
        for field, value in (('base_dim', base_dim), ('fiber_dim', fiber_dim)):
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ParserError('{}: {} must be a positive integer, got {!r}'
                                  .format(self._name, field, value))
        if expect is not None and expect not in EXPECTATIONS:
            raise ParserError('{}: expect must be one of {}, got {!r}'
                              .format(self._name, EXPECTATIONS, expect))

    def close_strata(self, strata):
        """Downward closure of the declared strata, plus every singleton."""
        closed = set(frozenset([y]) for y in self._components_y)
        for stratum in strata:
            stratum = frozenset(self._known_y(stratum, 'strata'))
            if not stratum:
                continue
            for k in range(1, len(stratum) + 1):
                closed.update(frozenset(c) for c in combinations(sorted(stratum), k))
        return frozenset(closed)

    def build_j(self, overrides):
        """
        J(I) defaults to the union of the column supports of the rows in I; an override
        must contain that union and keep J monotone.

        :raises ParserError: if an override is inconsistent.
        """
        j_of = {}
        for stratum in sorted(self._strata, key=len):
            j_of[stratum] = self.column_support(stratum)
        for stratum, js in overrides.items():
            stratum = frozenset(self._known_y(stratum, 'J'))
            js = frozenset(self._known_t(js, 'J'))
            if stratum not in self._strata:
                raise ParserError('{}: J override for {} which is not a stratum'
                                  .format(self._name, self.render_set(stratum)))
            if not js >= self.column_support(stratum):
                raise ParserError('{}: J({}) = {} misses the column support {}'
                                  .format(self._name, self.render_set(stratum),
                                          self.render_set(js),
                                          self.render_set(self.column_support(stratum))))
            j_of[stratum] = js
        for small in self._strata:
            for big in self._strata:
                if small < big and not j_of[big] >= j_of[small]:
                    raise ParserError('{}: J is not monotone: J({}) does not contain J({})'
                                      .format(self._name, self.render_set(big),
                                              self.render_set(small)))
        return j_of

    def validate_z_support(self, z_support):
        """Z = f^*T - Y has the components with sum_j nu_i^j >= 2; a declared z_support
        may add components from multiple fibers but may not drop any."""
        derived = frozenset(y for y in self._components_y
                            if sum(self.nu(y, t) for t in self._components_t) >= 2)
        if z_support is None:
            return derived
        declared = frozenset(self._known_y(z_support, 'z_support'))
        if not declared >= derived:
            raise ParserError('{}: z_support must contain {}'
                              .format(self._name, self.render_set(derived - declared)))
        return declared

    def validate_hypotheses(self):
        """
        Structural form of the theorem's hypotheses:
            - normal crossings: a nonempty Y_I has codimension |I| <= dim X, and T_{J(I)}
              has codimension |J(I)| <= dim S;
            - c_g = f^*xi + W with W.Y_i = 0 on every component of Z.

        :raises HypothesisError: if a hypothesis is violated.
        """
        dim_x = self._base_dim + self._fiber_dim
        for stratum in self._strata:
            if len(stratum) > dim_x:
                raise self.violation('stratum {} has more than dim X = {} components'
                                     .format(self.render_set(stratum), dim_x))
            if len(self._j_of[stratum]) > self._base_dim:
                raise self.violation('J({}) has more than dim S = {} components'
                                     .format(self.render_set(stratum), self._base_dim))
        clash = self._w_nonzero_on & self._z_support
        if clash:
            raise self.violation('W.Y_i is declared nonzero on {}, which lies in Z'
                                 .format(self.render_set(clash)))

    def violation(self, message):
        return HypothesisError('{}: {}'.format(self._name, message), expect=self._expect)

    def _known_y(self, names, where):
        names = list(names)
        for n in names:
            if n not in self._y_index:
                raise ParserError('{}: unknown Y component {!r} in {}'.format(self._name, n, where))
        return names

    def _known_t(self, names, where):
        names = list(names)
        for n in names:
            if n not in self._t_index:
                raise ParserError('{}: unknown T component {!r} in {}'.format(self._name, n, where))
        return names

    @property
    def name(self):
        return self._name

    @property
    def components_y(self):
        return self._components_y

    @property
    def components_t(self):
        return self._components_t

    @property
    def base_dim(self):
        return self._base_dim

    @property
    def fiber_dim(self):
        return self._fiber_dim

    @property
    def z_support(self):
        return self._z_support

    @property
    def w_nonzero_on(self):
        return self._w_nonzero_on

    @property
    def strata(self):
        return self._strata

    @property
    def expect(self):
        return self._expect

    def nu(self, y, t):
        return self._nu.get((y, t), 0)

    def row(self, y, columns=None):
        return [self.nu(y, t) for t in (self._components_t if columns is None else columns)]

    def column_support(self, names):
        return frozenset(t for t in self._components_t for y in names if self.nu(y, t) > 0)

    def is_stratum(self, names):
        return frozenset(names) in self._strata

    def j_of(self, names):
        stratum = frozenset(names)
        if stratum not in self._strata:
            raise ValueError('{} is not a nonempty stratum of {}'
                             .format(self.render_set(stratum), self._name))
        return self._j_of[stratum]

    def y_key(self, y):
        return self._y_index[y]

    def t_key(self, t):
        return self._t_index[t]

    def sort_y(self, names):
        return tuple(sorted(names, key=self._y_index.__getitem__))

    def sort_t(self, names):
        return tuple(sorted(names, key=self._t_index.__getitem__))

    def sorted_strata(self):
        def key(stratum):
            return len(stratum), [self._y_index[y] for y in self.sort_y(stratum)]
        return sorted(self._strata, key=key)

    def render_set(self, names):
        names = list(names)
        if all(n in self._y_index for n in names):
            names = self.sort_y(names)
        elif all(n in self._t_index for n in names):
            names = self.sort_t(names)
        return '{' + ','.join(names) + '}'

    def __repr__(self):
        return 'BoundaryConfig({})'.format(self._name)


def parse_config_text(text, name='config'):
    """
    Parse the INI-like boundary config format.

    :param text: the file contents.
    :param name: used in error messages and as the config name.
    :raises ParserError: on syntax errors.
    :raises HypothesisError: if the described boundary violates the theorem's hypotheses.
    """
    sections = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        m = SECTION_RE.match(line)
        if m:
            current = m.group(1)
            if current not in KNOWN_SECTIONS:
                raise ParserError('{}:{}: unknown section [{}]'.format(name, lineno, current))
            if current in sections:
                raise ParserError('{}:{}: duplicated section [{}]'.format(name, lineno, current))
            sections[current] = []
            continue
        if current is None:
            raise ParserError('{}:{}: content before the first section'.format(name, lineno))
        sections[current].append((lineno, line))

    missing = [s for s in REQUIRED_SECTIONS if s not in sections]
    if missing:
        raise ParserError('{}: missing sections {}'.format(name, missing))

    components = {}
    for lineno, line in sections['components']:
        key, value = _split_pair(line, '=', name, lineno)
        if key not in ('Y', 'T'):
            raise ParserError('{}:{}: [components] keys are Y and T, got {!r}'
                              .format(name, lineno, key))
        components[key] = utils.split_list(value)

    nu = {}
    for lineno, line in sections['nu']:
        y, entries = _split_pair(line, ':', name, lineno)
        for entry in utils.split_list(entries):
            t, k = _split_pair(entry, '=', name, lineno)
            try:
                nu[(y, t)] = int(k)
            except ValueError:
                raise ParserError('{}:{}: multiplicity {!r} is not an integer'
                                  .format(name, lineno, k))

    strata = [utils.split_list(line) for _, line in sections.get('strata', [])]

    overrides = {}
    for lineno, line in sections.get('J', []):
        left, right = _split_pair(line, '->', name, lineno)
        overrides[frozenset(utils.split_list(left))] = utils.split_list(right)

    meta = {}
    for lineno, line in sections['meta']:
        key, value = _split_pair(line, '=', name, lineno, allow_empty=True)
        if key not in META_FIELDS:
            raise ParserError('{}:{}: unknown [meta] field {!r}'.format(name, lineno, key))
        kind = META_FIELDS[key]
        if kind is int:
            try:
                meta[key] = int(value)
            except ValueError:
                raise ParserError('{}:{}: {} must be an integer, got {!r}'
                                  .format(name, lineno, key, value))
        elif kind is list:
            meta[key] = utils.split_list(value)
        else:
            meta[key] = value

    return _build(name, components, nu, strata, overrides, meta)


def parse_config_yaml(data, name='config'):
    """Build a BoundaryConfig from the YAML mapping form of the format."""
    if not isinstance(data, dict):
        raise ParserError('{}: expected a mapping at the top level'.format(name))
    unknown = sorted(set(data) - set(KNOWN_SECTIONS))
    if unknown:
        raise ParserError('{}: unknown sections {}'.format(name, unknown))
    components = data.get('components') or {}
    nu = {}
    for y, row in (data.get('nu') or {}).items():
        if not isinstance(row, dict):
            raise ParserError('{}: nu row for {} must be a mapping'.format(name, y))
        for t, k in row.items():
            nu[(str(y), str(t))] = k
    strata = [[str(y) for y in s] for s in (data.get('strata') or [])]
    overrides = {}
    for entry in data.get('J') or []:
        if not isinstance(entry, dict) or set(entry) != {'I', 'J'}:
            raise ParserError('{}: J entries must be mappings with keys I and J'.format(name))
        overrides[frozenset(str(y) for y in entry['I'])] = [str(t) for t in entry['J']]
    meta = dict(data.get('meta') or {})
    for key, value in meta.items():
        if key not in META_FIELDS:
            raise ParserError('{}: unknown meta field {!r}'.format(name, key))
        if META_FIELDS[key] is list and not isinstance(value, list):
            meta[key] = utils.split_list(str(value)) if value else []
    return _build(name, components, nu, strata, overrides, meta)


def _build(name, components, nu, strata, overrides, meta):
    missing = [f for f in REQUIRED_META if f not in meta]
    if missing:
        raise ParserError('{}: missing meta fields {}'.format(name, missing))
    if 'Y' not in components or 'T' not in components:
        raise ParserError('{}: [components] must list both Y and T'.format(name))
    return BoundaryConfig(components['Y'], components['T'], nu, strata, overrides,
                          base_dim=meta['base_dim'], fiber_dim=meta['fiber_dim'],
                          z_support=meta.get('z_support'),
                          w_nonzero_on=meta.get('w_nonzero_on', ()),
                          name=meta.get('name', name), expect=meta.get('expect'))


def _split_pair(line, sep, name, lineno, allow_empty=False):
    if sep not in line:
        raise ParserError('{}:{}: expected {!r} in {!r}'.format(name, lineno, sep, line))
    key, value = line.split(sep, 1)
    key, value = key.strip(), value.strip()
    if not key or (not value and not allow_empty):
        raise ParserError('{}:{}: malformed entry {!r}'.format(name, lineno, line))
    return key, value


def load_config(filename):
    """Load a boundary config, dispatching on the file extension."""
    name = os.path.splitext(os.path.basename(filename))[0]
    if filename.endswith(YAML_EXTENSIONS):
        return parse_config_yaml(utils.load_yaml_file(filename), name)
    return parse_config_text(utils.load_text_file(filename), name)


def config_files(directory):
    """The boundary config files of a directory, sorted by name."""
    suffixes = ('.cfg',) + YAML_EXTENSIONS
    return sorted(os.path.join(directory, f) for f in os.listdir(directory)
                  if f.endswith(suffixes))
