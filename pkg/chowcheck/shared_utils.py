# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

# This file contains utility functions shared by the boundary config, cone file and
# expression parsers.

import re
from fractions import Fraction

import yaml

RATIONAL_RE = re.compile(r'^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$')
NAME_RE = re.compile(r'^[A-Za-z][A-Za-z0-9_]*$')

# Symbols reserved by the cycle expression grammar.
RESERVED_NAMES = frozenset(['cg', 'W', 'xi', 'f'])


# This is thrown by the different input parsers.
class ParserError(Exception):
    pass


def format_rat(value):
    """Render an exact rational as a "p/q" string ("n" for integers).

    :param value: a Fraction or an int.
    :return: the string form, never a float.
    """
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return '{}/{}'.format(value.numerator, value.denominator)


def parse_rat(text):
    """Parse a "p/q" or "n" string into a Fraction, raising ParserError on failure."""
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    m = RATIONAL_RE.match(str(text))
    if not m:
        raise ParserError("Expected a rational 'p/q', got: '{}'".format(text))
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise ParserError("Zero denominator in '{}'".format(text))
    return Fraction(int(num), int(den) if den is not None else 1)


def validate_name(name, kind):
    """Check a component name is an identifier and not a reserved grammar symbol.

    :param name: the name to check.
    :param kind: what the name denotes, used in the error message.
    :raises ParserError: if the name does not conform.
    """
    if not isinstance(name, str) or not NAME_RE.match(name):
        raise ParserError("{} name must be alpha-numeric with a leading letter. Got: '{}'"
                          .format(kind, name))
    if name in RESERVED_NAMES:
        raise ParserError("{} name '{}' is reserved by the expression grammar"
                          .format(kind, name))


def split_list(text):
    """Split a comma separated list, dropping blanks."""
    return [item.strip() for item in text.split(',') if item.strip()]


def load_yaml_file(filename):
    """ Load a YAML file from disk, throw a ParserError on failure."""
    try:
        with open(filename, 'r') as f:
            return yaml.safe_load(f)
    except IOError as e:
        raise ParserError('Error opening ' + filename + ': ' + str(e))
    except yaml.YAMLError as e:
        raise ParserError('Error parsing {}: {}'.format(filename, e))


def load_text_file(filename):
    """ Load a text file from disk, throw a ParserError on failure."""
    try:
        with open(filename, 'r') as f:
            return f.read()
    except IOError as e:
        raise ParserError('Error opening ' + filename + ': ' + str(e))
