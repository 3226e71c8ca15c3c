#!/usr/bin/env python
# encoding: utf-8

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
from setuptools import setup, find_packages

tests_require = [
    'pytest-timeout>=1.3.4,<=2.0.2',
    'pytest>=5.3.1,<=6.2.4',
    'pytest-cov>2.6.0,<=2.8.0',
    'flake8>3.8.3,<=3.9.1',
]

setup(
    name='python_chowcheck',
    # use_scm_version=True,
    description='Exact verification of characteristic class identities and '
                'boundary cancellations for families of abelian varieties',
    packages=find_packages(exclude=['tests', 'tests.*']),
    package_dir={'chowcheck': 'chowcheck'},
    package_data={'chowcheck': ['data/configs/*.cfg', 'data/configs/*.yaml',
                                'data/cones/*.cone']},
    install_requires=[
        'sympy>=1.12',
        'click>=7.0',
        'ujson>=3.2.0,<=5.5.0',
        'numpy>=1.18.5',
        'PyYAML>=5.1.2',
    ],
    setup_requires=[
        'pytest-runner>=5.2,<=5.3.2',
    ],
    extras_require={
        'testing': tests_require,
    },
    tests_require=tests_require,
    entry_points={
        'console_scripts': ['chowcheck=chowcheck.cli:cli'],
    },
)
