# -*- coding: utf-8 -*-
#
# Sphinx configuration for the chowcheck documentation.

import os
import sys

import sphinx_rtd_theme

sys.path.insert(0, os.path.abspath('..'))

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
]

source_suffix = '.rst'
master_doc = 'index'

project = u'python_chowcheck'
copyright = u'chowcheck developers'
author = u'chowcheck developers'
version = u'current'
release = u'current'

exclude_patterns = ['_build']
pygments_style = 'sphinx'

autodoc_member_order = 'bysource'

html_theme = 'sphinx_rtd_theme'
html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]
htmlhelp_basename = 'python_chowcheckdoc'
