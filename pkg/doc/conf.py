# Sphinx configuration for the qcthermo docs.
import os
import sys

sys.path.insert(0, os.path.abspath('..'))

from qcthermo.version import __version__  # noqa: E402

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.napoleon',
]
master_doc = 'index'
exclude_patterns = ['_build', 'states']

project = 'qcthermo'
author = 'qcthermo contributors'
copyright = '2026, qcthermo contributors'
version = release = __version__

pygments_style = 'sphinx'
html_theme = 'alabaster'
