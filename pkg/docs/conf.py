# -*- coding: utf-8 -*-
#
# bathpulse documentation build configuration file
#
# This file is execfile()d with the current directory set to its
# containing dir.

import os, sys

sys.path.insert(0, os.path.abspath('..'))

# numerical packages are mocked so the docs build without them
autodoc_mock_imports = ['numpy', 'scipy']

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.doctest',
    'sphinx.ext.coverage',
    'sphinx.ext.autosummary',
    'sphinx.ext.napoleon',
    'sphinx.ext.mathjax']

templates_path = ['_templates']
source_suffix = ['.rst']
master_doc = 'index'

project = u'bathpulse'
copyright = u'2026, bathpulse developers'
author = u'bathpulse developers'

version = u''
release = u''

language = None
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
pygments_style = 'sphinx'
todo_include_todos = False

html_theme = 'sphinx_rtd_theme'
html_sidebars = {
    '**': [
        'relations.html',
        'searchbox.html',
    ]
}

autodoc_member_order = 'bysource'
htmlhelp_basename = 'bathpulsedoc'

latex_documents = [
    (master_doc, 'bathpulse.tex', u'bathpulse Documentation', author, 'manual'),
]

man_pages = [
    (master_doc, 'bathpulse', u'bathpulse Documentation', [author], 1)
]
