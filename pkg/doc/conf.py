# -*- coding: utf-8 -*-
#
# CHROMA documentation build configuration file.
import sys
import os

sys.path.insert(0, os.path.abspath(os.pardir))

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.doctest',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'chroma'
copyright = u'2025-2026, CHROMA developers'
version = '0.1'
release = '0.1.0'

exclude_patterns = ['_build']
pygments_style = 'sphinx'

html_theme = 'default'
html_static_path = []
htmlhelp_basename = 'chromadoc'

latex_documents = [
    ('index', 'chroma.tex', u'CHROMA Documentation',
     u'CHROMA developers', 'manual'),
]

man_pages = [
    ('index', 'chroma', u'CHROMA Documentation',
     [u'CHROMA developers'], 1)
]
