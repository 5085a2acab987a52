# pylint: skip-file
# Sphinx configuration for the omalib documentation.
# https://www.sphinx-doc.org/en/master/usage/configuration.html

project = 'omalib'
copyright = '2026, omalib developers'
author = 'omalib developers'

release = '0.1.0a2'
version = '.'.join(release.split('.')[:2])

# The module pages are hand-written MyST; nothing is pulled in by autodoc.
extensions = [
    'myst_parser',
]

# anchors for the "## Args:" / "## Returns:" headings the pages link to
myst_heading_anchors = 3

templates_path = ['_templates']
exclude_patterns = ['_build', 'requirements.txt']

language = 'en'

source_suffix = {
    '.rst': 'restructuredtext',
    '.md': 'markdown',
}

html_theme = 'sphinx_rtd_theme'
html_static_path = []
html_title = f'omalib {release}'
