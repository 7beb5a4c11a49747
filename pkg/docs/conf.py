#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Sphinx configuration for the stochmapf documentation."""

import stochmapf

project = "stochmapf"
copyright = "The stochmapf developers"
version = release = stochmapf.__version__

extensions = [
    "sphinxcontrib.apidoc",
    "sphinx.ext.autodoc",
    "sphinx.ext.napoleon",
    "sphinx.ext.mathjax",
    "sphinx.ext.viewcode",
    "sphinx_autodoc_typehints",
    "recommonmark",
]

# API reference is generated into apiref/ on each build
apidoc_module_dir = "../src/stochmapf"
apidoc_output_dir = "apiref"
apidoc_excluded_paths = ["tests"]
apidoc_separate_modules = True
apidoc_module_first = True
apidoc_extra_args = ["-H", "stochmapf API reference"]

autoclass_content = "both"
autodoc_member_order = "bysource"
autodoc_default_options = {"members": True, "show-inheritance": True}
napoleon_google_docstring = True
napoleon_include_special_with_doc = False

source_suffix = [".rst", ".md"]
master_doc = "index"
exclude_patterns = ["_build", "apiref/modules.rst"]
pygments_style = "sphinx"

html_theme = "sphinx_rtd_theme"
html_theme_options = {"style_nav_header_background": "#3a5f7d"}
htmlhelp_basename = "stochmapfdoc"

man_pages = [
    ("index", "stochmapf", "Online MAPF with learned gamma delays", ["stochmapf"], 1)
]
