# Sphinx configuration for the heat-enclosure API documentation.
# https://www.sphinx-doc.org/en/master/usage/configuration.html

import os
import sys

sys.path.insert(0, os.path.abspath(".."))

project = "heat-enclosure"
copyright = "2026, heat-enclosure developers"
author = "heat-enclosure developers"
release = "latest"

# API pages are generated from the package sources
extensions = ["autoapi.extension"]
autoapi_dirs = ["../heat_enclosure"]
autoapi_options = ["members", "undoc-members", "show-module-summary"]

templates_path = ["_templates"]
exclude_patterns = ["_build"]

html_theme = "sphinx_rtd_theme"
html_static_path = ["_static"]
