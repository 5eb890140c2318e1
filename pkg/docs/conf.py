# Sphinx configuration of the boxtron documentation.
# https://www.sphinx-doc.org/en/master/usage/configuration.html

import os
import shutil
import sys

__location__ = os.path.dirname(__file__)
sys.path.insert(0, os.path.join(__location__, "../src"))

# -- API reference -----------------------------------------------------------
# Read the Docs does not run sphinx-apidoc, so it is run on every build.

from sphinx.ext import apidoc

output_dir = os.path.join(__location__, "api")
boxtron_module_dir = os.path.join(__location__, "../src/boxtron")
shutil.rmtree(output_dir, ignore_errors=True)

try:
    apidoc.main(["--implicit-namespaces", "-M", "-T", "-f", "-o", output_dir, boxtron_module_dir])
except Exception as e:
    print(f"Running `sphinx-apidoc` failed!\n{e}")

# -- General configuration ---------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.intersphinx",
    "sphinx.ext.autosummary",
    "sphinx.ext.viewcode",
    "sphinx.ext.doctest",
    "sphinx.ext.mathjax",
    "sphinx.ext.napoleon",
    "sphinx.ext.autosectionlabel",
    "myst_parser",
]

autosectionlabel_prefix_document = True
myst_enable_extensions = ["colon_fence", "deflist", "dollarmath", "linkify"]
source_suffix = [".rst", ".md"]
master_doc = "index"
exclude_patterns = ["_build", "Thumbs.db", ".DS_Store", ".venv"]

project = "boxtron"
copyright = "2024, boxtron contributors"

try:
    from boxtron.__about__ import __version__ as version
except ImportError:
    version = ""

if not version or version.lower() == "unknown":
    version = os.getenv("READTHEDOCS_VERSION", "unknown")

release = version

pygments_style = "sphinx"

# -- HTML output -------------------------------------------------------------

html_theme = "furo"
html_theme_options = {"navigation_with_keys": True}
html_title = "boxtron"
html_last_updated_fmt = "%H:%M %b %d, %Y"
htmlhelp_basename = "boxtron-doc"

# -- External mapping --------------------------------------------------------

python_version = ".".join(map(str, sys.version_info[0:2]))
intersphinx_mapping = {
    "python": ("https://docs.python.org/" + python_version, None),
    "numpy": ("https://numpy.org/doc/stable", None),
    "pandas": ("https://pandas.pydata.org/docs", None),
    "scipy": ("https://docs.scipy.org/doc/scipy/reference", None),
}

print(f"loading configurations for {project} {version} ...", file=sys.stderr)
