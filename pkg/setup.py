"""Build script: compiles the optional subset-scan extension.

The package is fully functional without the extension (a numpy fallback
is selected at import time), so any Cython or compiler failure downgrades
to a pure-Python install instead of aborting.
"""

import numpy as np
from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/nsgms/_scan_cy.pyx",
        compiler_directives={"language_level": 3},
    )
    for ext in ext_modules:
        ext.include_dirs.append(np.get_include())
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
