"""Build script: compiles the optional Cython geodesic kernel.

If Cython is unavailable (or ASSOCVAR_NO_EXT=1), the extension is skipped
and the package falls back to the pure-Python kernel at import time.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("ASSOCVAR_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/assocvar/geodesic/_kernel_c.pyx"],
            language_level=3,
            compiler_directives={"boundscheck": False, "wraparound": False},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
