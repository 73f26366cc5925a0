"""Build script: compiles the optional term-map kernel extension.

The package is fully functional without the extension; homlie.kernels
falls back to the pure-Python twin at import time.  Build in place with

    python setup.py build_ext --inplace
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("HOMLIE_SKIP_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("homlie._kernels_cy", ["src/homlie/_kernels_cy.pyx"])],
            language_level=3,
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
