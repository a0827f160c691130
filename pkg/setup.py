"""Build script: compiles the optional Cython kernel core.

The package works without the extension (a NumPy fallback is selected at
import time), so a missing compiler or Cython only costs speed. Set
TRACKLAB_NO_EXT=1 to skip the extension build explicitly.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("TRACKLAB_NO_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        ext = Extension(
            "tracklab._kernels._core",
            ["src/tracklab/_kernels/_core.pyx"],
            include_dirs=[numpy.get_include()],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        )
        ext_modules = cythonize(
            [ext], compiler_directives={"language_level": "3"}
        )
    except ImportError:
        print("tracklab: Cython/NumPy unavailable at build time; "
              "installing with the pure NumPy kernel backend only.")

setup(ext_modules=ext_modules)
