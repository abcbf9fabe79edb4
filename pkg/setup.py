"""Build script: compiles the optional Cython speedup kernels.

The package is fully functional without the extension (a NumPy fallback is
selected at import time), so any failure here is non-fatal by design: build
with plain `pip install -e . --no-build-isolation`.
"""

import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None and os.path.exists("src/elastoqp/kernels/_speedups.pyx"):
    extensions = cythonize(
        [
            Extension(
                "elastoqp.kernels._speedups",
                ["src/elastoqp/kernels/_speedups.pyx"],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )
else:
    extensions = []

setup(ext_modules=extensions)
