"""Build script: compiles the optional speedup extension.

Set SYNTHQC_NO_EXT=1 to skip the Cython build and install pure Python only;
the package falls back to the numpy kernels at import time either way.
"""

import os

import numpy as np
from setuptools import setup

ext_modules = []
if os.environ.get("SYNTHQC_NO_EXT", "0") != "1":
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "synthqc.kernels._speedups",
                ["src/synthqc/kernels/_speedups.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
