import os

import numpy as np
from setuptools import Extension, setup

# The compiled kernels are an optional speedup. If Cython or a C compiler is
# missing the install still succeeds and the package falls back to the numpy
# implementation at import time.
ext_modules = []
if os.environ.get("FIREFRONT_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "firefront._kernels_cy",
                    ["src/firefront/_kernels_cy.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": 3},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
