import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; zpd falls back to the numpy kernels
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("ZPD_NO_EXTENSION"):
    ext_modules = cythonize(
        [
            Extension(
                "zpd._core",
                ["src/zpd/_core.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
