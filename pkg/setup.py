from setuptools import setup, Extension

import numpy as np

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "lutfilter._simplex",
                ["src/lutfilter/_simplex.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": 3, "boundscheck": False, "wraparound": False},
    )
except ImportError:
    # No Cython: the package still works on the pure-Python kernel.
    ext_modules = []

setup(ext_modules=ext_modules)
