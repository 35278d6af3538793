"""Builds the optional compiled kernel extension.

The package runs without it (the numpy backend is selected at import);
the build degrades gracefully when Cython or a C compiler is missing.
"""

import sys

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "dqnlab.kernels._ckernels",
                ["src/dqnlab/kernels/_ckernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    print("Cython unavailable; installing dqnlab without the compiled kernels", file=sys.stderr)

setup(ext_modules=ext_modules)
