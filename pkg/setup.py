import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "wavebench._kernels._viterbi_cy",
                ["src/wavebench/_kernels/_viterbi_cy.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    # Source install without Cython: the package falls back to the
    # pure-Python kernel at import time.
    extensions = []

setup(ext_modules=extensions)
