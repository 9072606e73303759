"""Build script: compiles the optional fast kernels.

The package works without the extension (a pure-Python fallback is selected at
import time), so a missing compiler or Cython only costs speed, not features.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "savlpso._kernels",
                ["src/savlpso/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                # -ffp-contract=off: the pure-Python fallback must be
                # bit-identical to the compiled kernels, so the compiler may
                # not fuse multiply-adds.
                extra_compile_args=["-O3", "-ffp-contract=off"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
