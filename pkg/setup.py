"""Build script: compiles the hot-kernel extension when Cython is available.

Without Cython (or a C compiler) the package still installs and falls back
to the numpy kernels at import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "chaosboot._kernels",
                ["src/chaosboot/_kernels.pyx"],
                # -ffp-contract=off keeps the compiled lane bit-compatible
                # with the numpy fallback (no FMA contraction)
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
