"""Build script: compiles the Monte Carlo hot-loop kernel.

The package works without the extension (a vectorized numpy fallback is
selected at import time); the compiled kernel just makes large bit-error
simulations several times faster.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "dafsim._kernel",
                ["src/dafsim/_kernel.pyx"],
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
