"""Build script for the optional compiled kernels.

The package works without the extension (a numpy fallback is selected at
import time), so the extension is marked optional: a missing compiler or
Cython must not break installation.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "mktinfo._kernels",
                ["src/mktinfo/_kernels.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
