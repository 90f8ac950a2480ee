"""Build script.  The fixpoint kernel has an optional Cython extension; when
Cython or a C compiler is unavailable the package installs anyway and falls
back to the pure-Python kernel at import time."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "hornforge._fckernel",
                ["src/hornforge/_fckernel.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
