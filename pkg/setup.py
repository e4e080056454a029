"""Build script.

The compiled digit-orbit kernel is optional: if Cython (or a C compiler)
is unavailable the package installs anyway and falls back to the pure
Python kernel at import time.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "betalab._kernel._orbit_c",
                ["src/betalab/_kernel/_orbit_c.pyx"],
                extra_compile_args=["-O2"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
