"""Builds the optional compiled canonical-labeling kernel.

If Cython or a C compiler is unavailable the package installs without it and
falls back to the pure-Python kernel at import time.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
except ImportError:
    pass
else:
    try:
        ext_modules = cythonize(
            ["src/suncat/canon/_kernel.pyx"],
            compiler_directives={"language_level": 3},
            quiet=True,
        )
    except Exception as exc:  # no compiler, broken toolchain
        print(f"skipping compiled kernel: {exc}")

setup(ext_modules=ext_modules)
