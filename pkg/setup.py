"""Build script.

The compiled kernel extension is optional: if Cython (or a C compiler) is
unavailable the package installs anyway and falls back to the pure numpy
kernels at import time.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/probclone/_kernels.pyx"],
        language_level=3,
    )
except Exception:
    pass

setup(ext_modules=ext_modules)
