from __future__ import annotations

from setuptools import setup

try:
    from Cython.Build import cythonize
except ImportError:  # the pure-Python kernel is used instead
    ext_modules = []
else:
    ext_modules = cythonize(["src/maprec/_kernel.pyx"], language_level=3, quiet=True)

setup(ext_modules=ext_modules)
