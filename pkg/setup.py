import os

from setuptools import setup

# The exact-arithmetic kernel (ncx/_kernel.py) is additionally compiled to a C
# extension (ncx._speedups) when Cython and a C compiler are available.  The
# package works without it; ncx.kernel falls back to the pure-Python module.
# Set NCX_NO_EXT=1 to skip the extension build entirely.
ext_modules = []
if os.environ.get("NCX_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/ncx/_speedups.pyx"],
            language_level="3",
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
