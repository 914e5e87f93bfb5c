import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    USE_CYTHON = True
except ImportError:
    USE_CYTHON = False

# EKRW_PURE=1 skips the compiled kernel entirely
SKIP_EXT = os.environ.get("EKRW_PURE", "") not in ("", "0")

extensions = []
if USE_CYTHON and not SKIP_EXT:
    extensions = cythonize(
        [Extension("ekrw.search._core", ["src/ekrw/search/_core.pyx"], extra_compile_args=["-O3"], optional=True)],
        language_level=3,
    )

setup(ext_modules=extensions)
