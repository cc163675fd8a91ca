import os

from setuptools import setup

ext_modules = []
if not os.environ.get("BALMPC_SKIP_CYTHON"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "balmpc.kernels._core",
                    ["src/balmpc/kernels/_core.pyx"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # Pure-python fallback is selected at import time; the compiled
        # kernel is an optional speedup.
        ext_modules = []

setup(ext_modules=ext_modules)
