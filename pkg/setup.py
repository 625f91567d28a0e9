"""Build hook for the optional compiled DP kernels.

The package is pure Python except for gazemap.kernels._dp, a Cython
extension for the dynamic-programming inner loops. The extension is
marked optional: if Cython or a C compiler is unavailable the install
still succeeds and the pure-Python kernels are used at import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    extensions = []
else:
    extensions = cythonize(
        [
            Extension(
                "gazemap.kernels._dp",
                ["src/gazemap/kernels/_dp.pyx"],
                optional=True,
            )
        ],
        language_level=3,
    )

setup(ext_modules=extensions)
