"""Build script: compiles the optional Cython field kernel.

The package works without the extension (a NumPy fallback is selected at
import time), so any failure to cythonize or compile is demoted to a
warning and the build proceeds pure-Python.
"""

import warnings

from setuptools import setup
from setuptools.command.build_ext import build_ext


def _extensions():
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError as exc:
        warnings.warn(f"Cython/NumPy unavailable ({exc}); building pure-Python only")
        return []
    ext = Extension(
        "domewave._kernels._field_kernel",
        sources=["src/domewave/_kernels/_field_kernel.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level=3)


class optional_build_ext(build_ext):
    """build_ext that tolerates a missing or broken C toolchain."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            warnings.warn(f"extension build failed ({exc}); using pure-Python kernels")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"{ext.name} failed to compile ({exc}); using pure-Python kernels")


setup(ext_modules=_extensions(), cmdclass={"build_ext": optional_build_ext})
