"""Build script for the optional compiled kernels.

The package works without the extension (a NumPy fallback is selected at
import time); the build therefore tolerates a missing compiler and falls
back to a pure-Python install instead of failing.
"""

import numpy as np
from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Skip the extension (with a warning) when compilation is impossible."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing or broken toolchain
            print(f"WARNING: compiled kernels skipped ({exc}); "
                  "corpusforge will use the pure NumPy fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"WARNING: building {ext.name} failed ({exc}); "
                  "corpusforge will use the pure NumPy fallback")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("WARNING: Cython not available; skipping compiled kernels")
        return []
    from setuptools import Extension

    ext = Extension(
        "corpusforge._kernels._native",
        ["src/corpusforge/_kernels/_native.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
