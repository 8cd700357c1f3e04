"""Build script: compiles the optional dominance kernel extension.

The package works without the extension (a NumPy fallback is selected at
import time), so any compilation problem downgrades to a pure-Python build
instead of failing the install.
"""

import warnings

from setuptools import setup
from setuptools.command.build_ext import build_ext


def _extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    from setuptools import Extension

    return cythonize(
        [
            Extension(
                "prefsearch.kernels._core",
                ["src/prefsearch/kernels/_core.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )


class optional_build_ext(build_ext):
    """Allow the extension build to fail; the fallback kernel takes over."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            warnings.warn(f"skipping compiled kernels ({exc}); using pure-Python fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"skipping {ext.name} ({exc}); using pure-Python fallback")


setup(ext_modules=_extensions(), cmdclass={"build_ext": optional_build_ext})
