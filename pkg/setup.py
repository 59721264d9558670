"""Build script for the optional compiled kernel.

The package is pure Python except for fibercurve._kernels._speedups, a small
Cython module holding the scalar fibering-map kernels.  If Cython or a C
compiler is unavailable the build silently skips the extension and the
package falls back to the pure-Python kernels at import time.  Set
FIBERCURVE_NO_EXT=1 to force a pure build.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class _OptionalBuildExt(build_ext):
    """Build extensions, but never fail the whole install over them."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: compiled kernels skipped ({exc}); using pure-Python fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); using pure-Python fallback")


def _extensions():
    if os.environ.get("FIBERCURVE_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "fibercurve._kernels._speedups",
        sources=["src/fibercurve/_kernels/_speedups.pyx"],
        # FMA contraction would make mul-add chains differ from the pure
        # backend in the last ulp; both backends must emit the same floats.
        extra_compile_args=["-ffp-contract=off"],
    )
    return cythonize([ext], language_level="3")


setup(ext_modules=_extensions(), cmdclass={"build_ext": _OptionalBuildExt})
