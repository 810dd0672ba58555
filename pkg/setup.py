"""Build script.

The package is pure Python; a small optional Cython extension
(``khext.algebra._snf_c``) accelerates Smith normal form on matrices whose
entries fit machine words.  The build degrades gracefully: if Cython is
missing or the compiler fails, the wheel is built without the extension and
the library falls back to the pure-Python kernel at import time.

Set ``KHEXT_NO_EXT=1`` to skip the extension build entirely.
"""

import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """A build_ext that treats any compiler failure as non-fatal."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - deliberate: best effort
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        import sys

        print(
            "warning: building the optional _snf_c extension failed "
            f"({exc!r}); falling back to the pure-Python kernel",
            file=sys.stderr,
        )


ext_modules = []
cmdclass = {}
if not os.environ.get("KHEXT_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/khext/algebra/_snf_c.pyx"],
            language_level=3,
        )
        cmdclass["build_ext"] = optional_build_ext
    except ImportError:
        pass

setup(ext_modules=ext_modules, cmdclass=cmdclass)
