"""Build script: compiles the optional annealing kernel extension.

The extension is a performance twin of teamform._engine.engine_py; the
package works without it.  Set TEAMFORM_PURE_PYTHON=1 to skip the build.

Note: no -march/-ffast-math flags.  The compiled kernel must reproduce the
pure-Python engine bit for bit, which rules out FMA contraction and
reassociation.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the extension if possible; fall back to pure Python otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler or toolchain missing
            print(f"warning: extension build skipped ({exc}); using pure-Python engine")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); using pure-Python engine")


def extensions():
    if os.environ.get("TEAMFORM_PURE_PYTHON") == "1":
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("warning: Cython not available; using pure-Python engine")
        return []
    ext = Extension(
        "teamform._engine._speedups",
        ["src/teamform/_engine/_speedups.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize(
        [ext],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
