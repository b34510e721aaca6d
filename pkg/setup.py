"""Build script for the compiled training kernel.

The package is fully functional without the extension: a numpy fallback is
selected at import time.  The compiled kernel makes embedding training
roughly 30-80x faster, so building it is strongly recommended.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Attempt to build the kernel, but never fail the install over it."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, broken toolchain, ...
            print(f"WARNING: compiled kernel not built ({exc}); "
                  "falling back to the pure-Python training kernel")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"WARNING: could not compile {ext.name} ({exc}); "
                  "falling back to the pure-Python training kernel")


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        print("WARNING: Cython/numpy unavailable at build time; "
              "skipping the compiled kernel")
        return []
    ext = Extension(
        "simaspect.embedding._kernel",
        ["src/simaspect/embedding/_kernel.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
    )
    return cythonize(
        [ext],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
