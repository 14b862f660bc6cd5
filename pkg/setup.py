import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the compiled Jacobi kernel if possible; the pure-Python
    fallback is selected at import time when the extension is missing."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            warnings.warn(f"compiled extension skipped ({exc}); "
                          "falling back to the pure-Python kernel")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"building {ext.name} failed ({exc}); "
                          "falling back to the pure-Python kernel")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        warnings.warn("Cython unavailable; compiled kernel not built")
        return []
    ext = Extension(
        "specdescent._jacobi",
        ["src/specdescent/_jacobi.pyx"],
        extra_compile_args=["-O3", "-ffast-math", "-funroll-loops"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
