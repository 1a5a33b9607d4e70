"""Build script: compiles the optional Cython kernel extension.

The package is fully functional without the extension (a numpy fallback is
selected at import time), so compilation failures only cost speed.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the extension if possible, otherwise warn and continue."""

    def run(self):
        try:
            build_ext.run(self)
        except Exception as exc:  # missing compiler, broken toolchain
            print(f"WARNING: skipping compiled kernels ({exc}); "
                  "falling back to pure numpy at runtime")

    def build_extension(self, ext):
        try:
            build_ext.build_extension(self, ext)
        except Exception as exc:
            print(f"WARNING: could not build {ext.name} ({exc}); "
                  "falling back to pure numpy at runtime")


extensions = [
    Extension(
        "featsel._kernels._core",
        sources=["src/featsel/_kernels/_core.pyx"],
        extra_compile_args=["-O3"],
    )
]

try:
    from Cython.Build import cythonize
    ext_modules = cythonize(extensions, language_level=3)
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
