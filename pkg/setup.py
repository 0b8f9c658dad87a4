"""Build script: compiles the optional counting kernels.

The extension is a pure speedup; if Cython or a C compiler is missing the
package installs without it and pencilzeta.kernels falls back to the
vectorized numpy implementation at import time.
"""
from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "pencilzeta._kernels",
                ["src/pencilzeta/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover
    import sys

    print(f"pencilzeta: building without compiled kernels ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
