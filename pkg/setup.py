"""Build script for the optional compiled kernels.

The extension is marked optional: if Cython or a C compiler is missing the
package still installs and runs on the NumPy fallback.
"""

import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover
    cythonize = None

CFLAGS = ["-O3", "-fno-math-errno"]
LDFLAGS = []
if os.environ.get("SUPPORTPOINTS_NO_OPENMP") != "1":
    CFLAGS.append("-fopenmp")
    LDFLAGS.append("-fopenmp")

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "supportpoints._kernels",
                ["src/supportpoints/_kernels.pyx"],
                extra_compile_args=CFLAGS,
                extra_link_args=LDFLAGS,
                optional=True,
            )
        ],
        compiler_directives={"language_level": 3, "embedsignature": True},
    )

setup(ext_modules=ext_modules)
