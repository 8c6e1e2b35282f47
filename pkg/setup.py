"""Build script for the compiled tree-reduction kernel.

The extension is optional: if Cython or a C compiler is missing the
package still installs and falls back to the NumPy kernel at import time.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "capbmo.kernels._tree",
                ["src/capbmo/kernels/_tree.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
