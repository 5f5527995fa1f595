"""Build script for the optional compiled kernels.

The package is fully functional without the extension (a pure NumPy/Python
fallback is selected at import time), so the extension is marked optional:
a failed compile degrades to the fallback instead of failing the install.

-ffp-contract=off keeps the compiled tracking loop bit-identical to the
pure-Python one (no fused multiply-add).
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "tbpwalk._kernels",
                ["src/tbpwalk/_kernels.pyx"],
                extra_compile_args=["-O3", "-ffp-contract=off"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
