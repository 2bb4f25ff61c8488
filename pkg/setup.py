"""Build script for the optional compiled tick-loop kernel.

The package is fully functional without the extension: headnav.core falls
back to the pure-Python reference loop when the compiled module cannot be
imported. -ffp-contract=off keeps the C arithmetic bit-identical to the
reference (no FMA contraction).
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
                "headnav.core._compiled",
                ["src/headnav/core/_compiled.pyx"],
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
