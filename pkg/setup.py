"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a numpy fallback is selected at
import time), so any failure here degrades gracefully to a pure build.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools.extension import Extension
    import numpy as np

    ext_modules = cythonize(
        [
            Extension(
                "layerwaves._kernels_cy",
                ["src/layerwaves/_kernels_cy.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"layerwaves: building without compiled kernels ({exc})")

setup(ext_modules=ext_modules)
