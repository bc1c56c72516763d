"""Build shim: compiles the Cython kernel core when the toolchain allows.

The package stays fully functional on the pure-Python fallback if the
extension cannot be built (see latticeprop._core).
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension(
            "latticeprop._core.kernels_cy",
            ["src/latticeprop/_core/kernels_cy.pyx"],
            extra_compile_args=["-O3"],
            include_dirs=[numpy.get_include()],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        )],
        language_level=3,
    )
except Exception as exc:  # pure fallback keeps the package importable
    print(f"latticeprop: building without the compiled core ({exc})")

setup(ext_modules=ext_modules)
