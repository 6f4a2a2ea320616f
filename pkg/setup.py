"""Build script for the optional compiled kernel extension.

The package is fully functional without the extension: canodual.kernels
falls back to the numpy reference implementation when the compiled module
is absent (or when CANODUAL_PURE_PYTHON is set).
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = [
    Extension(
        "canodual.kernels._native",
        ["src/canodual/kernels/_native.pyx"],
        extra_compile_args=["-O3"],
        optional=True,
    )
]

setup(
    ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"})
    if cythonize is not None
    else [],
)
