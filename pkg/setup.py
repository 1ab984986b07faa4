"""Build the optional compiled kernels.

``python setup.py build_ext --inplace`` (or an editable install) compiles
``sphereloc._ckernels``.  If Cython or a C compiler is missing the package
still installs and falls back to ``sphereloc._pykernels`` at import time.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "sphereloc._ckernels",
                ["src/sphereloc/_ckernels.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
