"""Build script: compiles the optional search-kernel extension.

The package is fully functional without the extension (a pure-Python
twin of every kernel ships in partcert._kernels.pure); the extension is
marked optional so installation never fails on exotic toolchains.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext = Extension(
        "partcert._kernels._fast",
        sources=["src/partcert/_kernels/_fast.pyx"],
    )
    ext.optional = True
    ext_modules = cythonize([ext], language_level="3")
except ImportError:
    pass

setup(ext_modules=ext_modules)
