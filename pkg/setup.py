from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("freelike._speedups", ["src/freelike/_speedups.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # No Cython: install pure-Python only; freelike._kernels falls back.
    ext_modules = []

setup(ext_modules=ext_modules)
