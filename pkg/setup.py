from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/qalab/kernels/_mc_cy.pyx"],
        language_level=3,
        compiler_directives={"boundscheck": False, "wraparound": False},
    )
except ImportError:
    # Pure-python kernel fallback is selected at import time; the package
    # works without the compiled extension.
    ext_modules = []

setup(ext_modules=ext_modules)
