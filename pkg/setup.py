from setuptools import setup
from Cython.Build import cythonize

# python setup.py build_ext --inplace   (or just: pip install -e . --no-build-isolation)

setup(
    ext_modules=cythonize(
        ["src/ldpclab/_mc_cy.pyx"],
        annotate=False,
        compiler_directives={"language_level": 3},
    ),
)
