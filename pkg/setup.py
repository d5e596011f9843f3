from setuptools import Extension, setup
from Cython.Build import cythonize

extensions = [
    Extension("conrel._kernels", ["src/conrel/_kernels.pyx"]),
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    ),
)
