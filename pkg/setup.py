from setuptools import Extension, setup
from Cython.Build import cythonize

extensions = [
    Extension("piperoute._speedups", ["src/piperoute/_speedups.pyx"]),
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    ),
)
