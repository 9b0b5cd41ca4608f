import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

# The compiled kernel is an accelerator only: walkwait._kernel falls back to
# the pure-numpy twin at import time if this extension is unavailable.
extensions = [
    Extension(
        "walkwait._kernel._ckernel",
        ["src/walkwait/_kernel/_ckernel.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
)
