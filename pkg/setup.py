import numpy as np
from setuptools import Extension, setup

# The compiled kernels are optional: if Cython (or a C compiler) is not
# available the package falls back to the numpy reference kernels at import.
try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "sympeig._kernels._core",
                sources=["src/sympeig/_kernels/_core.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
