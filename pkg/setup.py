import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

# The compiled kernels are optional: if the extension cannot be built the
# package still installs and falls back to the pure-Python kernels.
# -ffp-contract=off keeps the C arithmetic free of FMA contraction so both
# backends follow the same IEEE operation sequence.
ext = Extension(
    "qctx._kernels._core",
    ["src/qctx/_kernels/_core.pyx"],
    include_dirs=[np.get_include()],
    extra_compile_args=["-O2", "-ffp-contract=off"],
    optional=True,
)

setup(ext_modules=cythonize([ext], language_level=3) if cythonize else [])
