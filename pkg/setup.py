import os

from setuptools import setup

ext_modules = []
if not os.environ.get("OT_SEMIASSIGN_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        # Pure-Python fallback is selected at import time.
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "ot_semiassign._kernels",
                    ["src/ot_semiassign/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
