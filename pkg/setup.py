"""Builds the optional compiled histogram kernel.

The package works without the extension (a pure-Python fallback is selected
at import time), so a failed build here should not block installation.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "emopalette.kernel._histogram",
                ["src/emopalette/kernel/_histogram.pyx"],
                include_dirs=[numpy.get_include()],
                # -ffp-contract=off keeps double arithmetic bit-identical to
                # the pure-Python fallback (no FMA contraction).
                extra_compile_args=["-O2", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
