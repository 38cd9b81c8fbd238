"""Build script for the compiled scoring kernel.

The package works without the extension (a pure-Python kernel is selected at
import time), so the Cython build is best-effort: environments without a C
toolchain still get a functional install.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "itemcert.taxonomy._scoring_cy",
                ["src/itemcert/taxonomy/_scoring_cy.pyx"],
                # -ffp-contract=off keeps float results bit-identical to the
                # pure-Python kernel (no FMA contraction).
                extra_compile_args=["-O2", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
