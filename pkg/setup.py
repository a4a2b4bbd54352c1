from setuptools import Extension, setup
from Cython.Build import cythonize

# -ffp-contract=off: the pure-Python fallback must produce bit-identical
# doubles, so the C side may not fuse multiply-adds.
ext_modules = [
    Extension(
        "semtoken.kernels._native",
        ["src/semtoken/kernels/_native.pyx"],
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
]

setup(
    ext_modules=cythonize(ext_modules, compiler_directives={"language_level": "3"}),
)
