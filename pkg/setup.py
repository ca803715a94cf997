from setuptools import Extension, setup

# The compiled quad-float kernel is optional: the package falls back to the
# pure-Python codec in rawarray._kernels.pure when the extension is missing.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "rawarray._kernels._quad",
                ["src/rawarray/_kernels/_quad.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
