from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # fall back to the numpy kernel
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("epwbell._mckernel", ["src/epwbell/_mckernel.pyx"], extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
