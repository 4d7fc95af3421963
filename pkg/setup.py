from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/ahodge/_kernel/_fast.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # No Cython available: install the pure-Python kernel only.
    pass

setup(ext_modules=ext_modules)
