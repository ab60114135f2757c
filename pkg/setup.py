"""Build the optional Lyndon kernel extension; the package works without it."""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # no Cython: pure-Python kernel only
    ext_modules = []
else:
    ext_modules = cythonize([Extension("artifact._lyndon_ext", ["src/artifact/_lyndon_ext.pyx"])],
                            compiler_directives={"language_level": "3"})

setup(ext_modules=ext_modules)
