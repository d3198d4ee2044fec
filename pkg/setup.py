"""Build the optional compiled search kernel."""

from setuptools import setup

try:
    from Cython.Build import cythonize
except ImportError:  # the pure-Python kernel is used instead
    ext_modules = []
else:
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("iforge._search_ext", ["src/iforge/_search_ext.pyx"], extra_compile_args=["-O3"])],
        compiler_directives=dict(language_level="3", boundscheck=False, wraparound=False),
    )

setup(ext_modules=ext_modules)
