"""Build the optional compiled kernels.

The package works without them: ``hybrid_coherence.kernels`` falls back to
numpy when ``_kernels`` cannot be imported.
"""
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing or broken
            print(f"warning: compiled kernels not built ({exc}); using numpy fallback",
                  file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: failed to build {ext.name} ({exc}); using numpy fallback",
                  file=sys.stderr)


try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("hybrid_coherence._kernels", ["src/hybrid_coherence/_kernels.pyx"],
                   include_dirs=["src/hybrid_coherence"], depends=["src/hybrid_coherence/_star_step.h"],
                   # reassociation lets the mode sums vectorise; inf comparisons stay valid
                   extra_compile_args=["-O3", "-fno-math-errno", "-fno-trapping-math",
                                       "-fassociative-math", "-fno-signed-zeros"])],
        language_level=3,
    )

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
