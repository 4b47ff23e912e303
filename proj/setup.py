"""Extension build for the python package.

The CMake tree remains the development build (CLI, tests, acceptance). The
wheel compiles the same core sources directly via pybind11's setup helpers so
that an editable install needs nothing beyond setuptools and pybind11.
"""

from glob import glob

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext_modules = [
    Pybind11Extension(
        "icestate._core",
        sources=sorted(glob("src/*.cpp")) + ["bindings/py_module.cpp"],
        include_dirs=["include"],
        cxx_std=20,
    ),
]

setup(ext_modules=ext_modules, cmdclass={"build_ext": build_ext})
