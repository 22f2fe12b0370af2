"""CMake-driven build of the _sdforge extension (pybind11 cmake pattern)."""

import os
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])
        self.source_dir = str(Path(__file__).parent.resolve())


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        out_dir = Path(self.get_ext_fullpath(ext.name)).parent.resolve()
        build_dir = Path(self.build_temp) / ext.name
        build_dir.mkdir(parents=True, exist_ok=True)
        cfg = "Release"
        args = [
            f"-DCMAKE_LIBRARY_OUTPUT_DIRECTORY={out_dir}{os.sep}",
            f"-DPYTHON_EXECUTABLE={sys.executable}",
            f"-DCMAKE_BUILD_TYPE={cfg}",
            "-DSDFORGE_BUILD_TESTS=OFF",
            "-DSDFORGE_BUILD_PYTHON=ON",
        ]
        subprocess.run(["cmake", ext.source_dir, *args], cwd=build_dir,
                       check=True)
        subprocess.run(["cmake", "--build", ".", "--target", "_sdforge"],
                       cwd=build_dir, check=True)


setup(
    packages=["sdforge"],
    package_dir={"sdforge": "python/sdforge"},
    ext_modules=[CMakeExtension("sdforge._sdforge")],
    cmdclass={"build_ext": CMakeBuild},
    zip_safe=False,
)
