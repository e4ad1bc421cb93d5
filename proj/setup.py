"""Builds the CMake project and places the pybind11 module inside the
eocavity package. Editable installs: pip install -e . --no-build-isolation"""

import os
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name: str):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext: CMakeExtension) -> None:
        source_dir = Path(__file__).resolve().parent
        ext_path = Path(self.get_ext_fullpath(ext.name)).resolve()
        ext_path.parent.mkdir(parents=True, exist_ok=True)

        import pybind11

        build_dir = Path(self.build_temp).resolve() / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)
        cfg = "Debug" if self.debug else "Release"
        cmake_args = [
            f"-DCMAKE_BUILD_TYPE={cfg}",
            "-DEOCAVITY_BUILD_PYTHON=ON",
            "-DEOCAVITY_BUILD_TESTS=OFF",
            f"-DPython_EXECUTABLE={sys.executable}",
            f"-Dpybind11_DIR={pybind11.get_cmake_dir()}",
            f"-DCMAKE_LIBRARY_OUTPUT_DIRECTORY={ext_path.parent}",
        ]
        env = os.environ.copy()
        subprocess.run(
            ["cmake", "-S", str(source_dir), "-B", str(build_dir)] + cmake_args,
            check=True,
            env=env,
        )
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_eocavity", "-j"],
            check=True,
            env=env,
        )


setup(
    ext_modules=[CMakeExtension("eocavity._eocavity")],
    cmdclass={"build_ext": CMakeBuild},
)
