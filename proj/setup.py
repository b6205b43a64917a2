import os
import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    """Drive the CMake build for the _core extension and place the result
    both in the wheel staging area and in the source package directory so
    editable installs pick it up."""

    def run(self):
        root = Path(__file__).resolve().parent
        build_dir = root / "build" / "pip"
        build_dir.mkdir(parents=True, exist_ok=True)

        cfg_cmd = [
            "cmake",
            "-S", str(root),
            "-B", str(build_dir),
            "-DCMAKE_BUILD_TYPE=Release",
            f"-DPython3_EXECUTABLE={sys.executable}",
        ]
        subprocess.check_call(cfg_cmd)
        jobs = str(os.cpu_count() or 1)
        subprocess.check_call(
            ["cmake", "--build", str(build_dir), "--target", "_core", "-j", jobs]
        )

        built = sorted(build_dir.glob("_core.*.so")) or sorted(build_dir.glob("_core.so"))
        if not built:
            raise RuntimeError("CMake build did not produce the _core extension")
        so = built[-1]

        pkg_src = root / "python" / "spincant"
        shutil.copy2(so, pkg_src / so.name)

        staged = Path(self.build_lib) / "spincant"
        staged.mkdir(parents=True, exist_ok=True)
        shutil.copy2(so, staged / so.name)


setup(
    ext_modules=[CMakeExtension("spincant._core")],
    cmdclass={"build_ext": CMakeBuild},
)
