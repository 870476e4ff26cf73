#!/usr/bin/env python3
"""
Build script for gmdthresh - creates a standalone command-line executable.

Usage:
    python build.py              # Build for current platform
    python build.py clean        # Remove build artifacts
"""

import subprocess
import sys
import shutil
from pathlib import Path

ROOT = Path(__file__).parent
DIST = ROOT / "dist"
BUILD = ROOT / "build"

NAME = "gmdthresh"
IS_WINDOWS = sys.platform == "win32"

# scipy loads these lazily, PyInstaller does not see them
HIDDEN_IMPORTS = [
    "scipy.special._cdflib",
    "scipy.special._ufuncs_cxx",
    "scipy.optimize._minimize",
    "scipy.stats._distn_infrastructure",
]


def ensure_pyinstaller():
    """Ensure PyInstaller is installed."""
    try:
        import PyInstaller  # noqa: F401
    except ImportError:
        print("Installing PyInstaller...")
        subprocess.run([sys.executable, "-m", "pip", "install", "pyinstaller"], check=True)


def build():
    """Build a one-file console executable for the current platform."""
    print("\n" + "=" * 60)
    print(f"Building {NAME} for {sys.platform}...")
    print("=" * 60 + "\n")

    ensure_pyinstaller()

    cmd = [
        sys.executable, "-m", "PyInstaller",
        "--name", NAME,
        "--onefile",
        "--console",
        "--noconfirm",
        "--clean",
        "--collect-submodules=gmdthresh",
        *[f"--hidden-import={mod}" for mod in HIDDEN_IMPORTS],
        str(ROOT / "run.py"),
    ]
    subprocess.run(cmd, check=True, cwd=ROOT)

    output = DIST / (f"{NAME}.exe" if IS_WINDOWS else NAME)
    if output.exists():
        size_mb = output.stat().st_size / (1024 * 1024)
        print(f"\n✓ Build complete!")
        print(f"  Output: {output}")
        print(f"  Size: {size_mb:.1f} MB")
        print(f"\n  Try: {output} gain")
    return output


def clean():
    """Clean build artifacts."""
    print("Cleaning build artifacts...")
    for path in [DIST, BUILD, ROOT / f"{NAME}.spec"]:
        if path.exists():
            if path.is_dir():
                shutil.rmtree(path)
            else:
                path.unlink()
    print("✓ Clean complete")


def print_usage():
    print(__doc__)


if __name__ == "__main__":
    if len(sys.argv) < 2:
        build()
    else:
        cmd = sys.argv[1].lower()
        if cmd == "clean":
            clean()
        elif cmd in ("help", "-h", "--help"):
            print_usage()
        else:
            print(f"Unknown command: {cmd}")
            print_usage()
