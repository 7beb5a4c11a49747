#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""stochmapf: online multi-agent path finding with learned stochastic delays."""

import pathlib

from setuptools import find_packages, setup
from setuptools_scm import get_version

ROOT = pathlib.Path(__file__).resolve().parent


def _read(name, fallback):
    try:
        return (ROOT / name).read_text(encoding="utf-8")
    except OSError:
        return fallback


def parse_requirements(filename):
    """Non-comment lines of a pip requirements file."""
    lines = (line.strip() for line in _read(filename, "").splitlines())
    return [line for line in lines if line and not line.startswith("#")]


# ======================================================================================
# Sphinx (python setup.py build_sphinx)
# ======================================================================================

CMDSPHINX = {
    "build_sphinx": {
        "project": ("setup.py", "stochmapf"),
        "version": ("setup.py", get_version(root=str(ROOT), fallback_version="0.0.0")),
        "release": ("setup.py", ""),
        "source_dir": ("setup.py", "docs"),
    }
}


setup(
    name="stochmapf",
    description="Online multi-agent path finding on weighted graphs with gamma delays",
    long_description=_read("README.md", "See README.md")
    + "\n\n"
    + _read("HISTORY.md", "See HISTORY.md"),
    long_description_content_type="text/markdown",
    use_scm_version={
        "root": str(ROOT),
        "write_to": str(ROOT / "src" / "stochmapf" / "_theversion.py"),
        "fallback_version": "0.0.0",
    },
    license="LGPL-3.0",
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    zip_safe=False,
    keywords="mapf cbs multi-agent path-finding gamma-delays",
    command_options=CMDSPHINX,
    entry_points={"console_scripts": ["stochmapf=stochmapf.cli:main"]},
    python_requires=">=3.9",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: GNU Lesser General Public "
        "License v3 or later (LGPLv3+)",
        "Operating System :: POSIX :: Linux",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Artificial Intelligence",
    ],
    install_requires=parse_requirements("requirements.txt"),
    tests_require=["pytest>=6.0", "pytest-cov"],
)
