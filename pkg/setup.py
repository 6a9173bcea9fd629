#!/usr/bin/env python3
"""
Setup script for the QSD Engine
"""

import os

from setuptools import find_packages, setup

here = os.path.dirname(os.path.abspath(__file__))


def read_requirements():
    """Runtime requirements, test tooling excluded"""
    with open(os.path.join(here, "qsd_engine", "requirements.txt")) as f:
        lines = [line.strip() for line in f]
    return [line for line in lines if line and not line.startswith("#") and not line.startswith("pytest")]


setup(
    name="qsd-engine",
    version="1.0.0",
    description="Subspace Hamiltonian construction, perturbative subspace selection and eigensolving",
    packages=find_packages(include=["qsd_engine", "qsd_engine.*"]),
    package_data={"qsd_engine": ["requirements.txt"]},
    python_requires=">=3.10",
    install_requires=read_requirements(),
    extras_require={"test": ["pytest>=7.4"]},
    entry_points={"console_scripts": ["qsd=qsd_engine.cli:main"]},
)
