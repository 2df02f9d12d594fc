#!/usr/bin/env python
# encoding: utf-8
"""
Packaging for heisenlab
"""
from setuptools import setup
import io

setup(
    name="heisenlab",
    python_requires=">=3.8",
    version="1.0.0",
    package_dir={"heisenlab": "heisenlab"},
    packages=["heisenlab", "heisenlab.utilities", "heisenlab.data_classes"],
    install_requires=[
        "typing_extensions",
        "numpy>=1.21",
        "scipy>=1.7",
        "matplotlib>=3.5",
    ],
    entry_points={"console_scripts": ["heisenlab=heisenlab.cli:main"]},
    license="LICENSE",
    description=(
        "Numerical experiments for variable exponent Hardy spaces and "
        "generalized Riesz operators on the Heisenberg group."
    ),
    long_description=io.open("README.md", "r", encoding="utf-8").read(),
    long_description_content_type="text/markdown",
)
