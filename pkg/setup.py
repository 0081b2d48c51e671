#!/usr/bin/env python

from setuptools import setup

exec(open('qcthermo/version.py').read())

setup(
    name='qcthermo',
    version=__version__,
    description="Work, convertibility and hypothesis tests for "
                "quasiclassical states in grand-potential resource theories",
    install_requires=[
        "numpy",
        "scipy",
        "six",
    ],
    entry_points={
        "console_scripts": ["qcthermo=qcthermo.cli:main"],
    },
    classifiers=[
        "Development Status :: 4 - Beta",
        "License :: OSI Approved :: Mozilla Public License 2.0 (MPL 2.0)",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    packages=["qcthermo"],
)
