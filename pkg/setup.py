#!/usr/bin/env python3

"""
Installation script for the quatlink module
"""

import sys
from glob import glob

from setuptools import setup

# check for the correct version of python
major, minor = sys.version_info[0:2]
if (major, minor) < (3, 8):
    print("Sorry, quatlink requires python 3.8 or later")
    exit(1)

# while cleaning up we might not have this..
try:
    from quatlink.util.version import version_tag
except Exception:
    version_tag = 'cleaningup'

scripts = glob("clientbin/*.py")

packages = [
    'quatlink',
    'quatlink.util',
    'quatlink.algebra',
    'quatlink.comms',
    'quatlink.equalizer',
    'quatlink.experiment',
    'quatlink.client',
]

try:
    with open("LICENSE.txt") as l:
        license = l.read()
except Exception:
    license = "Could not open file LICENSE.txt"
try:
    with open("README.md") as r:
        long_description = r.read()
except Exception:
    long_description = "Unable to read README.md"

setup(
    name='quatlink',
    packages=packages,
    version=version_tag,
    keywords=['quaternion', 'equalization', 'QLMS', 'Wiener', 'MIMO',
              'Monte Carlo'],
    description="Quaternion-valued link simulation: 16-Q2AM, FIR channels,"
    " QLMS and Wiener equalizers, 2x2 MIMO",
    license=license,
    long_description=long_description,
    long_description_content_type='text/markdown',
    scripts=scripts,
    install_requires=[
        'numpy>=1.20',
        'python-dateutil',
    ],
)
