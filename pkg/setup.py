# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import os

from setuptools import find_packages, setup

__version__ = '0.3.0'


requirements_path = os.path.join(os.path.dirname(os.path.realpath(__file__)), 'requirements.txt')
with open(requirements_path) as requirements_file:
    requirements = requirements_file.readlines()

setup(
    name='barrier-fw',
    version=__version__,
    description='Away-step Frank-Wolfe for logarithmically-homogeneous barrier objectives over polytopes',
    maintainer='barrier-fw maintainers',
    packages=find_packages(exclude=['tests*']),
    include_package_data=True,
    zip_safe=False,
    install_requires=requirements,
    entry_points={
        'console_scripts': [
            'barrier-fw = barrier_fw.cli:main',
        ],
    },
    python_requires=">=3.7",
    classifiers=[
        'Programming Language :: Python :: 3.7',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
    ],
)
