#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from setuptools import setup, find_packages

setup(
    name='exact-lp-duality',
    version='1.0.0',
    description='精確有理數 LP 對偶、零和賽局與擇一定理工具',
    packages=find_packages(exclude=['tests', 'tests.*']),
    python_requires='>=3.9',
    install_requires=[
        'pandas>=1.5.0',
        'numpy>=1.20.0',
    ],
    extras_require={'test': ['pytest>=7.0.0']},
    entry_points={
        'console_scripts': [
            'exact-lp=src.api.cli:main',
        ],
    },
)
