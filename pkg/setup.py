# pylint: disable=missing-module-docstring
import pathlib
from setuptools import find_namespace_packages, setup

install_requires = [
    'numpy>=1.26.1',
    'pandas>=2.1.1',
    'reportlab>=3.6.13',
    'scipy>=1.11.3',
]

setup(
    name="omalib",
    version="0.1.0a2",
    description=(
        "Operational modal analysis of suspension-bridge scale-model records: "
        "spectral peaks, covariance-driven SSI, log-decrement damping and "
        "full-scale similitude."
    ),
    long_description=(pathlib.Path(__file__).parent / 'README.md').read_text(encoding='utf-8'),
    long_description_content_type='text/markdown',
    packages=find_namespace_packages(include=['omalib', 'omalib.*']),
    package_data={'': ['resource/*.json']},
    include_package_data=True,
    install_requires=install_requires,
    extras_require={'tests': ['pytest>=7.4.3']},
    entry_points={'console_scripts': ['omalib=omalib.cli.main:main']},
    python_requires='>=3.10',
    classifiers=[
        "Development Status :: 2 - Pre-Alpha",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering",
    ],
)
