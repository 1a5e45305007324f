from setuptools import setup, find_packages

from src import __version__

setup(
    name="abcde-kit",
    version=__version__,
    description="Security checklist toolchain for Solidity contracts: modelling DSL, design and code checks, gas analysis, diagrams and scaffolds",
    packages=find_packages(exclude=["tests", "tests.*"]),
    python_requires=">=3.8",
    install_requires=[
        "pandas>=1.5.0",
        "plotly>=5.13.0",
        "streamlit>=1.24.0",
        "termcolor>=2.3.0",
    ],
    extras_require={"test": ["pytest>=7.0.0"]},
    entry_points={"console_scripts": ["abcde=src.cli:main"]},
)
