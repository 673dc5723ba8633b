"""
Setup script for the auvdocking package.
"""

from setuptools import setup, find_packages

setup(
    name="auvdocking",
    version="0.1.0",
    description="Headless AUV optical docking simulator with acoustic and camera guidance",
    author="auvdocking developers",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    package_data={"auvdocking": ["configs/*.json"], "cli": ["static/*.txt"]},
    py_modules=["load_env"],
    install_requires=[
        "numpy>=1.24.0",
        "pandas>=2.0.0",
        "pydantic>=2.5.0",
        "typer>=0.9.0",
        "rich>=13.0.0",
        "questionary>=2.0.1",
        "tqdm>=4.66.0",
        "python-dotenv>=1.0.0",
    ],
    extras_require={"dev": ["pytest>=7.4.0"]},
    python_requires=">=3.10",
    entry_points={
        "console_scripts": [
            "auvdocking=cli.main:app",
        ],
    },
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.10",
        "Topic :: Scientific/Engineering",
    ],
)
