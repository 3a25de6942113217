"""Setup script for the eqra project."""

from setuptools import setup, find_packages

# Read the README file
with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()


def read_requirements(section):
    """Pinned lines under the ``# <section>`` heading of requirements.txt."""
    requirements, current = [], None
    with open("requirements.txt", "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line.startswith("#"):
                current = line.lstrip("#").strip()
            elif line and current == section:
                requirements.append(line)
    return requirements


setup(
    name="eqra",
    version="0.1.0",
    author="eqra developers",
    description="Relation-algebra closures, equivalence lattices and machine-checked certificates for M_n representations",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.10",
    install_requires=read_requirements("Runtime"),
    extras_require={"dev": read_requirements("Development")},
    entry_points={
        "console_scripts": [
            "eqra=eqra.main:main",
        ],
    },
    include_package_data=True,
    zip_safe=False,
)
