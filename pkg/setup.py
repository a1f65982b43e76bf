"""Package definition for bubbletower."""
from pathlib import Path

import setuptools

this_dir = Path(__file__).parent

with open(this_dir / "requirements.txt", "r", encoding="utf-8") as requirements_file:
    requirements = [
        line.strip()
        for line in requirements_file
        if line.strip() and not line.startswith("#")
    ]

setuptools.setup(
    name="bubbletower",
    version="0.1.0",
    description="Morse-theoretic toolkit for prescribed scalar curvature on spheres",
    long_description=(this_dir / "README.md").read_text(encoding="utf-8"),
    long_description_content_type="text/markdown",
    license="AGPLv3",
    packages=setuptools.find_packages(exclude=["tests"]),
    package_data={"bubbletower": ["bubbletower.toml"]},
    python_requires=">=3.7",
    install_requires=requirements,
    entry_points={"console_scripts": ["bubbletower = bubbletower.__main__:run"]},
    classifiers=[
        "License :: OSI Approved :: GNU Affero General Public License v3",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
