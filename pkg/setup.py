"""LyapEx - Paketdefinition"""

from pathlib import Path

from setuptools import find_packages, setup

REQUIREMENTS = [
    line.split("#", 1)[0].strip()
    for line in Path(__file__).with_name("requirements.txt").read_text(encoding="utf-8").splitlines()
    if line.split("#", 1)[0].strip() and not line.startswith("pytest")
]

setup(
    name="lyapex",
    version="1.0.0",
    description="Lyapunov spectra via Benettin's algorithm with varying stepsizes and weighted averages",
    author="LyapEx Team",
    python_requires=">=3.10",
    packages=find_packages(include=["apps", "apps.*"]),
    install_requires=REQUIREMENTS,
    entry_points={"console_scripts": ["lyapex=apps.cli.main:main"]},
)
