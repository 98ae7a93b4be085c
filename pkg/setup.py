from setuptools import setup, find_packages

setup(
    name="tagclique",
    version="0.1.0",
    description="Tree-adjoining grammar toolkit for the 6k-clique parsing reduction",
    packages=find_packages(exclude=["tests", "tests.*"]),
    python_requires=">=3.8",
    install_requires=[
        "matplotlib>=3.0",
        "numpy>=1.20",
    ],
    extras_require={
        "dev": [
            "pytest>=7.0",
            "hypothesis>=6.0",
            "networkx>=2.6",
        ],
    },
    entry_points={
        "console_scripts": [
            "tagclique=tagclique.cli:main",
        ],
    },
)
