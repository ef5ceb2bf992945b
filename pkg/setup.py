from setuptools import setup, find_packages

# Read requirements from requirements.txt
with open("requirements.txt") as f:
    requirements = f.read().splitlines()

setup(
    name="eisenstein_congruences",
    version="0.1.0",
    description="Simple congruences modulo primes for quotients of Eisenstein series.",
    long_description=open("README.md", encoding="utf-8").read(),
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "examples", "examples.*"]),
    install_requires=requirements,
    extras_require={
        "test": ["hypothesis>=6.0"],
    },
    classifiers=[
        "Programming Language :: Python :: 3",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires='>=3.9',
    include_package_data=True,
    entry_points={
        "console_scripts": [
            "eiscong=cli.main:main",
        ],
    },
)
