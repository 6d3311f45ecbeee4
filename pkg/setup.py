#!/usr/bin/env python
# -*- coding: utf-8 -*-


def main():
    from setuptools import setup, find_packages

    version_dict = {}
    init_filename = "rdmat/version.py"
    exec(compile(open(init_filename, "r").read(), init_filename, "exec"),
            version_dict)

    setup(name="rdmat",
          version=version_dict["VERSION_TEXT"],
          description="Random density matrices, Wishart ensembles and "
            "mean-square Hilbert-Schmidt distances",
          long_description=open("README.rst", "rt").read(),
          author="The rdmat developers",
          license="MIT",
          classifiers=[
              "Development Status :: 3 - Alpha",
              "Intended Audience :: Science/Research",
              "License :: OSI Approved :: MIT License",
              "Natural Language :: English",
              "Programming Language :: Python",
              "Programming Language :: Python :: 3",
              "Topic :: Scientific/Engineering",
              "Topic :: Scientific/Engineering :: Mathematics",
              "Topic :: Scientific/Engineering :: Physics",
              "Topic :: Software Development :: Libraries",
              ],

          packages=find_packages(exclude=["test"]),
          python_requires="~=3.8",
          install_requires=[
              "numpy",
              "scipy",
              "mpmath",
              "pytools>=2020.4.1",
              "pytest>=2.3",
              ],
          entry_points={
              "console_scripts": ["rdmat = rdmat.cli:main"],
              },
          )


if __name__ == "__main__":
    main()
