#!/usr/bin/env python

from setuptools import setup, find_packages
setup(
    name="pyweak",
    version="1.0.0",
    packages=find_packages(exclude=["tests"]),
    scripts=['pyweak'],
    install_requires=["numpy>=1.17", "scipy"],

    description="Noise corrected density estimation and loss correction "
                "for weakly labeled data",
    long_description=open('README.md').read(),
    long_description_content_type="text/markdown",
    license="MIT",
    keywords="weak labels label noise confusion matrix density estimation "
             "activity recognition",
)
