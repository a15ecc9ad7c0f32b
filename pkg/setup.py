"""Legacy shim so `pip install -e .` works with older tooling."""

from setuptools import setup

setup()
