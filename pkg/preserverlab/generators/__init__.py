"""Example-map generators."""

from preserverlab.generators.base import BaseGenerator, Instance
from preserverlab.generators.factory import get_generator, get_registered_generators, register_generator

__all__ = [
    "BaseGenerator",
    "Instance",
    "get_generator",
    "get_registered_generators",
    "register_generator",
]
