"""Generator registry."""

from typing import Callable, Type

from preserverlab.core.exceptions import BadParameter
from preserverlab.generators.base import BaseGenerator

# Registry of example-map generators
_generators: dict[str, Type[BaseGenerator]] = {}


def register_generator(name: str) -> Callable[[Type[BaseGenerator]], Type[BaseGenerator]]:
    """Decorator to register a generator under a CLI name."""

    def decorator(cls: Type[BaseGenerator]) -> Type[BaseGenerator]:
        _generators[name] = cls
        cls.name = name
        return cls

    return decorator


def get_generator(name: str) -> BaseGenerator:
    """
    Get a generator instance by name.

    Args:
        name: Generator name (e.g., 'complement', 'dilation')

    Returns:
        Generator instance

    Raises:
        BadParameter: If no generator is registered under the name
    """
    # Import builtins to ensure registration
    from preserverlab.generators import builtin  # noqa: F401

    if name not in _generators:
        raise BadParameter("generator", name, f"one of {sorted(_generators)}")
    return _generators[name]()


def get_registered_generators() -> list[str]:
    """Get the registered generator names in registration order."""
    from preserverlab.generators import builtin  # noqa: F401

    return list(_generators.keys())
