from typing import Callable

FIELD_KINDS: dict[str, type] = {}


def add_field_kind(name: str) -> Callable[[type], type]:
    """Registers a caloric field class under a kind name usable in configurations"""

    def wrapper(c: type) -> type:
        if name in FIELD_KINDS:
            raise ValueError(f"Field kind '{name}' is already registered!")
        c.kind = name
        FIELD_KINDS[name] = c
        return c

    return wrapper
