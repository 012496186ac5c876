"""Resource caps shared by every exhaustive routine."""

import contextlib
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Limits:
    max_assignments: int = 10**9
    max_cfi_degree: int = 20
    max_treewidth_vertices: int = 32

    def __post_init__(self):
        for name in ("max_assignments", "max_cfi_degree", "max_treewidth_vertices"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


_current = Limits()


def get_limits() -> Limits:
    return _current


def set_limits(new: Limits) -> None:
    global _current
    _current = new


@contextlib.contextmanager
def limits(**overrides):
    """Temporarily override some caps: ``with limits(max_assignments=1000): ...``"""
    global _current
    old = _current
    _current = replace(old, **overrides)
    try:
        yield _current
    finally:
        _current = old
