from .options import Option

__all__ = ["Option"]
