"""HTTP service exposing the core assessment functions."""

from .app import create_app

__all__ = ["create_app"]
