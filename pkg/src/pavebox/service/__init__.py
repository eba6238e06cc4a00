"""HTTP service wrapping the paving toolkit."""

from .app import app, create_app

__all__ = ["app", "create_app"]
