"""FastAPI service wrapping the workbench."""

from .app import app, create_app

__all__ = ["app", "create_app"]
