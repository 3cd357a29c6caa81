"""HTTP service exposing the toolchain to remote clients and the CLI."""

from .app import app, create_app

__all__ = ["app", "create_app"]
