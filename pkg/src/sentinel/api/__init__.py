"""HTTP JSON API over the running engine."""

from sentinel.api.app import create_app

__all__ = ["create_app"]
