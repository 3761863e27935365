"""HTTP/JSON API over an ingested workspace."""

from faultflow.service.app import create_app

__all__ = ["create_app"]
