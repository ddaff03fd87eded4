"""HTTP platform: app publishing, augmentation requests, authoring sessions."""

from .app import create_app
from .config import ServiceConfig
from .store import DirectoryStore

__all__ = ["ServiceConfig", "DirectoryStore", "create_app"]
