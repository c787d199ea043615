"""HTTP shim exposing local models behind four small JSON protocols:
/v1/embeddings, /v1/fill-mask, /v1/chat and /v1/classify, plus /healthz.

The wire formats are frozen by the JSON Schema fixtures in the
repository's schemas/ directory; clients and this server are tested
against the same files.
"""

from .config import Backends, ShimConfig, ShimError
from .app import create_app, serve

__version__ = "0.1.0"

__all__ = ["Backends", "ShimConfig", "ShimError", "create_app", "serve"]
