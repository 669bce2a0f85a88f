"""3D-DCT transform codec for stills, video and volumes."""

from ._dct3d import *  # noqa: F401,F403
from ._dct3d import CodecError

__all__ = [name for name in dir() if not name.startswith("_")]
