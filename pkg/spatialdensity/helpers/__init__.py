from . import rng
from .filemanager import DefaultFileManager, FileManager
from .json_encoder import NumpyJsonEncoder
from .logger import Logger

__all__ = [
    "rng",
    "DefaultFileManager",
    "FileManager",
    "NumpyJsonEncoder",
    "Logger",
]
