"""Utility modules."""
from .logger import setup_logger, configure_from

__all__ = ["setup_logger", "configure_from"]
