"""
Configuration package
"""
from .settings import ToolkitSettings, get_settings, set_settings

__all__ = ["ToolkitSettings", "get_settings", "set_settings"]
