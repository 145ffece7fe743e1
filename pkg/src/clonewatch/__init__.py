"""clonewatch: detect networks of hijacked (clone) journals by their archives."""

__version__ = "0.1.0"
