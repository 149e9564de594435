class NonspecificError(Exception):
    """
    Base class of every error raised by the library.
    """
