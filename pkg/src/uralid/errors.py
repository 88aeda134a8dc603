"""Exception types shared across the package."""


class DataError(Exception):
    """Raised for malformed or inconsistent input data (files, registries, models).

    The CLI maps this to exit code 2.
    """
