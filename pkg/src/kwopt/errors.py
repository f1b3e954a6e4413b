"""Exception types; the CLI maps each to its own exit code."""


class KwoptError(ValueError):
    pass


class DataError(KwoptError):
    """Malformed or inconsistent keyword data."""


class ConfigError(KwoptError):
    """Invalid account plan, budgets or run configuration."""


class StructuralError(KwoptError):
    """A keyword structure cannot be formed, e.g. too few keywords for the adgroups."""
