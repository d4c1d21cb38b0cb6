"""autoplex: automatic complexity of k-bonacci words."""

__version__ = "1.0.0"
