"""Exact computations in generalized blob algebras and their Gelfand-Tsetlin subalgebras."""

__version__ = "0.1.0"
