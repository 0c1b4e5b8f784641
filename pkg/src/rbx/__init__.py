"""Exact verification of Rota-Baxter operators on small matrix algebras."""

__version__ = "0.1.0"
