"""Desk-scale laboratory for the communication complexity of quantum authentication protocols."""

__version__ = "0.1.0"
