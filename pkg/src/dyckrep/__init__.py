"""Calibrated representations of the double Dyck path algebra from weighted posets."""

__version__ = "0.1.0"
