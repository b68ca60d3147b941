"""Machine-checkable identities between trigonometric series and their finite-form sums."""

__version__ = "0.1.0"
