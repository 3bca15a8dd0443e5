"""Exact construction and classification of palindromic multidimensional continued fractions"""

from ._settings import settings

__version__ = '0.1.0'
