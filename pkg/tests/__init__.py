"""LyapEx - tests Module"""
# UTF-8 Encoding

__version__ = "1.0.0"
__author__ = "LyapEx Team"
