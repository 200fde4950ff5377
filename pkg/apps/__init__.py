"""LyapEx - apps Module"""
# Lyapunov-Spektren mit variablen Schrittweiten und gewichteten Mitteln

__version__ = "1.0.0"
__author__ = "LyapEx Team"
