"""Spectral and Yee runs of the 2-D periodic plane wave, printed side by side."""

from schrmaxwell.runner.sweep import format_comparison, periodic_comparison

print(format_comparison(periodic_comparison(t_final=1.0)))
