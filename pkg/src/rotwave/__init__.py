"""Bessel-zero asymptotics, spectra of L_alpha = -Laplace + alpha^2 d_theta^2 on
the unit disk, and ground states of the reduced rotating-wave equation."""

__version__ = "0.1.0"
