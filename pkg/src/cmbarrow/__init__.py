"""Numerical laboratory for two-photon absorption distortions of blackbody
spectra, non-local gauge kernels on a lattice, and regularized
retarded/advanced time integrals."""

__version__ = "0.1.0"
