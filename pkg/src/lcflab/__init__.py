"""Curvature toolkit for locally conformally flat metrics.

Subpackages:

* :mod:`lcflab.tensor_core` -- pointwise curvature algebra and eigensolver
* :mod:`lcflab.metric_lab` -- catalog metrics, finite-difference curvature, scans
* :mod:`lcflab.spectrum_classifier` -- exact classification of Ricci spectra
"""

__version__ = "0.1.0"
