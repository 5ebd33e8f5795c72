"""Prospective axion-nucleon coupling bounds from a levitated optomechanical sensor.

Pipeline: probe transmission spectrum of the cavity (``spectrum``), the
two-axion exchange force gradient between sphere and Au/Al source mass
(``axion``), thermal / linewidth detection threshold (``metrology``) and
exclusion curves of g^2/4pi against axion mass (``constraints``).
"""

__version__ = "0.1.0"
