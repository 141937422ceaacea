import numpy as np


def temp_for(n_bar, omega=1.0):
    """Temperature (natural units) at which the Bose occupation equals n_bar."""
    return omega / np.log1p(1.0 / n_bar)
