"""Random plane maps: the CVS bijection, looptrees and a Brownian-snake oracle."""

__version__ = "0.1.0"
