"""coblab: measurable coboundaries over irrational rotations and the skew products built from them."""

__version__ = "0.1.0"
