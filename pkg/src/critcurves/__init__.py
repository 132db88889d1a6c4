"""Critical curves of the piecewise linear map F(x, y) = (w x - y, x), w in {a, b}."""

__version__ = "0.1.0"
