"""Structure of the functional graphs of x -> x^2 + a over prime fields."""

__version__ = "0.1.0"
