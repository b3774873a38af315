"""Word problems of finitely generated groups of computable permutations."""

__version__ = "0.1.0"
