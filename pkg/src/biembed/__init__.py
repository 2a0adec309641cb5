"""Index 3 current graphs and the triangular biembeddings they derive."""

__version__ = "0.1.0"
