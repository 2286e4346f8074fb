"""
pminet: stock market dependency networks from partial mutual information.

This package reconstructs dependency networks of a stock market from daily
price series. Similarities between instruments are measured with Pearson
correlation, partial correlation, mutual information and partial mutual
information; the resulting matrices are filtered into minimal spanning trees
and planar maximally filtered graphs, and the networks are compared at node,
cluster and network level.
"""

__version__ = "0.1.0"

__all__ = ["__version__"]
