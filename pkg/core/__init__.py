"""
Core library: graphs, locating-dominating sets, constructions and sweeps
"""

__version__ = '1.0.0'
