"""
locdom - locating-dominating sets in subcubic graphs
"""

__version__ = '1.0.0'
