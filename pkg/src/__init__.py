"""coarsekit: desk-scale coarse geometry on finite metric windows."""

__version__ = '0.1.0'
