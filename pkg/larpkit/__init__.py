"""
larpkit - Restrictive potential-field path planning with multi-scale cell routing
"""

__version__ = "0.1.0"
