"""Valuation adjustments with regulatory capital (KVA) for interest rate swap books"""

__version__ = "0.1.0"
