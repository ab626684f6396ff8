"""Mixed-numerology OFDM PAPR reduction simulator"""

__version__ = "1.0.0"
