"""hermlcd - Quaternary Hermitian LCD codes and their verification harness"""

__version__ = "0.1.0"
