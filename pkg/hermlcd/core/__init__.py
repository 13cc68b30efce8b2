"""Core algebra: GF(4), linear codes and the qmat codec."""
