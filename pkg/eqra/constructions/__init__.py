"""Concrete relation families and the Z_p^2 representation of M_m."""
