"""Exact envelopes, semicontinuity classification, and certified Darboux and
Lebesgue integrals for piecewise polynomials with countable modifications."""
