"""Toolkit for parameter partial orders on gamma / negative binomial
convolutions and numeric certification of the implied convolution and
usual stochastic orders."""

from stochord.verdicts import Status, OrderVerdict

__all__ = ["Status", "OrderVerdict"]
__version__ = "0.1.0"
