"""Utils package for the Forget-and-Grow lab"""
from .decorators import exit_codes
from .errors import FogError

__all__ = ['exit_codes', 'FogError']
