"""
Service layer: kernels, families and basic action interfaces
"""
from .interface import EMPTY_INTERFACE, BasicActionInterface, parse_interface, subinterface
from .kernels import (
    INACTIVE_ARRAY, INACTIVE_REGISTER, STAR,
    Array1DKernel, RegisterKernel, ServiceKernel, apply_method, br, restrict_methods,
)
from .family import EMPTY_FAMILY, ServiceFamily, compose, compose_all, provided_interface, restrict
from .literals import parse_family, render_family

__all__ = [
    'EMPTY_INTERFACE', 'BasicActionInterface', 'parse_interface', 'subinterface',
    'INACTIVE_ARRAY', 'INACTIVE_REGISTER', 'STAR',
    'Array1DKernel', 'RegisterKernel', 'ServiceKernel', 'apply_method', 'br', 'restrict_methods',
    'EMPTY_FAMILY', 'ServiceFamily', 'compose', 'compose_all', 'provided_interface', 'restrict',
    'parse_family', 'render_family',
]
