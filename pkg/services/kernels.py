"""
Service Kernels - Single bit registers and two cell 1D Boolean arrays
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass, replace
from typing import FrozenSet, Iterable, Optional, Tuple

from errors import ServiceError
from isa.instructions import A16, DIRECT, M16, Method

STAR = None  # content of the inactive register br(*)


class ServiceKernel(ABC):
    """
    Abstract interface for the state machines a focus can be bound to
    """

    @property
    @abstractmethod
    def method_interface(self) -> FrozenSet[Method]:
        """Methods this kernel admits; never changes under apply"""

    @property
    @abstractmethod
    def is_inactive(self) -> bool:
        """True for br(*) and the degenerate array"""

    @abstractmethod
    def apply(self, method: Method) -> Tuple[int, "ServiceKernel"]:
        """Reply and successor kernel; raises ServiceError"""

    @abstractmethod
    def with_methods(self, methods: Iterable[Method]) -> "ServiceKernel":
        """Same state with the admitted method set replaced"""

    @abstractmethod
    def inactive(self) -> "ServiceKernel":
        """Canonical inactive kernel of this kind"""

    @abstractmethod
    def render(self) -> str:
        pass

    def _admit(self, method: Method):
        if self.is_inactive:
            raise ServiceError(f"method {method} on inactive kernel {self.render()}")
        if method not in self.method_interface:
            raise ServiceError(f"method {method} outside the interface of {self.render()}")


@dataclass(frozen=True)
class RegisterKernel(ServiceKernel):
    content: Optional[int] = 0
    methods: FrozenSet[Method] = frozenset(M16)

    def __post_init__(self):
        if self.content not in (0, 1, STAR):
            raise ServiceError(f"register content must be 0, 1 or *, got {self.content!r}")
        object.__setattr__(self, "methods", frozenset(self.methods))
        if any(m.target != DIRECT for m in self.methods):
            raise ServiceError("index bit methods on a register")

    @property
    def method_interface(self) -> FrozenSet[Method]:
        return self.methods

    @property
    def is_inactive(self) -> bool:
        return self.content is STAR

    def apply(self, method: Method) -> Tuple[int, "RegisterKernel"]:
        self._admit(method)
        reply, new = method.apply_bit(self.content)
        return reply, replace(self, content=new)

    def with_methods(self, methods: Iterable[Method]) -> "RegisterKernel":
        return replace(self, methods=frozenset(methods))

    def inactive(self) -> "RegisterKernel":
        return INACTIVE_REGISTER

    def render(self) -> str:
        body = "*" if self.content is STAR else str(self.content)
        suffix = "" if self.methods == frozenset(M16) else _methods_suffix(self.methods)
        return f"br({body}){suffix}"


@dataclass(frozen=True)
class Array1DKernel(ServiceKernel):
    """
    Two single bit registers and an index bit; direct methods act on the
    indexed cell, a1: methods on the index bit itself
    """
    index_bit: int = 0
    cell0: int = 0
    cell1: int = 0
    methods: FrozenSet[Method] = frozenset(M16 + A16)
    degenerate: bool = False

    def __post_init__(self):
        for name in ("index_bit", "cell0", "cell1"):
            if getattr(self, name) not in (0, 1):
                raise ServiceError(f"array {name} must be a bit")
        object.__setattr__(self, "methods", frozenset(self.methods))

    @property
    def method_interface(self) -> FrozenSet[Method]:
        return self.methods

    @property
    def is_inactive(self) -> bool:
        return self.degenerate

    @property
    def cells(self) -> Tuple[int, int]:
        return (self.cell0, self.cell1)

    def apply(self, method: Method) -> Tuple[int, "Array1DKernel"]:
        self._admit(method)
        if method.target != DIRECT:
            reply, new = method.apply_bit(self.index_bit)
            return reply, replace(self, index_bit=new)
        cell = "cell1" if self.index_bit else "cell0"
        reply, new = method.apply_bit(getattr(self, cell))
        return reply, replace(self, **{cell: new})

    def with_methods(self, methods: Iterable[Method]) -> "Array1DKernel":
        return replace(self, methods=frozenset(methods))

    def inactive(self) -> "Array1DKernel":
        return INACTIVE_ARRAY

    def render(self) -> str:
        if self.degenerate:
            return "arr(*)"
        suffix = "" if self.methods == frozenset(M16 + A16) else _methods_suffix(self.methods)
        return f"arr(i={self.index_bit},c0={self.cell0},c1={self.cell1}){suffix}"


def _methods_suffix(methods: FrozenSet[Method]) -> str:
    names = " ".join(m.render() for m in sorted(methods, key=Method.sort_key))
    return f"[{names}]"


INACTIVE_REGISTER = RegisterKernel(STAR, frozenset())
INACTIVE_ARRAY = Array1DKernel(0, 0, 0, frozenset(), degenerate=True)


def br(content: Optional[int], methods: Iterable[Method] = M16) -> RegisterKernel:
    if content is STAR:
        return INACTIVE_REGISTER
    return RegisterKernel(content, frozenset(methods))


def apply_method(kernel: ServiceKernel, method: Method) -> Tuple[int, ServiceKernel]:
    return kernel.apply(method)


def restrict_methods(methods: Iterable[Method], kernel: ServiceKernel) -> ServiceKernel:
    """
    Kernel admitting exactly the given methods; the empty set yields the inactive kernel
    """
    methods = frozenset(methods)
    if not methods or kernel.is_inactive:
        return kernel.inactive()
    return kernel.with_methods(methods)
