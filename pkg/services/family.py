"""
Service Family - Focus bindings, composition, restriction and provided interfaces
"""
from typing import Dict, Iterable, Iterator, Mapping, Tuple

from isa.instructions import Focus
from .interface import BasicActionInterface
from .kernels import ServiceKernel


class ServiceFamily:
    """
    Immutable finite map from foci to kernels; at most one kernel per focus
    """

    __slots__ = ("_bindings", "_hash")

    def __init__(self, bindings: Mapping[Focus, ServiceKernel] = None):
        self._bindings: Dict[Focus, ServiceKernel] = dict(bindings or {})
        self._hash = None

    def __getitem__(self, focus: Focus) -> ServiceKernel:
        return self._bindings[focus]

    def get(self, focus: Focus, default=None):
        return self._bindings.get(focus, default)

    def __contains__(self, focus: Focus) -> bool:
        return focus in self._bindings

    def __iter__(self) -> Iterator[Focus]:
        return iter(sorted(self._bindings, key=Focus.sort_key))

    def __len__(self):
        return len(self._bindings)

    def items(self) -> Iterator[Tuple[Focus, ServiceKernel]]:
        for focus in self:
            yield focus, self._bindings[focus]

    def as_dict(self) -> Dict[Focus, ServiceKernel]:
        return dict(self._bindings)

    def bind(self, focus: Focus, kernel: ServiceKernel) -> "ServiceFamily":
        """Replace or add one binding"""
        bindings = dict(self._bindings)
        bindings[focus] = kernel
        return ServiceFamily(bindings)

    def __add__(self, other: "ServiceFamily") -> "ServiceFamily":
        return compose(self, other)

    def __eq__(self, other):
        if not isinstance(other, ServiceFamily):
            return NotImplemented
        return self._bindings == other._bindings

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._bindings.items()))
        return self._hash

    def render(self) -> str:
        if not self._bindings:
            return "∅"
        return " ⊕ ".join(f"{focus.render()}.{kernel.render()}" for focus, kernel in self.items())

    def __repr__(self):
        return f"ServiceFamily({self.render()})"


EMPTY_FAMILY = ServiceFamily()


def compose(h: ServiceFamily, k: ServiceFamily) -> ServiceFamily:
    """H ⊕ K; a focus bound on both sides gets the inactive kernel of its kind"""
    bindings = h.as_dict()
    for focus, kernel in k.items():
        if focus in bindings:
            bindings[focus] = bindings[focus].inactive()
        else:
            bindings[focus] = kernel
    return ServiceFamily(bindings)


def compose_all(families: Iterable[ServiceFamily]) -> ServiceFamily:
    result = EMPTY_FAMILY
    for family in families:
        result = compose(result, family)
    return result


def restrict(foci: Iterable[Focus], h: ServiceFamily) -> ServiceFamily:
    """∂_V(H): drop every binding whose focus is in V"""
    dropped = set(foci)
    return ServiceFamily({f: u for f, u in h.items() if f not in dropped})


def provided_interface(h: ServiceFamily) -> BasicActionInterface:
    return BasicActionInterface.of({f: u.method_interface for f, u in h.items()})
