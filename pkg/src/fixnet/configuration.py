"""
Configurations: bit vectors over an ordered vertex set.
"""

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, Sequence, Tuple

from .errors import ArgumentError


@dataclass(frozen=True)
class Configuration:
    """
    Assignment of one bit to each vertex of ``domain``.

    Bit ``k`` of ``bits`` holds the value of ``domain[k]``. For configurations
    over the full vertex set ``1..n`` this means bit ``i - 1`` holds vertex
    ``i``, which is the packed state the evaluators work on.
    """

    domain: Tuple[int, ...]
    bits: int = 0

    def __post_init__(self) -> None:
        if len(set(self.domain)) != len(self.domain):
            raise ArgumentError(f"duplicate vertices in configuration domain {self.domain}")
        if self.bits < 0 or self.bits >> len(self.domain):
            raise ArgumentError(f"bits {self.bits} do not fit domain of size {len(self.domain)}")

    @classmethod
    def full(cls, n: int, bits: int = 0) -> "Configuration":
        return cls(tuple(range(1, n + 1)), bits)

    @classmethod
    def from_string(cls, text: str, domain: Sequence[int] | None = None) -> "Configuration":
        """Parse ``"011"`` as x1=0, x2=1, x3=1 (or over ``domain`` in order)."""
        dom = tuple(domain) if domain is not None else tuple(range(1, len(text) + 1))
        if len(dom) != len(text) or any(ch not in "01" for ch in text):
            raise ArgumentError(f"cannot read {text!r} as a configuration over {dom}")
        bits = 0
        for k, ch in enumerate(text):
            if ch == "1":
                bits |= 1 << k
        return cls(dom, bits)

    @classmethod
    def from_mapping(cls, values: Dict[int, int]) -> "Configuration":
        dom = tuple(sorted(values))
        bits = 0
        for k, v in enumerate(dom):
            if values[v]:
                bits |= 1 << k
        return cls(dom, bits)

    @classmethod
    def all_over(cls, domain: Sequence[int]) -> Iterator["Configuration"]:
        """Every configuration over ``domain`` in increasing ``bits`` order."""
        dom = tuple(domain)
        for bits in range(1 << len(dom)):
            yield cls(dom, bits)

    def __str__(self) -> str:
        return "".join("1" if self.bits >> k & 1 else "0" for k in range(len(self.domain)))

    def __len__(self) -> int:
        return len(self.domain)

    def _position(self, vertex: int) -> int:
        try:
            return self.domain.index(vertex)
        except ValueError as e:
            raise ArgumentError(f"vertex {vertex} not in configuration domain") from e

    def __getitem__(self, vertex: int) -> int:
        return self.bits >> self._position(vertex) & 1

    def items(self) -> Iterable[Tuple[int, int]]:
        return ((v, self.bits >> k & 1) for k, v in enumerate(self.domain))

    def as_dict(self) -> Dict[int, int]:
        return dict(self.items())

    def __xor__(self, other: "Configuration") -> "Configuration":
        if other.domain != self.domain:
            raise ArgumentError("xor needs configurations over the same domain")
        return Configuration(self.domain, self.bits ^ other.bits)

    def flip(self, vertex: int) -> "Configuration":
        """x xor e_vertex."""
        return Configuration(self.domain, self.bits ^ (1 << self._position(vertex)))

    def with_value(self, vertex: int, value: int) -> "Configuration":
        pos = self._position(vertex)
        bits = (self.bits & ~(1 << pos)) | ((value & 1) << pos)
        return Configuration(self.domain, bits)

    def restrict(self, vertices: Iterable[int]) -> "Configuration":
        """x_I, over the members of I in ascending order."""
        return Configuration.from_mapping({v: self[v] for v in vertices})

    def extend(self, other: "Configuration") -> "Configuration":
        """Union of two configurations that agree on their common vertices."""
        merged = self.as_dict()
        for v, b in other.items():
            if merged.get(v, b) != b:
                raise ArgumentError(f"configurations disagree on vertex {v}")
            merged[v] = b
        return Configuration.from_mapping(merged)

    def leq(self, other: "Configuration") -> bool:
        """Coordinatewise order."""
        if other.domain != self.domain:
            raise ArgumentError("comparison needs configurations over the same domain")
        return self.bits & ~other.bits == 0

    def state(self, n: int) -> int:
        """Packed state over ``1..n`` (bit i-1 holds vertex i)."""
        if self.domain == tuple(range(1, n + 1)):
            return self.bits
        state = 0
        for v, b in self.items():
            if not 1 <= v <= n:
                raise ArgumentError(f"vertex {v} outside 1..{n}")
            state |= b << (v - 1)
        return state
