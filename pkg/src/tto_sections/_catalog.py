"""Named zero families and named symbols, with descriptor parsing.

A family descriptor is a mapping ``{"family": <name>, <param>: <value>, ...}``;
explicit lists use ``{"family": "explicit", "zeros": [[re, im], ...]}``.  A
symbol descriptor is a catalog name, a ``"laurent:{j: c, ...}"`` string, or
``{"coefficients": {"j": c | [re, im]}}``.
"""

import ast
import math
from dataclasses import dataclass
from typing import Any, Callable, Mapping, Optional, Union

from tto_sections._blaschke import TWO_PI, BlaschkeProduct, Verdict, Zero, ZeroFamily
from tto_sections._errors import ConfigError, DomainError
from tto_sections._hardy import Symbol


def _phase_cluster(phases: int, offset: float) -> tuple[complex, ...]:
    return tuple(complex(math.cos(TWO_PI * j / phases + offset), math.sin(TWO_PI * j / phases + offset)) for j in range(phases))


def geometric_radius(ratio: float = 0.5, phases: int = 1, offset: float = 0.0) -> BlaschkeProduct:
    """Zeros (1 - ratio**k) exp(i (2 pi k / phases + offset)), k >= 1."""
    if not 0.0 < ratio < 1.0:
        raise DomainError(f"ratio must lie in (0, 1), got {ratio!r}")
    if phases < 1:
        raise DomainError(f"phases must be >= 1, got {phases!r}")
    family = ZeroFamily(
        name="geometric-radius",
        rule=lambda k: Zero.from_polar(ratio**k, TWO_PI * k / phases + offset),
        verdict=Verdict.CONVERGING,
        cluster=_phase_cluster(phases, offset),
        params=(("ratio", ratio), ("phases", phases), ("offset", offset)),
    )
    return BlaschkeProduct.from_family(family)


def harmonic_radius(phases: int = 1, offset: float = 0.0) -> BlaschkeProduct:
    """Zeros (1 - 1/(k+1)) exp(i (2 pi k / phases + offset)); the Blaschke sum diverges."""
    if phases < 1:
        raise DomainError(f"phases must be >= 1, got {phases!r}")
    family = ZeroFamily(
        name="harmonic-radius",
        rule=lambda k: Zero.from_polar(1.0 / (k + 1), TWO_PI * k / phases + offset),
        verdict=Verdict.DIVERGING,
        cluster=_phase_cluster(phases, offset),
        params=(("phases", phases), ("offset", offset)),
    )
    return BlaschkeProduct.from_family(family)


def all_zero_prefix(prefix: int = 1, ratio: float = 0.5) -> BlaschkeProduct:
    """``prefix`` zeros at the origin followed by the positive zeros 1 - ratio**(k - prefix)."""
    if prefix < 0:
        raise DomainError(f"prefix must be >= 0, got {prefix!r}")
    if not 0.0 < ratio < 1.0:
        raise DomainError(f"ratio must lie in (0, 1), got {ratio!r}")
    family = ZeroFamily(
        name="all-zero-prefix",
        rule=lambda k: Zero.from_polar(1.0) if k <= prefix else Zero.from_polar(ratio ** (k - prefix)),
        verdict=Verdict.CONVERGING,
        cluster=(1 + 0j,),
        params=(("prefix", prefix), ("ratio", ratio)),
    )
    return BlaschkeProduct.from_family(family)


def explicit(zeros: Any) -> BlaschkeProduct:
    """A finite product from a list of complex zeros (or [re, im] pairs)."""
    return BlaschkeProduct.from_zeros([_complex(z) for z in zeros])


@dataclass(frozen=True)
class Parameter:
    name: str
    kind: type
    default: Any
    doc: str


@dataclass(frozen=True)
class FamilyEntry:
    name: str
    doc: str
    verdict: Verdict
    parameters: tuple[Parameter, ...]
    factory: Callable[..., BlaschkeProduct]
    example: Mapping[str, Any]

    def render(self) -> str:
        lines = [f"{self.name}  [{self.verdict.value}]", f"    {self.doc}"]
        for p in self.parameters:
            default = "required" if p.default is None else f"default {p.default!r}"
            lines.append(f"    {p.name} ({p.kind.__name__}, {default}): {p.doc}")
        return "\n".join(lines)


FAMILIES: dict[str, FamilyEntry] = {
    entry.name: entry
    for entry in (
        FamilyEntry(
            name="geometric-radius",
            doc="defects ratio**k, arguments 2 pi k / phases + offset",
            verdict=Verdict.CONVERGING,
            parameters=(
                Parameter("ratio", float, 0.5, "defect ratio in (0, 1)"),
                Parameter("phases", int, 1, "number of boundary cluster points"),
                Parameter("offset", float, 0.0, "argument offset in radians"),
            ),
            factory=geometric_radius,
            example={"family": "geometric-radius", "ratio": 0.5, "phases": 3},
        ),
        FamilyEntry(
            name="harmonic-radius",
            doc="defects 1/(k+1); the Blaschke condition fails",
            verdict=Verdict.DIVERGING,
            parameters=(
                Parameter("phases", int, 1, "number of boundary cluster points"),
                Parameter("offset", float, 0.0, "argument offset in radians"),
            ),
            factory=harmonic_radius,
            example={"family": "harmonic-radius"},
        ),
        FamilyEntry(
            name="all-zero-prefix",
            doc="prefix zeros at the origin, then positive zeros with defects ratio**j",
            verdict=Verdict.CONVERGING,
            parameters=(
                Parameter("prefix", int, 1, "number of zeros at the origin"),
                Parameter("ratio", float, 0.5, "defect ratio of the tail in (0, 1)"),
            ),
            factory=all_zero_prefix,
            example={"family": "all-zero-prefix", "prefix": 2},
        ),
        FamilyEntry(
            name="explicit",
            doc="finite product with the listed zeros, sorted by modulus",
            verdict=Verdict.CONVERGING,
            parameters=(Parameter("zeros", list, None, "list of [re, im] pairs or numbers"),),
            factory=explicit,
            example={"family": "explicit", "zeros": [[0.3, 0.0], [0.0, 0.5], [-0.7, 0.0]]},
        ),
    )
}


@dataclass(frozen=True)
class SymbolEntry:
    name: str
    doc: str
    coefficients: Mapping[int, complex]

    def build(self) -> Symbol:
        return Symbol.from_coefficients(self.coefficients, label=self.name)

    def render(self) -> str:
        terms = ", ".join(f"{j}: {c!r}" for j, c in sorted(self.coefficients.items()))
        return f"{self.name}\n    {self.doc}\n    coefficients {{{terms}}}"


SYMBOLS: dict[str, SymbolEntry] = {
    entry.name: entry
    for entry in (
        SymbolEntry("positive", "2 + (t + 1/t)/2, real with minimum 1", {-1: 0.5, 0: 2.0, 1: 0.5}),
        SymbolEntry("one", "the constant 1", {0: 1.0}),
        SymbolEntry("shift", "t, whose truncated Toeplitz operator is the truncated shift", {1: 1.0}),
        SymbolEntry("backward-shift", "1/t", {-1: 1.0}),
        SymbolEntry("cosine", "t + 1/t", {-1: 1.0, 1: 1.0}),
    )
}


def _complex(value: Any) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise DomainError(f"complex pairs are [re, im], got {value!r}")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        return complex(value.replace(" ", ""))
    return complex(value)


def parse_family(descriptor: Mapping[str, Any], *, field: str = "family") -> BlaschkeProduct:
    if not isinstance(descriptor, Mapping) or "family" not in descriptor:
        raise ConfigError("expected a mapping with a 'family' key", field=field)
    name = descriptor["family"]
    entry = FAMILIES.get(name)
    if entry is None:
        raise ConfigError(f"unknown family {name!r}, expected one of {sorted(FAMILIES)}", field=f"{field}.family")
    known = {p.name: p for p in entry.parameters}
    kwargs = {}
    for key, value in descriptor.items():
        if key == "family":
            continue
        if key not in known:
            raise ConfigError(f"unknown parameter for {name}", field=f"{field}.{key}")
        parameter = known[key]
        if parameter.kind is list:
            kwargs[key] = value
        elif parameter.kind is int:
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"expected an integer, got {value!r}", field=f"{field}.{key}")
            kwargs[key] = value
        else:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"expected a number, got {value!r}", field=f"{field}.{key}")
            kwargs[key] = float(value)
    missing = [p.name for p in entry.parameters if p.default is None and p.name not in kwargs]
    if missing:
        raise ConfigError("missing required parameter", field=f"{field}.{missing[0]}")
    try:
        return entry.factory(**kwargs)
    except (DomainError, TypeError, ValueError) as e:
        raise ConfigError(str(e), field=field) from e


def parse_symbol(descriptor: Union[str, Mapping[str, Any]], *, field: str = "symbol") -> Symbol:
    coefficients: Optional[Mapping[Any, Any]] = None
    label = ""
    if isinstance(descriptor, str):
        if descriptor in SYMBOLS:
            return SYMBOLS[descriptor].build()
        if descriptor.startswith("laurent:"):
            try:
                coefficients = ast.literal_eval(descriptor[len("laurent:") :].strip())
            except (ValueError, SyntaxError) as e:
                raise ConfigError(f"cannot parse Laurent coefficients: {e}", field=field) from e
            label = descriptor
        else:
            raise ConfigError(f"unknown symbol {descriptor!r}, expected one of {sorted(SYMBOLS)} or 'laurent:{{...}}'", field=field)
    elif isinstance(descriptor, Mapping) and "coefficients" in descriptor:
        coefficients = descriptor["coefficients"]
        label = "coefficients"
    if not isinstance(coefficients, Mapping) or not coefficients:
        raise ConfigError("expected a nonempty coefficient map", field=field)
    try:
        parsed = {int(j): _complex(c) for j, c in coefficients.items()}
    except (TypeError, ValueError, DomainError) as e:
        raise ConfigError(f"invalid coefficient: {e}", field=field) from e
    return Symbol.from_coefficients(parsed, label=label)


def render_catalog() -> str:
    """Human-readable listing of every family and named symbol."""
    parts = ["Zero families:"]
    parts.extend(entry.render() for entry in FAMILIES.values())
    parts.append("")
    parts.append("Symbols:")
    parts.extend(entry.render() for entry in SYMBOLS.values())
    return "\n".join(parts) + "\n"
