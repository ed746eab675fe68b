"""Experiment configuration: one JSON document per experiment.

Example::

    {
      "name": "stability-positive",
      "kind": "stability",
      "family": {"family": "geometric-radius", "ratio": 0.5},
      "symbol": "positive",
      "n_list": [4, 8, 16, 32],
      "output": {"directory": "results"}
    }
"""

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional, Union

from tto_sections._blaschke import BlaschkeProduct
from tto_sections._catalog import parse_family, parse_symbol
from tto_sections._errors import AliasingError, ConfigError
from tto_sections._fsd import DecayKind, PerturbationRule
from tto_sections._hardy import CircleGrid, Symbol

OUTPUT_DIR_ENV = "TTO_SECTIONS_OUTPUT_DIR"

KINDS = ("widom", "isometry", "stability", "convergence", "fredholm", "pseudospectra", "strong-convergence")

_KNOWN_KEYS = {
    "name",
    "kind",
    "family",
    "symbol",
    "symbol_b",
    "n_list",
    "N_F",
    "M",
    "eps_list",
    "seed",
    "threshold",
    "gap_factor",
    "tolerance",
    "kernel_rank",
    "perturbation",
    "reference_n",
    "resolution",
    "expect",
    "output",
}


def _integer(mapping: Mapping[str, Any], key: str, default: Any, *, minimum: int = 0) -> Any:
    value = mapping.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"expected an integer, got {value!r}", field=key)
    if value < minimum:
        raise ConfigError(f"must be >= {minimum}, got {value}", field=key)
    return value


def _number(mapping: Mapping[str, Any], key: str, default: float, *, positive: bool = True) -> float:
    value = mapping.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number, got {value!r}", field=key)
    if positive and value <= 0:
        raise ConfigError(f"must be > 0, got {value}", field=key)
    return float(value)


@dataclass(frozen=True)
class ExperimentConfig:
    """A validated experiment description."""

    name: str
    kind: str
    family: Mapping[str, Any]
    symbol: Union[str, Mapping[str, Any]] = "positive"
    symbol_b: Optional[Union[str, Mapping[str, Any]]] = None
    n_list: tuple[int, ...] = (4, 8, 16)
    N_F: int = 256
    M: Optional[int] = None
    eps_list: tuple[float, ...] = (0.1,)
    seed: int = 0
    threshold: float = 1e-6
    gap_factor: float = 0.5
    tolerance: float = 1e-8
    kernel_rank: int = 0
    perturbation: Optional[Mapping[str, Any]] = None
    reference_n: Optional[int] = None
    resolution: int = 101
    expect: Optional[Union[str, int]] = None
    output_directory: str = "results"
    raw: Mapping[str, Any] = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Any]) -> "ExperimentConfig":
        """Validate ``mapping`` and report the first violation with its field path."""
        if not isinstance(mapping, Mapping):
            raise ConfigError("configuration must be a JSON object")
        unknown = sorted(set(mapping) - _KNOWN_KEYS)
        if unknown:
            raise ConfigError("unknown key", field=unknown[0])

        kind = mapping.get("kind")
        if kind not in KINDS:
            raise ConfigError(f"expected one of {KINDS}, got {kind!r}", field="kind")
        name = mapping.get("name", kind)
        if not isinstance(name, str) or not name or "/" in name:
            raise ConfigError("must be a nonempty string without '/'", field="name")

        if "family" not in mapping:
            raise ConfigError("required", field="family")
        parse_family(mapping["family"])
        parse_symbol(mapping.get("symbol", "positive"))
        if mapping.get("symbol_b") is not None:
            parse_symbol(mapping["symbol_b"], field="symbol_b")

        n_list = mapping.get("n_list", [4, 8, 16])
        if (
            not isinstance(n_list, list)
            or not n_list
            or any(isinstance(n, bool) or not isinstance(n, int) or n < 1 for n in n_list)
        ):
            raise ConfigError("expected a nonempty list of positive integers", field="n_list")
        if any(b <= a for a, b in zip(n_list, n_list[1:])):
            raise ConfigError(f"must be strictly increasing, got {n_list}", field="n_list")
        if kind == "stability" and len(n_list) < 3:
            raise ConfigError("stability probes need at least 3 orders", field="n_list")

        eps_list = mapping.get("eps_list", [0.1])
        if not isinstance(eps_list, list) or not eps_list:
            raise ConfigError("expected a nonempty list of numbers", field="eps_list")
        for i, eps in enumerate(eps_list):
            if isinstance(eps, bool) or not isinstance(eps, (int, float)) or eps <= 0:
                raise ConfigError(f"expected a positive number, got {eps!r}", field=f"eps_list.{i}")

        N_F = _integer(mapping, "N_F", 256, minimum=1)
        M = _integer(mapping, "M", None, minimum=2)
        if M is not None and 2 * N_F >= M:
            raise ConfigError(f"N_F = {N_F} does not fit below M/2 for M = {M}", field="M")

        perturbation = mapping.get("perturbation")
        if perturbation is not None:
            if not isinstance(perturbation, Mapping):
                raise ConfigError("expected a mapping", field="perturbation")
            try:
                PerturbationRule(
                    kind=DecayKind(perturbation.get("kind", "geometric")),
                    scale=float(perturbation.get("scale", 1.0)),
                    rate=float(perturbation.get("rate", 0.5)),
                    hermitian=bool(perturbation.get("hermitian", False)),
                )
            except (ValueError, TypeError) as e:
                raise ConfigError(str(e), field="perturbation") from e

        expect = mapping.get("expect")
        if expect is not None and not isinstance(expect, (str, int)):
            raise ConfigError(f"expected a verdict string or an integer, got {expect!r}", field="expect")

        output = mapping.get("output", {})
        if not isinstance(output, Mapping):
            raise ConfigError("expected a mapping", field="output")
        directory = output.get("directory", "results")
        if not isinstance(directory, str) or not directory:
            raise ConfigError("expected a nonempty path", field="output.directory")

        return cls(
            name=name,
            kind=kind,
            family=dict(mapping["family"]),
            symbol=mapping.get("symbol", "positive"),
            symbol_b=mapping.get("symbol_b"),
            n_list=tuple(n_list),
            N_F=N_F,
            M=M,
            eps_list=tuple(float(e) for e in eps_list),
            seed=_integer(mapping, "seed", 0),
            threshold=_number(mapping, "threshold", 1e-6),
            gap_factor=_number(mapping, "gap_factor", 0.5),
            tolerance=_number(mapping, "tolerance", 1e-8),
            kernel_rank=_integer(mapping, "kernel_rank", 0),
            perturbation=dict(perturbation) if perturbation is not None else None,
            reference_n=_integer(mapping, "reference_n", None, minimum=1),
            resolution=_integer(mapping, "resolution", 101, minimum=2),
            expect=expect,
            output_directory=directory,
            raw=dict(mapping),
        )

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ExperimentConfig":
        try:
            text = Path(path).read_text()
        except OSError as e:
            raise ConfigError(f"cannot read {path}: {e.strerror}") from e
        try:
            mapping = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"invalid JSON at line {e.lineno}: {e.msg}") from e
        return cls.from_mapping(mapping)

    # -- resolved objects ------------------------------------------------------

    def blaschke(self) -> BlaschkeProduct:
        return parse_family(self.family)

    def _symbol(self, descriptor: Union[str, Mapping[str, Any]], field_name: str) -> Symbol:
        symbol = parse_symbol(descriptor, field=field_name)
        if self.M is None:
            return symbol
        try:
            return symbol.on_grid(CircleGrid(self.M))
        except AliasingError as e:
            raise ConfigError(str(e), field="M") from e

    def symbol_a(self) -> Symbol:
        return self._symbol(self.symbol, "symbol")

    def symbol_second(self) -> Symbol:
        return self._symbol(self.symbol_b if self.symbol_b is not None else self.symbol, "symbol_b")

    def perturbation_rule(self) -> Optional[PerturbationRule]:
        if self.perturbation is None:
            return None
        return PerturbationRule(
            kind=DecayKind(self.perturbation.get("kind", "geometric")),
            scale=float(self.perturbation.get("scale", 1.0)),
            rate=float(self.perturbation.get("rate", 0.5)),
            seed=self.seed,
            hermitian=bool(self.perturbation.get("hermitian", False)),
        )

    def output_dir(self, override: Optional[str] = None) -> Path:
        """Command-line override, then the environment variable, then the config."""
        return Path(override or os.environ.get(OUTPUT_DIR_ENV) or self.output_directory)

    def prepare_output_dir(self, override: Optional[str] = None) -> Path:
        """Create the output directory and check that result files can be written there."""
        directory = self.output_dir(override)
        try:
            directory.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ConfigError(f"cannot create {directory}: {e.strerror}", field="output.directory") from e
        if not os.access(directory, os.W_OK | os.X_OK):
            raise ConfigError(f"{directory} is not writable", field="output.directory")
        return directory

    @staticmethod
    def default_output_dir() -> Path:
        """Where error records go when no config could be read."""
        return Path(os.environ.get(OUTPUT_DIR_ENV) or "results")
