"""Verdict and report data models.

Library operations return these dataclasses; the CLI wraps them in a
:class:`Report` and serialises through :func:`to_jsonable`. Every number stays
exact: rationals become ``"p/q"`` strings, integers stay integers and
infinity becomes ``"inf"``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, is_dataclass
from enum import Enum
from fractions import Fraction
from typing import TYPE_CHECKING, Any

from sympy.polys.rings import PolyElement

from .poly import format_poly

if TYPE_CHECKING:
    from .local import MembershipCertificate


class Outcome(str, Enum):
    """Result of a report-mode probe."""
    OBSERVED = "observed"
    NOT_OBSERVED = "not observed"
    NOT_APPLICABLE = "not applicable"


class LojaCase(str, Enum):
    """n - rank0 of the Jacobian matrix."""
    NO_STATEMENT = "n-m=1"
    TWO = "n-m=2"
    HIGHER = "n-m>=3"


Number = int | Fraction | float


@dataclass(frozen=True)
class JacobianVerdict:
    """Jacobian membership, dimension and socle data of a square system."""
    dim_finite: bool
    dim: int | None
    jacobian: PolyElement
    jacobian_in_ideal: bool
    certificate: MembershipCertificate
    socle_generated: bool | None = None
    annihilates_maximal_ideal: bool | None = None
    socle_dim: int | None = None
    witness: str | None = None
    char_caveat: str | None = None

    @property
    def dim_positive(self) -> bool:
        return not self.dim_finite


@dataclass(frozen=True)
class ProbeResult:
    """One probe of the residue pairing."""
    probe: PolyElement
    pairings_vanish: bool
    in_ideal: bool


@dataclass(frozen=True)
class NondegeneracyVerdict:
    pairing_invertible: bool
    probes: tuple[ProbeResult, ...] = ()


@dataclass(frozen=True)
class ArcReport:
    """Orders along one arc; ``ratio`` is None when every f_i vanishes on the arc."""
    arc: str
    generator_orders: tuple[Number, ...]
    min_order: Number
    u_order: Number
    ratio: Fraction | float | None
    cramer_ok: bool | None


@dataclass(frozen=True)
class SamuelBounds:
    """Bounds on the asymptotic Samuel function; ``exact`` for monomial ideals."""
    lower: Fraction
    upper: Fraction | float
    exact: Fraction | float | None = None
    lower_power: int | None = None
    arcs_used: int = 0

    @property
    def value(self) -> Fraction | float | None:
        """The exact value when known, or when the bounds meet."""
        if self.exact is not None:
            return self.exact
        if self.lower == self.upper:
            return self.lower
        return None


@dataclass(frozen=True)
class LojaCertificate:
    """Lower bound theta for the Jacobian in the closure of I^theta."""
    n: int
    rank0: int
    case: LojaCase
    s: int | None = None
    min_order: int | None = None
    strict: bool = False
    theta_lb: Fraction | None = None
    theta_refined: Fraction | None = None
    jacobian_in_closure: bool | None = None
    bounds: SamuelBounds | None = None
    reduced_variables: tuple[str, ...] = ()
    note: str | None = None


@dataclass(frozen=True)
class HessianVerdict:
    """Hessian criterion for an isolated singularity."""
    isolated: bool
    hessian: PolyElement
    hessian_in_jacobian_ideal: bool
    milnor_number: int | None = None
    jacobian_ideal_closed: bool | None = None
    hessian_rank0: int = 0
    morse_type: bool = False


@dataclass(frozen=True)
class WitnessCheck:
    """A radical witness w with w^k in I, and whether J*w lies in I."""
    witness: PolyElement
    power: int
    jw_in_ideal: bool


@dataclass(frozen=True)
class RadicalVerdict:
    """J*sqrt(I) in I and J not in I, asserted for domain coefficients."""
    coefficient_kind: str
    asserted: bool
    jacobian: PolyElement
    witnesses: tuple[WitnessCheck, ...]
    jacobian_in_ideal: bool
    rank: int | None
    outcome: Outcome


@dataclass(frozen=True)
class NonArtinianReport:
    """Probe of the non-Artinian branch for Artinian Gorenstein coefficients."""
    coefficient_kind: str
    artinian: bool
    jacobian: PolyElement
    jacobian_in_ideal: bool
    non_artinian_outcome: Outcome
    equivalence_outcome: Outcome
    note: str | None = None


@dataclass(frozen=True)
class RelativeTrace:
    """Trace over A of multiplication by g on a free P."""
    element: PolyElement
    trace: PolyElement
    rank: int
    precision: int | None = None


@dataclass
class Report:
    """Envelope printed by the CLI; JSON puts the fields next to the command and source."""
    command: str
    source: str
    headline: str | None = None
    fields: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"command": self.command, "source": self.source}
        if self.headline is not None:
            out["headline"] = self.headline
        out.update(to_jsonable(self.fields))
        return out


def to_jsonable(obj: Any) -> Any:
    """Recursively convert reports into JSON-ready values."""
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return obj.numerator if obj.denominator == 1 else str(obj)
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        raise TypeError(f"inexact value {obj!r} in a report")
    if isinstance(obj, PolyElement):
        return format_poly(obj)
    if is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def format_number(value: Number | None) -> str:
    """Exact text form: ``4/3``, ``2``, ``inf``."""
    if value is None:
        return "none"
    if isinstance(value, float):
        return "inf" if value > 0 else "-inf"
    return str(value)
