import os
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, PlainValidator, field_validator, model_validator

from src.constants import DEFAULT_OPTIONS, TOLERANCES


def _parse_complex(value: Any) -> complex:
    if isinstance(value, bool):
        raise ValueError("expected a number, not a boolean")
    if isinstance(value, (int, float, complex)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, dict) and set(value) <= {"re", "im"}:
        return complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", ""))
        except ValueError:
            pass
    raise ValueError(f"cannot read {value!r} as a complex number (use a number, [re, im], {{re, im}} or '1+2j')")


ComplexValue = Annotated[
    complex,
    PlainValidator(_parse_complex),
    PlainSerializer(lambda c: [c.real, c.imag], return_type=list, when_used="json"),
]


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class CircleConfig(StrictModel):
    type: Literal["circle"]
    R: float = Field(gt=0)
    center: ComplexValue = 0j


class EllipseConfig(StrictModel):
    type: Literal["ellipse"]
    a: float = Field(gt=0)
    b: float = Field(gt=0)
    center: ComplexValue = 0j


class ParabolaConfig(StrictModel):
    type: Literal["parabola"]
    f: float = Field(gt=0)
    vertex_offset: float = 0.0


class PolynomialConfig(StrictModel):
    type: Literal["polynomial"]
    coeffs: List[ComplexValue] = Field(min_length=1)


class TabulatedConfig(StrictModel):
    type: Literal["tabulated"]
    u: List[float] = Field(min_length=4)
    z: List[ComplexValue] = Field(min_length=4)

    @model_validator(mode="after")
    def _matching_samples(self):
        if len(self.u) != len(self.z):
            raise ValueError("u and z must have the same number of samples")
        if any(b <= a for a, b in zip(self.u, self.u[1:])):
            raise ValueError("u samples must be strictly increasing")
        return self


ProfileConfig = Annotated[
    Union[CircleConfig, EllipseConfig, ParabolaConfig, PolynomialConfig, TabulatedConfig],
    Field(discriminator="type"),
]


class OutputConfig(StrictModel):
    path: Optional[str] = None
    format: Literal["csv", "json"] = "csv"


class VerifyConfig(StrictModel):
    """Tolerances of the verification suite and the margin that keeps comparisons away from degeneracies"""
    margin: float = Field(default=1e-3, gt=0)
    tolerances: Dict[str, float] = Field(default_factory=dict)


def _default_workers() -> int:
    try:
        return max(1, int(os.getenv("CATOPTRICA_WORKERS", DEFAULT_OPTIONS["WORKERS"])))
    except ValueError:
        return DEFAULT_OPTIONS["WORKERS"]


class RunConfig(StrictModel):
    profile: ProfileConfig
    u_range: Tuple[float, float]
    v_range: Tuple[float, float] = (-1.0, 1.0)
    u_samples: int = Field(default=DEFAULT_OPTIONS["U_SAMPLES"], ge=2)
    v_samples: int = Field(default=DEFAULT_OPTIONS["V_SAMPLES"], ge=2)
    signs: Literal["PlusPlus", "all"] = "PlusPlus"
    outputs: OutputConfig = Field(default_factory=OutputConfig)
    workers: int = Field(default_factory=_default_workers, ge=1)
    rebase: float = Field(default=DEFAULT_OPTIONS["REBASE"], gt=0)
    scan_samples: int = Field(default=DEFAULT_OPTIONS["SCAN_SAMPLES"], ge=4)
    r_window: Optional[Tuple[float, float]] = None
    wavefront_closure_tol: float = Field(default=TOLERANCES["CLOSURE"], gt=0)
    verify: VerifyConfig = Field(default_factory=VerifyConfig)

    @field_validator("u_range", "v_range", "r_window")
    @classmethod
    def _nondegenerate(cls, value):
        if value is not None and not value[0] < value[1]:
            raise ValueError("range must satisfy lower < upper")
        return value
