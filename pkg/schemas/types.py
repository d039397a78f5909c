"""Shared annotated types for the schemas"""

import math
from typing import Annotated, Any, List

from pydantic import PlainSerializer, PlainValidator


def parse_complex(value: Any) -> complex:
    """Accept [re, im], {"re", "im"}, numbers and strings like '1-2j'"""
    if isinstance(value, bool):
        raise ValueError("boolean is not a complex number")
    if isinstance(value, complex):
        z = value
    elif isinstance(value, (int, float)):
        z = complex(value)
    elif hasattr(value, "real") and hasattr(value, "imag") and not isinstance(value, (str, list, tuple, dict)):
        z = complex(value)
    elif isinstance(value, str):
        try:
            z = complex(value.replace(" ", "").replace("i", "j"))
        except ValueError as e:
            raise ValueError(f"cannot parse complex number from {value!r}") from e
    elif isinstance(value, (list, tuple)) and len(value) == 2:
        z = complex(float(value[0]), float(value[1]))
    elif isinstance(value, dict) and {"re", "im"} <= set(value):
        z = complex(float(value["re"]), float(value["im"]))
    else:
        raise ValueError(f"cannot interpret {value!r} as a complex number")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"complex number must be finite, got {z}")
    return z


def complex_pair(z: complex) -> List[float]:
    return [float(z.real), float(z.imag)]


ComplexNumber = Annotated[
    complex,
    PlainValidator(parse_complex),
    PlainSerializer(complex_pair, return_type=list),
]
