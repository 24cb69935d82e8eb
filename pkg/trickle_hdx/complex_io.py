"""JSON interchange for complexes and reports.

Complex documents look like::

    {
        "d": 2,
        "types": {"a": 0, ...} | null,
        "facets": [{"verts": ["a", "b", "c"], "w": 1.0}, ...]
    }

Reports are pydantic models written with sorted keys and a 2-space indent so
the same input always produces the same bytes.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, ValidationError

from trickle_hdx.complex import WeightedComplex, build_complex
from trickle_hdx.errors import MalformedInput


class FacetEntry(BaseModel):
    verts: List[Union[str, int]]
    w: float = 1.0


class ComplexDocument(BaseModel):
    d: Optional[int] = None
    types: Optional[Dict[str, int]] = None
    facets: List[FacetEntry]


def parse_complex(text: str) -> WeightedComplex:
    """Build a complex from a JSON document.

    Raises:
        MalformedInput: not JSON or not a complex document
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedInput(
            f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}"
        ) from None
    try:
        doc = ComplexDocument.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise MalformedInput(
            f"not a complex document ({e.error_count()} errors); "
            f"{where}: {first['msg']}"
        ) from None
    return build_complex(
        (([str(v) for v in f.verts], f.w) for f in doc.facets),
        types=doc.types,
        d=doc.d,
    )


def load_complex(path: Union[str, Path]) -> WeightedComplex:
    source = Path(path)
    try:
        text = source.read_text()
    except OSError as e:
        raise MalformedInput(f"cannot read {source}: {e.strerror}") from None
    return parse_complex(text)


def complex_document(X: WeightedComplex) -> ComplexDocument:
    return ComplexDocument(
        d=X.d,
        types=X.type_of,
        facets=[FacetEntry(verts=list(vs), w=w) for vs, w in X.facets],
    )


def to_json(data: Any) -> str:
    """Byte-stable JSON for a report model, a list of models or plain data."""
    return json.dumps(_plain(data), sort_keys=True, indent=2) + "\n"


def _plain(data: Any) -> Any:
    if isinstance(data, BaseModel):
        return data.model_dump(mode="json", by_alias=True)
    if isinstance(data, dict):
        return {str(k): _plain(v) for k, v in data.items()}
    if isinstance(data, (list, tuple)):
        return [_plain(v) for v in data]
    return data


def dump_complex(X: WeightedComplex) -> str:
    return to_json(complex_document(X))
