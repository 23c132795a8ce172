from typing import Any, Dict, List, Optional, Union
from pydantic import BaseModel, Field, validator

from .services.kpipeline import KNOWN_HINTS
from .services.reports import GRAPH_MODES


class PresentationSpec(BaseModel):
    fixture: Optional[str] = Field(None, description="Built-in fixture name, e.g. braid3 or torus(2,3)")
    text: Optional[str] = Field(None, description="Presentation in the 'generators:'/'relation:' text format")
    generators: Optional[List[str]] = Field(None, description="Generator symbols")
    relations: Optional[List[str]] = Field(None, description="Relations such as 'aba = bab'")

    @validator('relations', always=True)
    def exactly_one_source(cls, v, values):
        given = [values.get('fixture') is not None, values.get('text') is not None,
                 values.get('generators') is not None or v is not None]
        if sum(given) != 1:
            raise ValueError('Give exactly one of fixture, text or generators/relations')
        return v


class PresentationRequest(BaseModel):
    presentation: PresentationSpec = Field(..., description="The presentation to work in")
    budget: Optional[int] = Field(None, description="Search budget (steps or states)")

    @validator('budget')
    def budget_must_be_positive(cls, v):
        if v is not None and v <= 0:
            raise ValueError('budget must be positive')
        return v


class WordPairRequest(PresentationRequest):
    x: str = Field(..., description="First word, e.g. 'a b^2' or 'ab2'")
    y: str = Field(..., description="Second word")


class DividesRequest(PresentationRequest):
    x: str = Field(..., description="Candidate left divisor")
    z: str = Field(..., description="Word to divide")


class ReverseRequest(PresentationRequest):
    word: str = Field(..., description="Signed word such as 'a^-1 b'")
    trace: bool = Field(False, description="Include every reversing step")


class ReversibleRequest(PresentationRequest):
    bound: int = Field(8, description="Length bound for the closure search")

    @validator('bound')
    def bound_must_be_positive(cls, v):
        if v < 1:
            raise ValueError('bound must be at least 1')
        return v


class GarsideWRequest(PresentationRequest):
    length_bound: Optional[int] = Field(None, description="Longest candidate length")


class GraphRequest(BaseModel):
    mode: str = Field("builtin", description="builtin, case1, case2 or nonreversible")
    presentation: Optional[PresentationSpec] = Field(None, description="Presentation for generic models")
    family: Optional[str] = Field(None, description="dihedral or torus")
    m: Optional[int] = Field(None, description="Dihedral parameter")
    p: Optional[int] = Field(None, description="Torus parameter p")
    q: Optional[int] = Field(None, description="Torus parameter q")
    w: Optional[str] = Field(None, description="Garside-like element for the case-2 model")
    pruned: bool = Field(True, description="Drop lower layers and dead vertices")
    all_layers: bool = Field(False, description="Non-reversible model with the shorter words as well")
    extra_loops: int = Field(0, description="Synthetic letters outside the relation, one loop per vertex each")
    dot: bool = Field(False, description="Include a DOT rendering")

    @validator('mode')
    def mode_must_be_known(cls, v):
        if v not in GRAPH_MODES:
            raise ValueError(f'mode must be one of {", ".join(GRAPH_MODES)}')
        return v

    @validator('extra_loops')
    def loops_must_be_non_negative(cls, v):
        if v < 0:
            raise ValueError('extra_loops must be non-negative')
        return v


class CoxeterSpec(BaseModel):
    type: Optional[str] = Field(None, description="Finite type such as A3 or I2(5)")
    matrix: Optional[List[List[int]]] = Field(None, description="Explicit Coxeter matrix")
    generators: Optional[List[str]] = Field(None, description="Generator names")

    @validator('matrix', always=True)
    def type_or_matrix(cls, v, values):
        if (values.get('type') is None) == (v is None):
            raise ValueError('Give exactly one of type or matrix')
        return v


class ArtinWordRequest(BaseModel):
    system: CoxeterSpec
    word: str = Field(..., description="Word in the generators")


class ArtinEquivRequest(BaseModel):
    system: CoxeterSpec
    subset: str = Field(..., description="The subset T, e.g. '{s1, s2, s3}'")
    source: str = Field(..., description="Required left descent set")
    target: str = Field(..., description="Required right descent set")


class ArtinCountRequest(BaseModel):
    system: CoxeterSpec
    n: int = Field(..., description="Sequence length")

    @validator('n')
    def n_must_be_positive(cls, v):
        if v < 1 or v > 64:
            raise ValueError('n must be between 1 and 64')
        return v


class ArtinDeltaRequest(BaseModel):
    system: CoxeterSpec
    subset: Optional[str] = Field(None, description="Subset for Δ_T; the whole set when omitted")


class PipelineRequest(BaseModel):
    case: str = Field(..., description="dihedral or torus")
    m: Optional[int] = Field(None, description="Dihedral parameter")
    p: Optional[int] = Field(None, description="Torus parameter p")
    q: Optional[int] = Field(None, description="Torus parameter q")
    coeff: Union[str, Dict[str, Any]] = Field("trivial", description="trivial, a fixture name or coefficient JSON")
    hints: List[str] = Field(default_factory=list, description="Extension hints, e.g. unit-summand")
    budget: Optional[int] = Field(None, description="Search budget")

    @validator('case')
    def case_must_be_known(cls, v):
        if v not in ('dihedral', 'torus'):
            raise ValueError('case must be dihedral or torus')
        return v

    @validator('hints')
    def hints_must_be_known(cls, v):
        unknown = sorted(set(v) - KNOWN_HINTS)
        if unknown:
            raise ValueError(f'Unknown hints: {unknown}')
        return v

    @validator('budget')
    def budget_must_be_positive(cls, v):
        if v is not None and v <= 0:
            raise ValueError('budget must be positive')
        return v


class BoundaryRequest(BaseModel):
    generators: Optional[int] = Field(None, description="Number of generators (at least 3)")
    infinite: bool = Field(False, description="Infinitely many generators")
    presentation: Optional[PresentationSpec] = Field(None, description="Read the generator count from a presentation")


class ReportResponse(BaseModel):
    schema_version: str = Field(..., description="Version of the report schema")
    command: str = Field(..., description="Operation that produced the report")
    determined: bool = Field(..., description="False when the answer is undetermined")
    result: Dict[str, Any] = Field(..., description="Operation-specific payload")
