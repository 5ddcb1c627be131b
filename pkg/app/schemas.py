from pydantic import BaseModel, Field
from typing import Any, Dict, List, Optional

from app.config import DEFAULT_HEIGHT_BOUND, DEFAULT_MAX_ORBIT_SIZE, DEFAULT_SEED, REPORT_VERSION


class Report(BaseModel):
    command: str
    inputs: Dict[str, Any]
    result: Dict[str, Any]
    budget: Optional[Dict[str, Any]] = None
    version: str = REPORT_VERSION


class BuildRequest(BaseModel):
    name: str
    entries: Optional[List[int]] = None
    q: int = 1
    g: int = 0
    chi: int = 1


class CertifyRequest(BaseModel):
    lattice: str = Field(description="Lattice file text")
    height: int = DEFAULT_HEIGHT_BOUND
    max_size: int = DEFAULT_MAX_ORBIT_SIZE


class SpinorRequest(BaseModel):
    lattice: str = Field(description="Lattice file text")
    matrix: str = Field(description="Matrix file text")


class SpGenRequest(BaseModel):
    q: int
    p: int
    with_sums: bool = True


class JScanRequest(BaseModel):
    chi: int = 1
    radius: float = 0.1
    samples: int = 1000
    seed: int = DEFAULT_SEED
