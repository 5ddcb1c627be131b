import logging

from fastapi import FastAPI, HTTPException

from app.config import LOG_FORMAT, LOG_LEVEL
from app.errors import LatticeError
from app.formats import read_lattice_file, read_matrix_file
from app.reports import build_report, certify_report, jscan_report, sp_gen_report, spinor_report
from app.schemas import BuildRequest, CertifyRequest, JScanRequest, Report, SpGenRequest, SpinorRequest

app = FastAPI(title="Elliptic Surface Monodromy Toolkit")

logging.basicConfig(
    level=LOG_LEVEL,
    format=LOG_FORMAT
)
logger = logging.getLogger(__name__)


@app.get("/")
def root():
    return {
        "message": "Elliptic Surface Monodromy Toolkit API",
        "status": "running",
        "endpoints": {
            "build": "POST /build",
            "certify": "POST /certify",
            "spinor": "POST /spinor",
            "sp_gen": "POST /sp-gen",
            "jscan": "POST /jscan"
        }
    }


def _invoke(command: str, runner) -> Report:
    try:
        _, report = runner()
        return report
    except LatticeError as e:
        logger.error(f"{command} rejected: {str(e)}")
        raise HTTPException(status_code=422, detail=f"{type(e).__name__}: {str(e)}")


@app.post("/build", response_model=Report)
def build(request: BuildRequest):
    return _invoke("build", lambda: build_report(
        request.name, entries=request.entries, q=request.q, g=request.g, chi=request.chi
    ))


@app.post("/certify", response_model=Report)
def certify(request: CertifyRequest):
    return _invoke("certify", lambda: certify_report(
        read_lattice_file(request.lattice), request.height, request.max_size
    ))


@app.post("/spinor", response_model=Report)
def spinor(request: SpinorRequest):
    return _invoke("spinor", lambda: spinor_report(
        read_lattice_file(request.lattice), read_matrix_file(request.matrix)
    ))


@app.post("/sp-gen", response_model=Report)
def sp_gen(request: SpGenRequest):
    return _invoke("sp-gen", lambda: sp_gen_report(request.q, request.p, with_sums=request.with_sums))


@app.post("/jscan", response_model=Report)
def jscan(request: JScanRequest):
    return _invoke("jscan", lambda: jscan_report(request.chi, request.radius, request.samples, request.seed))
