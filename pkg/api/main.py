from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel
from typing import Any, Dict, List, Optional
import logging
import traceback
from contextlib import asynccontextmanager

from bijection.set_multiset_map import get_bijection_table
from bounds.extremal_bounds import BoundRecord, bound_records
from compression.down_compression import kernel_reduce
from config import Config
from core.errors import BudgetExceededError, DomainError, MultisetError, PreconditionError
from core.multisets import format_multiset
from core.universe import family_from_json, family_to_json, is_cross_t_intersecting
from search.engines import max_sum, max_t_intersecting
from search.kernels import KernelPipelineReport, verify_kernel_pipeline

logging.basicConfig(level=Config.log_level())

logger = logging.getLogger(__name__)

VERSION = "1.0.0"


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan manager"""
    try:
        Config.validate_config()
        logger.info("Configuration validated successfully")
        logger.info(f"Environment: {Config.ENV}")
        logger.info(f"Budgets: {Config.get_budget_summary()}")
    except ValueError as e:
        logger.error(f"Configuration error: {e}")
        raise

    yield


app = FastAPI(
    title="Multiset Intersection Verifier",
    description="Exact bounds, searches and compressions for cross t-intersecting multiset families",
    version=VERSION,
    docs_url="/docs" if not Config.is_production() else None,
    redoc_url="/redoc" if not Config.is_production() else None,
    lifespan=lifespan,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_methods=["GET", "POST"],
    allow_headers=["*"],
)


class SearchRequest(BaseModel):
    m: int
    k: int
    t: int
    engine: str = "closure"
    objective: str = "sum"
    threads: int = 1


class CompressRequest(BaseModel):
    m: int
    t: int
    first: List[List[int]]
    second: List[List[int]]


class KernelRequest(BaseModel):
    m: int
    k: int
    t: int
    samples: int = Config.DEFAULT_SAMPLES
    seed: int = Config.DEFAULT_SEED


def _http_error(e: Exception) -> HTTPException:
    """Library errors to status codes: budget 413, precondition 409, anything else 400"""
    if isinstance(e, BudgetExceededError):
        return HTTPException(status_code=413, detail=str(e))
    if isinstance(e, PreconditionError):
        return HTTPException(status_code=409, detail=str(e))
    return HTTPException(status_code=400, detail=str(e))


@app.get("/")
async def root():
    """Service banner"""
    return {
        "message": "Multiset Intersection Verifier",
        "status": "running",
        "version": VERSION,
    }


@app.get("/health")
async def health_check():
    """Configuration and budgets"""
    try:
        Config.validate_config()
        return {"status": "healthy", "budgets": Config.get_budget_summary()}
    except ValueError as e:
        logger.error(f"Health check failed: {e}")
        return {"status": "unhealthy", "error": str(e)}


@app.get("/bounds", response_model=List[BoundRecord])
def get_bounds(m: int, k: int, t: int, n: Optional[int] = None):
    """Every closed-form bound for (m, k, t) with its hypothesis flag"""
    try:
        return bound_records(m, k, t, n)
    except MultisetError as e:
        logger.error(f"Bounds error: {e}")
        raise _http_error(e)


@app.post("/search")
def search(request: SearchRequest) -> Dict[str, Any]:
    """Exact search; the verdict is part of the payload"""
    try:
        if request.objective == "sum":
            report = max_sum(request.m, request.k, request.t, engine=request.engine, threads=request.threads)
        elif request.objective == "t_intersecting":
            report = max_t_intersecting(request.m, request.k, request.t)
        else:
            raise MultisetError(f"Unknown objective {request.objective!r}")
        return report.to_json_dict()
    except (MultisetError, BudgetExceededError) as e:
        logger.error(f"Search error: {e}")
        raise _http_error(e)
    except Exception as e:
        logger.error(f"Search failed: {e}")
        logger.error(traceback.format_exc())
        raise HTTPException(status_code=500, detail=str(e))


@app.post("/compress")
def compress(request: CompressRequest) -> Dict[str, Any]:
    """Kernel reduction of a cross t-intersecting pair"""
    try:
        F = family_from_json(request.first, request.m)
        G = family_from_json(request.second, request.m, F.k)
        if not 1 <= request.t <= F.k:
            raise DomainError(f"t must lie in [1, k={F.k}], got t={request.t}")
        if not is_cross_t_intersecting(F, G, request.t):
            raise PreconditionError(f"Input pair is not cross {request.t}-intersecting")
        F2, G2, trace = kernel_reduce(F, G, request.t)
        return {
            "first": family_to_json(F2),
            "second": family_to_json(G2),
            "initial_kernel": list(trace.initial_kernel),
            "final_kernel": list(trace.final_kernel),
            "trace": trace.export(),
        }
    except (MultisetError, BudgetExceededError) as e:
        logger.error(f"Compression error: {e}")
        raise _http_error(e)


@app.get("/bijection")
def bijection(m: int = Query(..., ge=1), k: int = Query(..., ge=1)) -> List[Dict[str, str]]:
    """The subset-to-multiset table in colex order of the subset"""
    try:
        table = get_bijection_table(m, k)
        return [
            {"subset": "{" + ",".join(map(str, B)) + "}", "multiset": format_multiset(F)}
            for B, F in table.rows()
        ]
    except (MultisetError, BudgetExceededError) as e:
        logger.error(f"Bijection error: {e}")
        raise _http_error(e)


@app.post("/kernels/verify", response_model=KernelPipelineReport)
def verify_kernels(request: KernelRequest):
    """Randomized kernel-reduction check with a reproducible seed"""
    try:
        return verify_kernel_pipeline(request.m, request.k, request.t, request.samples, request.seed)
    except (MultisetError, BudgetExceededError) as e:
        logger.error(f"Kernel pipeline error: {e}")
        raise _http_error(e)


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host=Config.API_HOST, port=Config.API_PORT)
