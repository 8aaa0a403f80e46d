import time
from datetime import datetime
from typing import List, Optional

from fastapi import Depends, FastAPI, HTTPException
from pydantic import BaseModel, ConfigDict, Field
from sqlalchemy.orm import Session

from lauricella.census_service import models
from lauricella.census_service.database import engine, get_db
from lauricella.errors import LauricellaError, NumericalFailure, ResourceCapError, ValidationFailure
from lauricella.periods import DEFAULT_NODES
from lauricella.reports import AnalysisReport, PeriodsReport, analyze_system, periods_report
from lauricella.scanner import CensusEntry, Filter, enumerate_systems, store_census
from lauricella.shared_logging import RunLogger, configure_logging
from lauricella.weights import parse_weights

# Create database tables
models.Base.metadata.create_all(bind=engine)

configure_logging()

app = FastAPI(title="Lauricella Census Service", version="1.0.0")

# Initialize logger
logger = RunLogger("census_service")


def http_status_for(error: LauricellaError) -> int:
    if isinstance(error, ValidationFailure):
        return 400
    if isinstance(error, NumericalFailure):
        return 422
    if isinstance(error, ResourceCapError):
        return 413
    return 500


# Pydantic models
class AnalyzeRequest(BaseModel):
    weights: str
    exact: bool = False
    closure_bound: Optional[int] = Field(default=None, gt=0)


class PeriodsRequest(BaseModel):
    weights: str
    points: List[float]
    nodes: int = Field(default=DEFAULT_NODES, gt=0, le=512)
    step: float = Field(default=1e-4, gt=0)


class ScanRequest(BaseModel):
    n: int = Field(ge=1)
    max_denominator: int = Field(ge=2)
    filters: List[Filter] = []
    store: bool = False


class ScanResponse(BaseModel):
    run_id: Optional[int] = None
    count: int
    entries: List[CensusEntry]


class CensusRowResponse(BaseModel):
    position: int
    weights: str
    case: str
    int_ok: bool
    half_int_ok: bool
    cusps: Optional[int] = None
    arithmetic: Optional[bool] = None
    witnesses: str

    model_config = ConfigDict(from_attributes=True)


class CensusRunResponse(BaseModel):
    id: int
    n: int
    max_denominator: int
    filters: str
    entry_count: int
    created_at: Optional[datetime] = None
    rows: List[CensusRowResponse]

    model_config = ConfigDict(from_attributes=True)


@app.post("/analyze", response_model=AnalysisReport)
def analyze(request: AnalyzeRequest):
    """Classify a weight system and report every invariant defined for its case"""
    start_time = time.time()
    error_message = None
    status_code = 200

    try:
        ws = parse_weights(request.weights)
        return analyze_system(ws, exact=request.exact, closure_bound=request.closure_bound)
    except LauricellaError as e:
        status_code = http_status_for(e)
        error_message = str(e)
        raise HTTPException(status_code=status_code, detail=error_message)
    except Exception as e:
        status_code = 500
        error_message = str(e)
        raise HTTPException(status_code=500, detail="Error analyzing weight system")
    finally:
        execution_time = (time.time() - start_time) * 1000
        logger.log_run(
            operation="POST /analyze",
            status="ok" if status_code == 200 else f"http {status_code}",
            parameters=request,
            error_message=error_message,
            execution_time_ms=execution_time
        )


@app.post("/periods", response_model=PeriodsReport)
def periods(request: PeriodsRequest):
    """Period vector and identity residuals at a real-ordered configuration"""
    start_time = time.time()
    error_message = None
    status_code = 200

    try:
        ws = parse_weights(request.weights)
        return periods_report(ws, request.points, nodes=request.nodes, step=request.step)
    except LauricellaError as e:
        status_code = http_status_for(e)
        error_message = str(e)
        raise HTTPException(status_code=status_code, detail=error_message)
    except Exception as e:
        status_code = 500
        error_message = str(e)
        raise HTTPException(status_code=500, detail="Error evaluating periods")
    finally:
        execution_time = (time.time() - start_time) * 1000
        logger.log_run(
            operation="POST /periods",
            status="ok" if status_code == 200 else f"http {status_code}",
            parameters=request,
            error_message=error_message,
            execution_time_ms=execution_time
        )


@app.post("/scan", response_model=ScanResponse)
def scan(request: ScanRequest, db: Session = Depends(get_db)):
    """Run a census and optionally store it"""
    start_time = time.time()
    error_message = None
    status_code = 200
    count = None

    try:
        entries = list(enumerate_systems(request.n, request.max_denominator, request.filters))
        count = len(entries)
        run_id = None
        if request.store:
            run_id = store_census(db, entries, request.n, request.max_denominator, request.filters)
        return ScanResponse(run_id=run_id, count=count, entries=entries)
    except LauricellaError as e:
        db.rollback()
        status_code = http_status_for(e)
        error_message = str(e)
        raise HTTPException(status_code=status_code, detail=error_message)
    except Exception as e:
        db.rollback()
        status_code = 500
        error_message = str(e)
        raise HTTPException(status_code=500, detail="Error running census")
    finally:
        execution_time = (time.time() - start_time) * 1000
        logger.log_run(
            operation="POST /scan",
            status="ok" if status_code == 200 else f"http {status_code}",
            parameters=request,
            result={"count": count},
            error_message=error_message,
            execution_time_ms=execution_time
        )


@app.get("/census/{run_id}", response_model=CensusRunResponse)
def get_census(run_id: int, db: Session = Depends(get_db)):
    """Get a stored census run with its rows"""
    start_time = time.time()
    error_message = None
    status_code = 200

    try:
        if run_id <= 0:
            raise HTTPException(status_code=400, detail="Invalid run ID")

        run = db.query(models.CensusRun).filter(models.CensusRun.id == run_id).first()
        if run is None:
            raise HTTPException(status_code=404, detail="Census run not found")
        return CensusRunResponse.model_validate(run)
    except HTTPException as e:
        status_code = e.status_code
        error_message = e.detail
        raise e
    except Exception as e:
        status_code = 500
        error_message = str(e)
        raise HTTPException(status_code=500, detail="Error fetching census run")
    finally:
        execution_time = (time.time() - start_time) * 1000
        logger.log_run(
            operation=f"GET /census/{run_id}",
            status="ok" if status_code == 200 else f"http {status_code}",
            parameters={"run_id": run_id},
            error_message=error_message,
            execution_time_ms=execution_time
        )


@app.get("/health")
def health_check():
    return {"status": "healthy", "service": "census_service"}


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=8010)
