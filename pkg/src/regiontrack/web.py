from typing import Any, Dict, List, Optional

import uvicorn
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .core.config import ENGINE_NAMES
from .core.errors import OracleSizeError, RegionTrackError
from .core.runner import RegionTrackRunner
from .trace.parser import serialize_trace


# Pydantic 请求模型
class TraceRequest(BaseModel):
    trace: str = Field(..., description="轨迹文本，每行 `<thread> <op> <operand>`")


class CheckRequest(TraceRequest):
    engine: Optional[str] = None
    excluded_labels: List[str] = Field(default_factory=list)


class StatsRequest(TraceRequest):
    engine: Optional[str] = None


class GenerateRequest(BaseModel):
    seed: int = 0
    threads: Optional[int] = None
    events: Optional[int] = None
    variables: Optional[int] = None
    locks: Optional[int] = None
    region_labels: Optional[int] = None
    p_region: Optional[float] = None
    p_close: Optional[float] = None


def _fail(e: RegionTrackError):
    status = 413 if isinstance(e, OracleSizeError) else 400
    raise HTTPException(status_code=status, detail=str(e))


def _engine(name: Optional[str]) -> Optional[str]:
    if name is not None and name not in ENGINE_NAMES:
        raise HTTPException(status_code=400, detail=f"unknown engine: {name}")
    return name


def create_app(runner: Optional[RegionTrackRunner] = None) -> FastAPI:
    """构造 HTTP 应用；所有端点共享同一个 runner"""
    runner = runner or RegionTrackRunner()
    app = FastAPI(title="RegionTrack API", version="0.1.0")

    @app.get("/health")
    def health_check():
        return {"status": "ok", "service": "RegionTrack", "engines": list(ENGINE_NAMES)}

    @app.post("/check")
    def check(req: CheckRequest) -> Dict[str, Any]:
        engine = _engine(req.engine)
        try:
            report = runner.check(runner.parse(req.trace), engine, req.excluded_labels)
        except RegionTrackError as e:
            _fail(e)
        return report.to_dict()

    @app.post("/oracle")
    def oracle(req: TraceRequest) -> Dict[str, Any]:
        try:
            return runner.oracle(runner.parse(req.trace))
        except RegionTrackError as e:
            _fail(e)

    @app.post("/compare")
    def compare(req: TraceRequest) -> Dict[str, Any]:
        try:
            return runner.compare(runner.parse(req.trace)).to_dict()
        except RegionTrackError as e:
            _fail(e)

    @app.post("/stats")
    def stats(req: StatsRequest) -> Dict[str, int]:
        engine = _engine(req.engine)
        try:
            return runner.stats(runner.parse(req.trace), engine)
        except RegionTrackError as e:
            _fail(e)

    @app.post("/generate")
    def generate(req: GenerateRequest) -> Dict[str, Any]:
        try:
            gen_config = runner.generator_config(**req.model_dump(exclude={"seed"}))
        except RegionTrackError as e:
            _fail(e)
        trace = runner.generate(gen_config, req.seed)
        return {"seed": req.seed, "events": len(trace), "trace": serialize_trace(trace)}

    return app


app = create_app()


if __name__ == "__main__":
    uvicorn.run("regiontrack.web:app", host="0.0.0.0", port=8000, reload=True)
