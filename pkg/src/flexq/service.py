"""HTTP face of the layer: translate, execute, feedback, schema, kb.

All responses are JSON. Pipeline failures come back as 400 with the stage
-annotated error payload (stage, code, message, nearest candidates) so
clients can render actionable suggestions. CORS is open for the web
console.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .engine import Engine
from .errors import ExecuteError, FlexqError, KnowledgeError
from .lexicon import LexiconError


class TranslateRequest(BaseModel):
    query: str


class ExecuteRequest(BaseModel):
    query_id: str


class FeedbackRequest(BaseModel):
    query_id: str
    verdict: str
    note: str | None = None


class ConjunctionRequest(BaseModel):
    word: str


def create_app(engine: Engine) -> FastAPI:
    app = FastAPI(title="flexq", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.post("/api/translate")
    def translate(body: TranslateRequest) -> dict:
        try:
            return engine.translate(body.query).to_dict()
        except FlexqError as exc:
            raise HTTPException(status_code=400, detail=exc.to_dict())

    @app.post("/api/execute")
    def execute(body: ExecuteRequest) -> dict:
        try:
            return engine.execute_id(body.query_id).to_dict()
        except KnowledgeError as exc:
            raise HTTPException(status_code=404, detail=exc.to_dict())
        except ExecuteError as exc:
            raise HTTPException(status_code=422, detail=exc.to_dict())

    @app.post("/api/feedback")
    def feedback(body: FeedbackRequest) -> dict:
        if body.verdict not in ("accept", "reject"):
            raise HTTPException(
                status_code=400,
                detail={"stage": "feedback", "code": "bad-verdict",
                        "message": f"verdict must be accept or reject, got "
                                   f"{body.verdict!r}"})
        try:
            entry = engine.feedback_id(body.query_id, body.verdict, body.note)
        except KnowledgeError as exc:
            raise HTTPException(status_code=404, detail=exc.to_dict())
        return {"status": entry.status, "accepts": entry.accepts,
                "rejects": entry.rejects}

    @app.get("/api/schema")
    def schema() -> dict:
        return engine.schema_summary()

    @app.get("/api/kb")
    def kb(key: str) -> list[dict]:
        return engine.kb_entries(key)

    @app.post("/api/lexicon/conjunctions")
    def add_conjunction(body: ConjunctionRequest) -> dict:
        try:
            lexicon = engine.add_conjunction_word(body.word)
        except LexiconError as exc:
            raise HTTPException(status_code=400, detail=exc.to_dict())
        return {"conjunctions": sorted(lexicon.conjunctions)}

    return app
