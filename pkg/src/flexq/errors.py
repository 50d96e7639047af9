"""Exception hierarchy shared by the whole pipeline.

Every error carries a short machine-readable ``code`` plus the pipeline
``stage`` it surfaced from, so CLI and HTTP responses can annotate failures
without string-parsing messages. Resolver errors additionally carry the
nearest candidates with their distances.
"""

from __future__ import annotations


class FlexqError(Exception):
    """Base error; ``stage`` and ``code`` identify where and what failed."""

    stage = "pipeline"
    code = "error"

    def __init__(self, message: str, *, code: str | None = None,
                 candidates: list[tuple[str, int]] | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code
        self.candidates = list(candidates or [])
        self.remedy: dict | None = None

    @property
    def message(self) -> str:
        return str(self)

    def to_dict(self) -> dict:
        out = {"stage": self.stage, "code": self.code, "message": self.message}
        if self.candidates:
            out["candidates"] = [
                {"candidate": name, "distance": dist}
                for name, dist in self.candidates
            ]
        if self.remedy:
            out["remedy"] = dict(self.remedy)
        return out

    def __str__(self) -> str:
        return super().__str__()


class ConfigError(FlexqError):
    stage = "config"


class LexiconError(FlexqError):
    stage = "lexicon"


class CatalogError(FlexqError):
    stage = "catalog"


class ParseError(FlexqError):
    stage = "parse"


class MatchingError(FlexqError):
    stage = "matching"


class ResolveError(FlexqError):
    stage = "resolve"


class ExecuteError(FlexqError):
    stage = "execute"


class KnowledgeError(FlexqError):
    stage = "knowledge"
