"""Runtime settings and the packaged fixture paths.

The package ships a small Northwind-style dataset (catalog, CSV files,
default lexicon) used as the out-of-the-box configuration for the CLI and
service; every path can be overridden by flags or environment variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib.resources import files
from pathlib import Path

from .resolver import MatchConfig

ENV_CATALOG = "FLEXQ_CATALOG"
ENV_DATA = "FLEXQ_DATA"
ENV_LEXICON = "FLEXQ_LEXICON"
ENV_KB = "FLEXQ_KB"

DEFAULT_KB_FILENAME = "flexq_kb.jsonl"


def fixtures_dir() -> Path:
    return Path(str(files("flexq") / "fixtures"))


@dataclass(frozen=True)
class Settings:
    catalog_path: Path
    data_dir: Path
    lexicon_path: Path
    kb_path: Path
    max_distance: int = 2
    use_damerau: bool = False

    @property
    def match_config(self) -> MatchConfig:
        return MatchConfig(max_distance=self.max_distance,
                           use_damerau=self.use_damerau)

    @classmethod
    def with_defaults(cls, workdir: str | Path = ".",
                      catalog: str | Path | None = None,
                      data: str | Path | None = None,
                      lexicon: str | Path | None = None,
                      kb: str | Path | None = None,
                      max_distance: int = 2,
                      use_damerau: bool = False) -> "Settings":
        """Resolve paths against ``workdir``; unset ones use the packaged
        fixtures (and a workdir-local knowledge journal)."""
        workdir = Path(workdir)
        fixtures = fixtures_dir()

        def resolve(value, default):
            if value is None:
                return default
            p = Path(value)
            return p if p.is_absolute() else workdir / p

        return cls(
            catalog_path=resolve(catalog, fixtures / "catalog.json"),
            data_dir=resolve(data, fixtures),
            lexicon_path=resolve(lexicon, fixtures / "lexicon.json"),
            kb_path=resolve(kb, workdir / DEFAULT_KB_FILENAME),
            max_distance=max_distance,
            use_damerau=use_damerau,
        )
