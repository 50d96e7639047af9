"""flexq: flexible natural-language querying over relational data.

Pipeline: parse the query into display/criteria parts, bind them to the
schema catalog (exact, synonym, then fuzzy edit-distance matching), emit
SQL, execute against the CSV-backed tables, and learn from accept/reject
feedback so repeated queries replay accepted translations.
"""

from .catalog import SchemaCatalog, load_catalog
from .engine import Engine, TranslateResult
from .errors import FlexqError
from .executor import ResultSet, execute
from .knowledge import KnowledgeStore, normalize_query
from .lexicon import Lexicon, load_lexicon, save_lexicon
from .matching import best_match, damerau_levenshtein, levenshtein
from .parser import QueryIR, parse
from .resolver import ResolvedQuery, resolve
from .sqlgen import SqlText, build_sql, canonical_sql

__version__ = "0.1.0"

__all__ = [
    "Engine", "FlexqError", "KnowledgeStore", "Lexicon", "QueryIR",
    "ResolvedQuery", "ResultSet", "SchemaCatalog", "SqlText",
    "TranslateResult", "best_match", "build_sql", "canonical_sql",
    "damerau_levenshtein", "execute", "levenshtein", "load_catalog",
    "load_lexicon", "normalize_query", "parse", "resolve", "save_lexicon",
]
