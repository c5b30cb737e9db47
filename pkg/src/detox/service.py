"""HTTP API over the engine: scoring, classification, filtering, scanning,
and single-user profile persistence with optimistic versioning.

Bodies are UTF-8 JSON over HTTP/1.1. The profile store writes are atomic
(temp file + rename) so a killed process never leaves a corrupt file.
Every ServiceConfig field can be overridden with a ``DETOX_``-prefixed
environment variable.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.middleware.cors import CORSMiddleware

from . import pipeline, textmodel
from .extraction import PatternError, PatternSet, load_patterns_file
from .lexicon import Lexicon, load_lexicon_file, score
from .matchlist import default_profanity_words
from .pipeline import FilterDeps, Mode, ProfileError, UserProfile
from .textmodel import ClassifierModel, extract_keywords, load_model, predict

DEFAULT_BODY_LIMIT = 5 * 1024 * 1024
ENV_PREFIX = "DETOX_"


class ConfigError(ValueError):
    """Raised when the service configuration is unusable at startup."""


def _packaged(name: str) -> Path:
    return Path(str(resources.files("detox").joinpath(f"data/{name}")))


@dataclass
class ServiceConfig:
    patterns_dir: Path
    profile_path: Path
    host: str = "127.0.0.1"
    port: int = 8732
    lexicon_path: Path = field(default_factory=lambda: _packaged("AFINN-111.txt"))
    profanity_path: Path = field(default_factory=lambda: _packaged("profanity.txt"))
    model_path: Path | None = None
    body_limit: int = DEFAULT_BODY_LIMIT
    cors_origins: tuple[str, ...] = ("*",)

    def __post_init__(self) -> None:
        self.patterns_dir = Path(self.patterns_dir)
        self.profile_path = Path(self.profile_path)
        self.lexicon_path = Path(self.lexicon_path)
        self.profanity_path = Path(self.profanity_path)
        if self.model_path is not None:
            self.model_path = Path(self.model_path)
        if not 1 <= self.port <= 65535:
            raise ConfigError(f"port {self.port} outside [1, 65535]")

    def validate_paths(self) -> None:
        for label, path in (
            ("patterns_dir", self.patterns_dir),
            ("lexicon_path", self.lexicon_path),
            ("profanity_path", self.profanity_path),
        ):
            if not path.exists():
                raise ConfigError(f"{label} does not exist: {path}")
        if self.model_path is not None and not self.model_path.exists():
            raise ConfigError(f"model_path does not exist: {self.model_path}")
        if not self.profile_path.parent.exists():
            raise ConfigError(f"profile directory does not exist: {self.profile_path.parent}")

    @classmethod
    def from_env(cls, **overrides) -> ServiceConfig:
        """Build a config from DETOX_* environment variables plus overrides."""

        def env(name: str) -> str | None:
            return os.environ.get(ENV_PREFIX + name)

        values: dict = {}
        if env("PATTERNS_DIR"):
            values["patterns_dir"] = Path(env("PATTERNS_DIR"))
        if env("PROFILE_PATH"):
            values["profile_path"] = Path(env("PROFILE_PATH"))
        if env("HOST"):
            values["host"] = env("HOST")
        if env("PORT"):
            values["port"] = int(env("PORT"))
        if env("LEXICON_PATH"):
            values["lexicon_path"] = Path(env("LEXICON_PATH"))
        if env("PROFANITY_PATH"):
            values["profanity_path"] = Path(env("PROFANITY_PATH"))
        if env("MODEL_PATH"):
            values["model_path"] = Path(env("MODEL_PATH"))
        if env("BODY_LIMIT"):
            values["body_limit"] = int(env("BODY_LIMIT"))
        if env("CORS_ORIGINS"):
            values["cors_origins"] = tuple(
                origin.strip() for origin in env("CORS_ORIGINS").split(",") if origin.strip()
            )
        values.update(overrides)
        if "patterns_dir" not in values:
            raise ConfigError("patterns_dir is required (flag or DETOX_PATTERNS_DIR)")
        if "profile_path" not in values:
            raise ConfigError("profile_path is required (flag or DETOX_PROFILE_PATH)")
        return cls(**values)


class VersionConflictError(Exception):
    """PUT carried a version that does not match the stored profile."""


class ProfileStore:
    """Single-document profile persistence with atomic, serialized writes."""

    def __init__(self, path: Path) -> None:
        self.path = Path(path)
        self._lock = threading.Lock()

    def load(self) -> UserProfile:
        if not self.path.exists():
            return UserProfile()
        with open(self.path, encoding="utf-8") as handle:
            return UserProfile.from_dict(json.load(handle))

    def write(self, profile: UserProfile) -> None:
        """Atomic write: temp file in the same directory, fsync, rename."""
        descriptor, temp_name = tempfile.mkstemp(
            dir=str(self.path.parent), prefix=self.path.name, suffix=".tmp"
        )
        try:
            with os.fdopen(descriptor, "w", encoding="utf-8") as handle:
                json.dump(profile.to_dict(), handle)
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(temp_name, self.path)
        except BaseException:
            try:
                os.unlink(temp_name)
            except OSError:
                pass
            raise

    def put(self, document: dict) -> UserProfile:
        """Validate and persist; the body's version must equal the stored one."""
        candidate = UserProfile.from_dict(document)
        with self._lock:
            current = self.load()
            if candidate.version != current.version:
                raise VersionConflictError(
                    f"stored version is {current.version}, request carried {candidate.version}"
                )
            accepted = replace(candidate, version=current.version + 1)
            self.write(accepted)
            return accepted


def _error(status: int, message: str, **extra) -> JSONResponse:
    body = {"error": message}
    body.update(extra)
    return JSONResponse(body, status_code=status)


class EngineState:
    """Immutable engine inputs shared across requests, plus session originals."""

    def __init__(self, config: ServiceConfig) -> None:
        config.validate_paths()
        self.config = config
        self.lexicon: Lexicon = load_lexicon_file(config.lexicon_path)
        profanity_text = Path(config.profanity_path).read_text("utf-8")
        self.profanity_words = tuple(
            line.strip() for line in profanity_text.splitlines() if line.strip()
        )
        self.model: ClassifierModel | None = (
            load_model(config.model_path) if config.model_path else None
        )
        self.patterns: dict[str, PatternSet] = {}
        for path in sorted(Path(config.patterns_dir).glob("*.json")):
            try:
                patterns = load_patterns_file(path)
            except PatternError as exc:
                raise ConfigError(f"bad pattern config {path}: {exc}") from exc
            self.patterns[patterns.site_id or path.stem] = patterns
        self.store = ProfileStore(config.profile_path)
        self.deps = FilterDeps(
            lexicon=self.lexicon,
            model=self.model,
            stopwords=textmodel.default_stopwords(),
            profanity_words=self.profanity_words,
        )
        self.originals: dict[int, str] = {}
        self.originals_lock = threading.Lock()


async def _read_json(request: Request, limit: int):
    """Return (document, error_response); enforces the body size limit."""
    declared = request.headers.get("content-length")
    if declared is not None:
        try:
            if int(declared) > limit:
                return None, _error(413, f"request body exceeds {limit} bytes")
        except ValueError:
            return None, _error(400, "invalid Content-Length header")
    body = await request.body()
    if len(body) > limit:
        return None, _error(413, f"request body exceeds {limit} bytes")
    try:
        document = json.loads(body)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        return None, _error(400, f"request body is not valid JSON: {exc}")
    if not isinstance(document, dict):
        return None, _error(400, "request body must be a JSON object")
    return document, None


def _require_text(document: dict):
    text = document.get("text")
    if not isinstance(text, str):
        return None, _error(400, "field 'text' must be a string")
    return text, None


def create_app(config: ServiceConfig) -> FastAPI:
    state = EngineState(config)
    app = FastAPI(title="detox", docs_url=None, redoc_url=None)
    app.state.engine = state
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(config.cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )
    limit = config.body_limit

    @app.post("/v1/score")
    async def score_endpoint(request: Request):
        document, error = await _read_json(request, limit)
        if error:
            return error
        text, error = _require_text(document)
        if error:
            return error
        profile = state.store.load()
        report = score(text, state.lexicon, profile.overrides, profile.sensitivity)
        return JSONResponse(report.to_dict())

    @app.post("/v1/classify")
    async def classify_endpoint(request: Request):
        document, error = await _read_json(request, limit)
        if error:
            return error
        text, error = _require_text(document)
        if error:
            return error
        if state.model is None:
            return _error(503, "classifier model not loaded")
        return JSONResponse(predict(state.model, text).to_dict())

    @app.post("/v1/keywords")
    async def keywords_endpoint(request: Request):
        document, error = await _read_json(request, limit)
        if error:
            return error
        text, error = _require_text(document)
        if error:
            return error
        k = document.get("k", 5)
        if isinstance(k, bool) or not isinstance(k, int) or k < 1:
            return _error(400, "field 'k' must be a positive integer")
        return JSONResponse(extract_keywords(text, state.deps.stopwords, k).to_dict())

    @app.post("/v1/filter")
    async def filter_endpoint(request: Request):
        document, error = await _read_json(request, limit)
        if error:
            return error
        html = document.get("html")
        if not isinstance(html, str):
            return _error(400, "field 'html' must be a string")
        site_id = document.get("site_id")
        if not isinstance(site_id, str) or not site_id:
            return _error(400, "field 'site_id' must be a non-empty string")
        patterns = state.patterns.get(site_id)
        if patterns is None:
            known = ", ".join(sorted(state.patterns))
            return _error(404, f"unknown site_id {site_id!r} (known: {known})")
        mode_name = document.get("mode", Mode.SEARCH_RESULTS.value)
        try:
            mode = Mode(mode_name)
        except ValueError:
            return _error(400, f"unknown mode {mode_name!r} (known: search, page)")
        profile = state.store.load()
        result = pipeline.filter_document(html, patterns, profile, state.deps, mode)
        with state.originals_lock:
            state.originals.clear()
            state.originals.update(result.originals)
        return JSONResponse(
            {
                "html": result.html,
                "decisions": [decision.to_dict() for decision in result.decisions],
                "health": result.health.to_dict(),
            }
        )

    @app.get("/v1/original/{item_id}")
    async def original_endpoint(item_id: int):
        with state.originals_lock:
            markup = state.originals.get(item_id)
        if markup is None:
            return _error(404, f"no stored original for item {item_id}")
        return JSONResponse({"item_id": item_id, "html": markup})

    @app.post("/v1/scan")
    async def scan_endpoint(request: Request):
        document, error = await _read_json(request, limit)
        if error:
            return error
        content = document.get("content")
        if not isinstance(content, str):
            return _error(400, "field 'content' must be a string")
        site = document.get("site", "")
        if not isinstance(site, str):
            return _error(400, "field 'site' must be a string")
        profile = state.store.load()
        return JSONResponse(pipeline.scan_page(content, site, profile).to_dict())

    @app.get("/v1/profile")
    async def get_profile():
        return JSONResponse(state.store.load().to_dict())

    @app.put("/v1/profile")
    async def put_profile(request: Request):
        document, error = await _read_json(request, limit)
        if error:
            return error
        try:
            stored = state.store.put(document)
        except VersionConflictError as exc:
            return _error(409, str(exc))
        except ProfileError as exc:
            return _error(422, str(exc), fields=exc.fields)
        return JSONResponse(stored.to_dict())

    @app.get("/v1/health")
    async def health_endpoint():
        return JSONResponse(
            {
                "status": "ok",
                "model_loaded": state.model is not None,
                "lexicon_terms": len(state.lexicon),
                "patterns": sorted(state.patterns),
            }
        )

    return app


def serve(config: ServiceConfig) -> None:  # pragma: no cover - process entry
    import uvicorn

    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
