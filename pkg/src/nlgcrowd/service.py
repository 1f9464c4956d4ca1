"""HTTP service orchestrating collection: task issuance, validated intake,
ratings, similarity scoring, export and analysis.

State transitions for one worker (issuing a task, accepting a submission,
counting quota) run under that worker's lock, so concurrent requests can
never issue the same MR twice or push a worker past the page quota.
"""

from __future__ import annotations

import json
import threading
import time
import zlib
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from .analysis import build_analysis
from .config import AppConfig, BatchConfig
from .render import RenderConfig, load_render_config, render_svg
from .schema import DomainSchema, MeaningRepresentation, serialize_textual_mr
from .similarity import SynonymLexicon
from .store import (
    CorpusStore,
    RatingRecord,
    SubmissionRecord,
    TaskRecord,
    export_records,
)
from .validation import (
    Submission,
    ValidationConfig,
    min_required_length,
    required_values,
    validate_submission,
)

# Resolves a submitter's country from connection facts.  Production deploys
# plug in whatever geo lookup they run behind; the default trusts the
# X-Country header a fronting proxy sets.
CountryResolver = Callable[[str | None, dict], str]


def header_country_resolver(header: str = "x-country") -> CountryResolver:
    def resolve(client_host: str | None, headers: dict) -> str:
        return headers.get(header, "")

    return resolve


class SubmissionBody(BaseModel):
    task_id: str
    worker: str
    text: str


class RatingBody(BaseModel):
    utterance_id: str
    rater_id: str
    rater_kind: str
    informativeness: int | str
    naturalness: int | str
    phrasing: int | str
    grammatical: bool


@dataclass
class ServiceState:
    schema: DomainSchema
    mrs: dict[str, MeaningRepresentation]
    batches: dict[str, BatchConfig]
    store: CorpusStore
    validation: ValidationConfig
    render_config: RenderConfig
    lexicon: SynonymLexicon
    auth_token: str | None = None
    clock: Callable[[], float] = time.time
    open_tasks: dict[str, TaskRecord] = field(default_factory=dict)
    _store_lock: threading.Lock = field(default_factory=threading.Lock)
    _worker_locks: defaultdict = field(default_factory=lambda: defaultdict(threading.Lock))
    _rated: set = field(default_factory=set)
    _accepted_texts: dict = field(default_factory=dict)
    _accepted_count: dict = field(default_factory=dict)
    _answered_mrs: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        # Rebuild the derived indexes from whatever the store already holds.
        for sub in self.store.corpus.submissions:
            self._note_accepted(sub)
        closed = {s.task_id for s in self.store.corpus.submissions}
        for task in self.store.corpus.tasks:
            if task.task_id not in closed:
                self.open_tasks[task.task_id] = task
        for r in self.store.corpus.ratings:
            self._rated.add((r.utterance_id, r.rater_id, r.rater_kind))

    def worker_lock(self, worker: str) -> threading.Lock:
        return self._worker_locks[worker]

    def _note_accepted(self, sub: SubmissionRecord) -> None:
        self._accepted_texts.setdefault(sub.worker, []).append(sub.text)
        key = (sub.worker, sub.batch_id)
        self._accepted_count[key] = self._accepted_count.get(key, 0) + 1
        self._answered_mrs.setdefault((sub.worker, sub.batch_id), set()).add(sub.mr_id)

    def accepted_count(self, worker: str, batch_id: str) -> int:
        return self._accepted_count.get((worker, batch_id), 0)

    def issue_task(self, worker: str, batch: BatchConfig) -> TaskRecord | None:
        """Pick the next unseen MR for this worker, or None when exhausted.

        Issuance keeps accepted + open <= quota, and every acceptance trades
        one open task for one accepted submission, so the quota can never be
        exceeded whatever the request interleaving.
        """
        with self.worker_lock(worker):
            with self._store_lock:
                open_for_worker = [
                    t for t in self.open_tasks.values()
                    if t.worker == worker and t.batch_id == batch.batch_id
                ]
            if self.accepted_count(worker, batch.batch_id) + len(open_for_worker) >= (
                batch.max_pages_per_worker
            ):
                return None
            taken = self._answered_mrs.get((worker, batch.batch_id), set())
            taken = taken | {t.mr_id for t in open_for_worker}
            mr_id = next((m for m in batch.mr_ids if m not in taken), None)
            if mr_id is None:
                return None
            with self._store_lock:
                task = TaskRecord(
                    task_id=self.store.next_id("task"),
                    mr_id=mr_id,
                    batch_id=batch.batch_id,
                    modality=batch.modality,
                    worker=worker,
                    issued_at=self.clock(),
                )
                self.store.append(task)
                self.open_tasks[task.task_id] = task
            return task

    def accept_submission(self, task: TaskRecord, text: str, country: str):
        """Validate and, if clean, persist a submission for an open task."""
        with self.worker_lock(task.worker):
            if task.task_id not in self.open_tasks:
                raise KeyError(task.task_id)
            submitted_at = max(self.clock(), task.issued_at)
            sub = Submission(
                worker_id=task.worker,
                mr_id=task.mr_id,
                text=text,
                issued_at=task.issued_at,
                submitted_at=submitted_at,
                modality=task.modality,
                batch_id=task.batch_id,
                country_code=country,
            )
            history = list(self._accepted_texts.get(task.worker, []))
            report = validate_submission(
                sub, self.mrs[task.mr_id], self.schema, history, self.validation
            )
            if not report.accepted:
                return None, report
            with self._store_lock:
                record = SubmissionRecord(
                    utterance_id=self.store.next_id("submission"),
                    task_id=task.task_id,
                    worker=task.worker,
                    mr_id=task.mr_id,
                    batch_id=task.batch_id,
                    modality=task.modality,
                    text=text,
                    issued_at=task.issued_at,
                    submitted_at=submitted_at,
                    country=country,
                )
                self.store.append(record)
                self._note_accepted(record)
                del self.open_tasks[task.task_id]
            return record, report

    def add_rating(self, body: RatingBody) -> RatingRecord:
        with self._store_lock:
            key = (body.utterance_id, body.rater_id, body.rater_kind)
            if key in self._rated:
                raise FileExistsError("duplicate rating")
            record = RatingRecord(
                rating_id=self.store.next_id("rating"),
                utterance_id=body.utterance_id,
                rater_id=body.rater_id,
                rater_kind=body.rater_kind,
                informativeness=body.informativeness,
                naturalness=body.naturalness,
                phrasing=body.phrasing,
                grammatical=body.grammatical,
            )
            self.store.append(record)
            self._rated.add(key)
            return record


def build_state(
    config: AppConfig,
    country_resolver: CountryResolver | None = None,
    clock: Callable[[], float] = time.time,
) -> tuple[ServiceState, CountryResolver]:
    from .config import load_mr_set

    schema = config.load_schema()
    if config.mr_set_path is None:
        raise ValueError("config needs mr_set_path (generate one with gen-mrs)")
    mrs = load_mr_set(config.mr_set_path, schema)
    state = ServiceState(
        schema=schema,
        mrs=mrs,
        batches=config.load_batches(),
        store=CorpusStore(config.store_path),
        validation=config.load_validation(),
        render_config=load_render_config(schema),
        lexicon=SynonymLexicon.load(),
        auth_token=config.auth_token,
        clock=clock,
    )
    return state, (country_resolver or header_country_resolver())


def create_app(
    config: AppConfig,
    country_resolver: CountryResolver | None = None,
    clock: Callable[[], float] = time.time,
) -> FastAPI:
    state, resolver = build_state(config, country_resolver, clock)
    app = FastAPI(title="nlgcrowd", version="0.1.0")
    app.state.service = state

    def check_auth(request: Request) -> None:
        if state.auth_token is None:
            return
        if request.headers.get("authorization") != f"Bearer {state.auth_token}":
            raise HTTPException(status_code=401, detail="missing or wrong token")

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "mrs": len(state.mrs), "batches": len(state.batches)}

    @app.get("/batches/{batch_id}/next-task")
    def next_task(batch_id: str, worker: str, request: Request):
        check_auth(request)
        batch = state.batches.get(batch_id)
        if batch is None:
            raise HTTPException(status_code=404, detail=f"unknown batch {batch_id!r}")
        if not batch.is_open(state.clock()):
            raise HTTPException(status_code=409, detail=f"batch {batch_id!r} is closed")
        if not worker:
            raise HTTPException(status_code=422, detail="worker query parameter required")
        task = state.issue_task(worker, batch)
        if task is None:
            return {"exhausted": True}
        mr = state.mrs[task.mr_id]
        return {
            "exhausted": False,
            "task_id": task.task_id,
            "mr_id": task.mr_id,
            "batch_id": task.batch_id,
            "modality": task.modality,
            "issued_at": task.issued_at,
            "min_length": min_required_length(mr, state.validation),
            "required_elements": required_values(mr, state.schema),
            "min_page_seconds": state.validation.min_page_seconds,
            "mr_text_url": f"/mrs/{task.mr_id}.txt",
            "mr_svg_url": f"/mrs/{task.mr_id}.svg",
        }

    def _mr_or_404(mr_id: str) -> MeaningRepresentation:
        mr = state.mrs.get(mr_id)
        if mr is None:
            raise HTTPException(status_code=404, detail=f"unknown MR {mr_id!r}")
        return mr

    @app.get("/mrs/{mr_id}.txt", response_class=PlainTextResponse)
    def mr_text(mr_id: str):
        mr = _mr_or_404(mr_id)
        return serialize_textual_mr(mr, seed=zlib.crc32(mr_id.encode()))

    @app.get("/mrs/{mr_id}.svg")
    def mr_svg(mr_id: str):
        mr = _mr_or_404(mr_id)
        svg = render_svg(mr, state.render_config, zlib.crc32(mr_id.encode()), state.schema)
        return Response(content=svg, media_type="image/svg+xml")

    @app.post("/submissions")
    def submit(body: SubmissionBody, request: Request):
        check_auth(request)
        task = state.open_tasks.get(body.task_id)
        if task is None:
            known = any(t.task_id == body.task_id for t in state.store.corpus.tasks)
            if known:
                raise HTTPException(status_code=409, detail="task already closed")
            raise HTTPException(status_code=404, detail=f"no task {body.task_id!r}")
        if task.worker != body.worker:
            raise HTTPException(status_code=403, detail="task was issued to another worker")
        batch = state.batches[task.batch_id]
        if state.accepted_count(body.worker, task.batch_id) >= batch.max_pages_per_worker:
            raise HTTPException(status_code=409, detail="page quota reached")
        country = resolver(request.client.host if request.client else None, dict(request.headers))
        try:
            record, report = state.accept_submission(task, body.text, country)
        except KeyError:
            raise HTTPException(status_code=409, detail="task already closed")
        if record is None:
            return JSONResponse(
                status_code=200,
                content={"status": "rejected", "report": report.to_dict()},
            )
        return {"status": "accepted", "utterance_id": record.utterance_id}

    @app.post("/ratings")
    def rate(body: RatingBody, request: Request):
        check_auth(request)
        if body.utterance_id not in {s.utterance_id for s in state.store.corpus.submissions}:
            raise HTTPException(status_code=404, detail=f"no utterance {body.utterance_id!r}")
        try:
            record = state.add_rating(body)
        except FileExistsError:
            raise HTTPException(
                status_code=409,
                detail=f"{body.rater_id!r} already rated {body.utterance_id!r} as {body.rater_kind}",
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {"rating_id": record.rating_id}

    @app.get("/export")
    def export(request: Request, include_ids: bool = False):
        check_auth(request)
        with state._store_lock:
            lines = [
                json.dumps(rec, ensure_ascii=False)
                for rec in export_records(
                    state.store.corpus, state.mrs, state.schema, include_ids=include_ids
                )
            ]
        return Response(content="\n".join(lines) + ("\n" if lines else ""),
                        media_type="application/x-ndjson")

    @app.get("/report")
    def report(request: Request, include_self: bool = False, format: str = "json"):
        check_auth(request)
        with state._store_lock:
            try:
                analysis = build_analysis(state.store.corpus, state.mrs, include_self)
            except ValueError as exc:
                raise HTTPException(status_code=409, detail=str(exc))
        if format == "text":
            return PlainTextResponse(analysis.to_text())
        return JSONResponse(content=analysis.to_dict())

    return app
