"""Deployment configuration: one JSON file plus environment fallbacks.

A value set in the config file wins over its environment variable; the
environment only fills gaps.  Relative paths in the file resolve against the
file's directory.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .schema import DomainSchema, MeaningRepresentation, load_schema
from .validation import ValidationConfig

ENV_KEYS = {
    "schema_path": "NLGCROWD_SCHEMA",
    "validation_path": "NLGCROWD_VALIDATION",
    "store_path": "NLGCROWD_STORE",
    "mr_set_path": "NLGCROWD_MRS",
    "batches_path": "NLGCROWD_BATCHES",
    "similarity_endpoint": "NLGCROWD_SIMILARITY_URL",
    "similarity_cache": "NLGCROWD_SIMILARITY_CACHE",
    "auth_token": "NLGCROWD_TOKEN",
}

_PATH_KEYS = (
    "schema_path",
    "validation_path",
    "store_path",
    "mr_set_path",
    "batches_path",
    "similarity_cache",
)


@dataclass
class BatchConfig:
    batch_id: str
    modality: str
    mr_ids: tuple[str, ...]
    max_pages_per_worker: int = 20
    open_from: float | None = None
    open_until: float | None = None

    def __post_init__(self) -> None:
        if self.modality not in ("textual", "pictorial"):
            raise ValueError(f"unknown modality {self.modality!r}")
        if self.max_pages_per_worker < 1:
            raise ValueError("max_pages_per_worker must be >= 1")

    def is_open(self, now: float) -> bool:
        if self.open_from is not None and now < self.open_from:
            return False
        if self.open_until is not None and now > self.open_until:
            return False
        return True


@dataclass
class AppConfig:
    schema_path: str | None = None
    validation_path: str | None = None
    store_path: str = "corpus.jsonl"
    mr_set_path: str | None = None
    batches_path: str | None = None
    similarity_endpoint: str | None = None
    similarity_cache: str = "similarity_cache.jsonl"
    auth_token: str | None = None
    host: str = "127.0.0.1"
    port: int = 8040

    def load_schema(self) -> DomainSchema:
        return load_schema(self.schema_path)

    def load_validation(self) -> ValidationConfig:
        if self.validation_path is None:
            return ValidationConfig()
        return ValidationConfig.from_file(self.validation_path)

    def load_batches(self) -> dict[str, BatchConfig]:
        if self.batches_path is None:
            return {}
        doc = json.loads(Path(self.batches_path).read_text("utf-8"))
        batches = {}
        for entry in doc["batches"]:
            batch = BatchConfig(
                batch_id=entry["batch_id"],
                modality=entry["modality"],
                mr_ids=tuple(entry["mr_ids"]),
                max_pages_per_worker=int(entry.get("max_pages_per_worker", 20)),
                open_from=entry.get("open_from"),
                open_until=entry.get("open_until"),
            )
            if batch.batch_id in batches:
                raise ValueError(f"duplicate batch id {batch.batch_id!r}")
            batches[batch.batch_id] = batch
        return batches


def load_config(path: str | Path | None = None, env: Mapping[str, str] | None = None) -> AppConfig:
    env = os.environ if env is None else env
    doc: dict = {}
    base = Path.cwd()
    if path is not None:
        base = Path(path).resolve().parent
        doc = json.loads(Path(path).read_text("utf-8"))

    config = AppConfig()
    for key in vars(config):
        if key in doc:
            setattr(config, key, doc[key])
        elif key in ENV_KEYS and ENV_KEYS[key] in env:
            setattr(config, key, env[ENV_KEYS[key]])

    for key in _PATH_KEYS:
        value = getattr(config, key)
        if value is not None and not Path(value).is_absolute():
            setattr(config, key, str(base / value))
    return config


# --- MR set files -----------------------------------------------------------

def dump_mr_set(
    mrs: list[MeaningRepresentation], seed: int, path: str | Path
) -> None:
    doc = {
        "seed": seed,
        "mrs": [
            {"id": mr.id, "complexity": mr.complexity, "pairs": [list(p) for p in mr.pairs]}
            for mr in mrs
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", "utf-8")


def load_mr_set(path: str | Path, schema: DomainSchema) -> dict[str, MeaningRepresentation]:
    doc = json.loads(Path(path).read_text("utf-8"))
    mrs: dict[str, MeaningRepresentation] = {}
    for entry in doc["mrs"]:
        mr = schema.mr(entry["id"], [tuple(p) for p in entry["pairs"]])
        if mr.id in mrs:
            raise ValueError(f"duplicate MR id {mr.id!r}")
        mrs[mr.id] = mr
    return mrs
