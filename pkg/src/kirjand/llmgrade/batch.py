"""Concurrent batch execution of completion calls.

Every call is cached under a content hash of (model, instructions,
user text, temperature); cache entries hold the full request and
response, so the cache directory doubles as the raw-response archive.
Retries use exponential backoff with jitter.  A budget ceiling is
checked twice: an upfront estimate refuses to start a batch that cannot
fit, and a running total aborts mid-flight if reality disagrees.
"""

from __future__ import annotations

import hashlib
import json
import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

from ..corpus import ASPECTS, EssayRecord, RubricAspect
from ..errors import BudgetExceededError, TransportError
from ..metrics import ScoreSheetSet
from .providers import (
    EndpointConfig,
    Provider,
    ProviderResponse,
    TransientTransportError,
    estimate_tokens,
    make_provider,
)
from .rubric import RubricConfig, build_prompt, build_user_text, parse_grade


@dataclass(frozen=True)
class BatchTask:
    task_id: tuple
    instructions: str
    user_text: str
    temperature: float


@dataclass
class TaskResult:
    task_id: tuple
    text: str | None
    from_cache: bool
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.text is not None


@dataclass
class RunLedger:
    """Accounting for one batch: `requests` counts tasks that went to
    the network (retries tracked separately), so cache_hits + requests
    always equals the number of tasks processed."""

    requests: int = 0
    cache_hits: int = 0
    retries: int = 0
    failures: int = 0
    input_tokens: int = 0
    output_tokens: int = 0
    estimated_cost: float = 0.0

    def to_dict(self) -> dict:
        return {
            "requests": self.requests,
            "cache_hits": self.cache_hits,
            "retries": self.retries,
            "failures": self.failures,
            "input_tokens": self.input_tokens,
            "output_tokens": self.output_tokens,
            "estimated_cost": round(self.estimated_cost, 6),
        }


def cache_key(model_id: str, instructions: str, user_text: str, temperature: float) -> str:
    blob = json.dumps(
        {
            "model_id": model_id,
            "instructions": instructions,
            "user_text": user_text,
            "temperature": temperature,
        },
        ensure_ascii=False,
        sort_keys=True,
    )
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _cache_path(cache_dir: Path, key: str) -> Path:
    return cache_dir / f"{key}.json"


def _read_cache(cache_dir: Path, key: str) -> dict | None:
    path = _cache_path(cache_dir, key)
    if not path.exists():
        return None
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError):
        return None  # unreadable entries are treated as misses


def _write_cache(cache_dir: Path, key: str, entry: dict) -> None:
    path = _cache_path(cache_dir, key)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(entry, ensure_ascii=False, indent=1), encoding="utf-8")
    tmp.replace(path)


def _estimate_upfront_cost(tasks: Sequence[BatchTask], config: EndpointConfig) -> float:
    input_tokens = sum(estimate_tokens(t.instructions + t.user_text) for t in tasks)
    output_tokens = (config.max_output_tokens or 0) * len(tasks)
    return (
        input_tokens * config.price_in + output_tokens * config.price_out
    ) / 1_000_000.0


def run_batch(
    tasks: Sequence[BatchTask],
    config: EndpointConfig,
    cache_dir: str | Path,
    budget_usd: float | None = None,
    provider: Provider | None = None,
    ledger: RunLedger | None = None,
) -> dict[tuple, TaskResult]:
    """Execute tasks with caching and bounded concurrency.

    Transport failures that survive every retry mark their task as
    failed without sinking the batch.  A breached budget, by contrast,
    aborts everything: the remaining tasks are skipped and the batch
    raises after accounting for what already ran.
    """
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    if provider is None:
        provider = make_provider(config)
    if ledger is None:
        ledger = RunLedger()

    seen_ids = set()
    for t in tasks:
        if t.task_id in seen_ids:
            raise ValueError(f"duplicate task id {t.task_id!r}")
        seen_ids.add(t.task_id)

    if budget_usd is not None:
        upfront = _estimate_upfront_cost(tasks, config)
        if upfront > budget_usd:
            raise BudgetExceededError(
                f"estimated cost ${upfront:.4f} exceeds budget ${budget_usd:.4f}"
            )

    lock = threading.Lock()
    abort = threading.Event()
    results: dict[tuple, TaskResult] = {}

    def handle(task: BatchTask) -> TaskResult:
        if abort.is_set():
            return TaskResult(task.task_id, None, False, error="aborted: budget exceeded")
        key = cache_key(config.model_id, task.instructions, task.user_text, task.temperature)
        cached = _read_cache(cache_dir, key)
        if cached is not None:
            with lock:
                ledger.cache_hits += 1
            return TaskResult(task.task_id, cached["response_text"], True)

        jitter = random.Random(key)
        response: ProviderResponse | None = None
        error: str | None = None
        attempts = 0
        for attempt in range(1, config.max_retries + 2):
            if abort.is_set():
                return TaskResult(task.task_id, None, False, error="aborted: budget exceeded")
            attempts = attempt
            try:
                response = provider.complete(
                    task.instructions, task.user_text, task.temperature, attempt=attempt
                )
                error = None
                break
            except TransientTransportError as exc:
                error = str(exc)
                if attempt <= config.max_retries:
                    time.sleep(config.retry_base_s * (2 ** (attempt - 1)) * (1 + jitter.random()))
            except TransportError as exc:
                error = str(exc)
                break

        with lock:
            ledger.requests += 1
            ledger.retries += attempts - 1
            if response is None:
                ledger.failures += 1
            else:
                ledger.input_tokens += response.input_tokens
                ledger.output_tokens += response.output_tokens
                ledger.estimated_cost += (
                    response.input_tokens * config.price_in
                    + response.output_tokens * config.price_out
                ) / 1_000_000.0
                if budget_usd is not None and ledger.estimated_cost > budget_usd:
                    abort.set()
        if response is None:
            return TaskResult(task.task_id, None, False, error=error)
        _write_cache(
            cache_dir,
            key,
            {
                "model_id": config.model_id,
                "temperature": task.temperature,
                "instructions": task.instructions,
                "user_text": task.user_text,
                "response_text": response.text,
                "input_tokens": response.input_tokens,
                "output_tokens": response.output_tokens,
                "created_at": datetime.now(timezone.utc).isoformat(),
            },
        )
        return TaskResult(task.task_id, response.text, False)

    max_workers = max(1, config.concurrency_limit)
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        futures = {pool.submit(handle, t): t for t in tasks}
        for future in as_completed(futures):
            result = future.result()
            results[result.task_id] = result

    if abort.is_set():
        raise BudgetExceededError(
            f"running cost ${ledger.estimated_cost:.4f} exceeded budget ${budget_usd:.4f}"
        )
    return results


# --- grading orchestration ---------------------------------------------


@dataclass
class GradeFailure:
    essay_id: str
    aspect: RubricAspect
    reason: str


@dataclass
class GradeRunResult:
    sheet_set: ScoreSheetSet
    ledger: RunLedger
    failures: list[GradeFailure] = field(default_factory=list)


def grading_tasks(
    records: Sequence[EssayRecord], rubric: RubricConfig, config: EndpointConfig
) -> list[BatchTask]:
    prompts = {aspect: build_prompt(rubric, aspect) for aspect in ASPECTS}
    return [
        BatchTask(
            task_id=(record.essay_id, aspect.value),
            instructions=prompts[aspect],
            user_text=build_user_text(record.text),
            temperature=config.temperature,
        )
        for record in records
        for aspect in ASPECTS
    ]


def grade_corpus(
    records: Sequence[EssayRecord],
    rubric: RubricConfig,
    config: EndpointConfig,
    cache_dir: str | Path,
    budget_usd: float | None = None,
    provider: Provider | None = None,
) -> GradeRunResult:
    """Grade every essay on every aspect; incomplete sheets stay
    incomplete and the gaps are reported as failures."""
    tasks = grading_tasks(records, rubric, config)
    ledger = RunLedger()
    results = run_batch(
        tasks, config, cache_dir, budget_usd=budget_usd, provider=provider, ledger=ledger
    )
    sheet_set = ScoreSheetSet(config.model_id)
    failures: list[GradeFailure] = []
    aspect_by_key = {a.value: a for a in ASPECTS}
    for task in tasks:
        essay_id, aspect_key = task.task_id
        aspect = aspect_by_key[aspect_key]
        result = results.get(task.task_id)
        if result is None or not result.ok:
            reason = result.error if result is not None and result.error else "no response"
            failures.append(GradeFailure(essay_id, aspect, f"transport: {reason}"))
            continue
        parsed = parse_grade(result.text)
        if not parsed.ok:
            failures.append(GradeFailure(essay_id, aspect, f"parse: {parsed.failure}"))
            continue
        sheet_set.add_score(essay_id, aspect, parsed.score)
    return GradeRunResult(sheet_set=sheet_set, ledger=ledger, failures=failures)
