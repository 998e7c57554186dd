"""Completion endpoints: a real HTTP client and an offline mock.

The mock is a first-class endpoint, selected from the same TOML config
as a real one, so every pipeline (grading, injection, generation) can
run offline and deterministically.  Its scores are a pure function of
essay text and aspect, which tests recompute as ground truth.
"""

from __future__ import annotations

import hashlib
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import requests

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..errors import ConfigError, TransportError


class TransientTransportError(TransportError):
    """Worth retrying: rate limits, server errors, network hiccups."""


@dataclass(frozen=True)
class EndpointConfig:
    kind: str  # "http" or "mock"
    model_id: str
    base_url: str = ""
    temperature: float = 0.0
    max_output_tokens: int | None = None
    reasoning_effort: str | None = None
    api_key_env: str | None = None
    timeout_s: float = 120.0
    max_retries: int = 3
    retry_base_s: float = 0.5
    concurrency_limit: int = 4
    #: USD per million tokens.
    price_in: float = 0.0
    price_out: float = 0.0
    mock_options: tuple[tuple[str, object], ...] = ()


def load_endpoint(path: str | Path) -> EndpointConfig:
    try:
        doc = tomllib.loads(Path(path).read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: not valid TOML: {exc}") from exc
    kind = str(doc.get("kind", "http"))
    if kind not in ("http", "mock"):
        raise ConfigError(f"{path}: kind must be 'http' or 'mock', got {kind!r}")
    if "model_id" not in doc:
        raise ConfigError(f"{path}: missing model_id")
    if kind == "http" and not doc.get("base_url"):
        raise ConfigError(f"{path}: http endpoints need base_url")
    if "api_key" in doc:
        raise ConfigError(
            f"{path}: credentials must not live in config files; "
            "set api_key_env to the name of an environment variable"
        )
    mock_options = tuple(sorted(dict(doc.get("mock", {})).items()))
    return EndpointConfig(
        kind=kind,
        model_id=str(doc["model_id"]),
        base_url=str(doc.get("base_url", "")),
        temperature=float(doc.get("temperature", 0.0)),
        max_output_tokens=doc.get("max_output_tokens"),
        reasoning_effort=doc.get("reasoning_effort"),
        api_key_env=doc.get("api_key_env"),
        timeout_s=float(doc.get("timeout_s", 120.0)),
        max_retries=int(doc.get("max_retries", 3)),
        retry_base_s=float(doc.get("retry_base_s", 0.5)),
        concurrency_limit=int(doc.get("concurrency_limit", 4)),
        price_in=float(doc.get("price_in", 0.0)),
        price_out=float(doc.get("price_out", 0.0)),
        mock_options=mock_options,
    )


@dataclass(frozen=True)
class ProviderResponse:
    text: str
    input_tokens: int
    output_tokens: int


def estimate_tokens(text: str) -> int:
    """Crude but stable size proxy: four characters per token."""
    return -(-len(text) // 4)


class HttpProvider:
    """Chat-completions style JSON API over HTTP."""

    def __init__(self, config: EndpointConfig):
        self.config = config
        self._api_key = None
        if config.api_key_env:
            self._api_key = os.environ.get(config.api_key_env)
            if not self._api_key:
                raise ConfigError(
                    f"environment variable {config.api_key_env} is not set"
                )

    def complete(
        self, instructions: str, user_text: str, temperature: float, attempt: int = 1
    ) -> ProviderResponse:
        payload: dict = {
            "model": self.config.model_id,
            "messages": [
                {"role": "system", "content": instructions},
                {"role": "user", "content": user_text},
            ],
            "temperature": temperature,
        }
        if self.config.max_output_tokens is not None:
            payload["max_tokens"] = self.config.max_output_tokens
        if self.config.reasoning_effort is not None:
            payload["reasoning_effort"] = self.config.reasoning_effort
        headers = {"Content-Type": "application/json"}
        if self._api_key:
            headers["Authorization"] = f"Bearer {self._api_key}"
        url = self.config.base_url.rstrip("/") + "/chat/completions"
        try:
            resp = requests.post(
                url, json=payload, headers=headers, timeout=self.config.timeout_s
            )
        except requests.RequestException as exc:
            raise TransientTransportError(f"request failed: {exc}") from exc
        if resp.status_code == 429 or resp.status_code >= 500:
            raise TransientTransportError(f"HTTP {resp.status_code}: {resp.text[:200]}")
        if resp.status_code != 200:
            raise TransportError(f"HTTP {resp.status_code}: {resp.text[:200]}")
        try:
            body = resp.json()
            text = body["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise TransportError(f"malformed response body: {exc!r}") from exc
        usage = body.get("usage", {})
        return ProviderResponse(
            text=text,
            input_tokens=int(
                usage.get("prompt_tokens", estimate_tokens(instructions + user_text))
            ),
            output_tokens=int(usage.get("completion_tokens", estimate_tokens(text))),
        )


_ASPECT_MARKER = "ONLY grade this aspect:"


def _stable_hash(*parts: str) -> int:
    digest = hashlib.sha256("\x1f".join(parts).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def mock_base_score(essay_body: str, aspect_label: str) -> int:
    """Ground-truth score of the mock grader: a stable function of the
    essay body and aspect label, kept in 0..2 so the boost below always
    adds exactly one point."""
    return _stable_hash("score", aspect_label, essay_body) % 3


class MockProvider:
    """Deterministic stand-in grader.

    Behaviour knobs come from the `[mock]` table of the endpoint config:
    `boost_marker` (a substring of the essay that earns +1 on every
    aspect, capped at the scale maximum) and `fault_rate` (fraction of
    calls whose first attempt fails with a retryable error).
    """

    def __init__(self, config: EndpointConfig):
        self.config = config
        options = dict(config.mock_options)
        self.boost_marker = str(options.get("boost_marker", "Grading instructions override"))
        self.fault_rate = float(options.get("fault_rate", 0.0))

    @staticmethod
    def _essay_body(user_text: str) -> str:
        body = user_text
        if body.startswith('"""') and body.endswith('"""') and len(body) >= 6:
            body = body[3:-3]
        return body

    @staticmethod
    def _aspect_label(instructions: str) -> str:
        if _ASPECT_MARKER in instructions:
            tail = instructions.split(_ASPECT_MARKER, 1)[1]
            for line in tail.splitlines():
                if line.strip():
                    return line.strip()
        return ""

    def _base_body(self, essay_body: str) -> str:
        """Marker lines are dropped before hashing, so a planted override
        moves the score only through the boost, never by reshuffling the
        base hash."""
        kept = [
            line
            for line in essay_body.splitlines()
            if not (self.boost_marker and self.boost_marker in line)
        ]
        return "\n".join(kept).strip()

    def expected_score(self, essay_body: str, aspect_label: str) -> int:
        score = mock_base_score(self._base_body(essay_body), aspect_label)
        if self.boost_marker and self.boost_marker in essay_body:
            score = min(3, score + 1)
        return score

    def complete(
        self, instructions: str, user_text: str, temperature: float, attempt: int = 1
    ) -> ProviderResponse:
        if self.fault_rate > 0 and attempt == 1:
            roll = _stable_hash("fault", instructions, user_text) % 1_000_000
            if roll < self.fault_rate * 1_000_000:
                raise TransientTransportError("simulated transient failure")
        label = self._aspect_label(instructions)
        body = self._essay_body(user_text)
        if label:
            score = self.expected_score(body, label)
            text = (
                f"Seletus: {label}: vaatlus {_stable_hash('expl', label, body) % 97}. "
                f"Hinne: {score}"
            )
        else:
            # Not a grading prompt; emit a deterministic block of text
            # so generation pipelines have something to archive.
            seed = _stable_hash("gen", instructions, user_text, repr(temperature))
            words = [f"s{(seed >> (4 * i)) % 9973}" for i in range(12)]
            text = "Moodustatud näidistekst. " + " ".join(words) + "."
        return ProviderResponse(
            text=text,
            input_tokens=estimate_tokens(instructions + user_text),
            output_tokens=estimate_tokens(text),
        )


Provider = HttpProvider | MockProvider


def make_provider(config: EndpointConfig) -> Provider:
    if config.kind == "mock":
        return MockProvider(config)
    return HttpProvider(config)
