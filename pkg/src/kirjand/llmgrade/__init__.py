from .batch import (
    BatchTask,
    GradeFailure,
    GradeRunResult,
    RunLedger,
    TaskResult,
    cache_key,
    grade_corpus,
    grading_tasks,
    run_batch,
)
from .providers import (
    EndpointConfig,
    HttpProvider,
    MockProvider,
    ProviderResponse,
    TransientTransportError,
    estimate_tokens,
    load_endpoint,
    make_provider,
    mock_base_score,
)
from .rubric import (
    AspectRubric,
    ParsedGrade,
    RubricConfig,
    aspect_label,
    build_prompt,
    build_user_text,
    load_rubric,
    parse_grade,
)

__all__ = [
    "AspectRubric",
    "BatchTask",
    "EndpointConfig",
    "GradeFailure",
    "GradeRunResult",
    "HttpProvider",
    "MockProvider",
    "ParsedGrade",
    "ProviderResponse",
    "RubricConfig",
    "RunLedger",
    "TaskResult",
    "TransientTransportError",
    "aspect_label",
    "build_prompt",
    "build_user_text",
    "cache_key",
    "estimate_tokens",
    "grade_corpus",
    "grading_tasks",
    "load_endpoint",
    "load_rubric",
    "make_provider",
    "mock_base_score",
    "parse_grade",
    "run_batch",
]
