"""Pipeline orchestration: stages, matrix cache, artifacts and manifest."""

from pminet.pipeline.artifacts import (
    ExportFormat,
    ExportFormatError,
    export_graph,
    file_digest,
    write_frame,
    write_json,
    write_matrix,
    write_prices,
    write_sectors,
)
from pminet.pipeline.cache import MatrixCache
from pminet.pipeline.stages import (
    MANIFEST_NAME,
    Pipeline,
    RunResult,
    SignificanceResult,
    StageError,
    StageRecord,
    network_label,
    run_pipeline,
)

__all__ = [
    "MANIFEST_NAME",
    "ExportFormat",
    "ExportFormatError",
    "MatrixCache",
    "Pipeline",
    "RunResult",
    "SignificanceResult",
    "StageError",
    "StageRecord",
    "export_graph",
    "file_digest",
    "network_label",
    "run_pipeline",
    "write_frame",
    "write_json",
    "write_matrix",
    "write_prices",
    "write_sectors",
]
