"""Project configuration: backends, prompt settings, media slicing."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from jalign.errors import ConfigurationError, ValidationError
from jalign.gateway.config import BackendConfig, BackendKind, MOCK_BACKEND
from jalign.store.canonical import read_json, write_json
from jalign.store.families import SCHEMA_VERSION, check_schema_version


@dataclass(frozen=True)
class PromptSettings:
    template_version: str = "v1"
    engagement_enabled: bool = False
    describe_chunk_size: int = 1
    judge_chunk_size: int | None = None  # None: all of a video's segments per request


@dataclass(frozen=True)
class MediaSlicerConfig:
    """External command for cutting per-segment clips before wire describe calls.

    The command template receives {input}, {start}, {end} and {output} placeholders.
    """

    command: str
    output_dir: str = "media/segments"


@dataclass
class ProjectConfig:
    backends: dict[str, BackendConfig] = field(default_factory=dict)
    prompts: PromptSettings = field(default_factory=PromptSettings)
    media_slicer: MediaSlicerConfig | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    def backend(self, spec: str) -> BackendConfig:
        """Resolve a CLI-style backend spec: 'mock' or 'wire:<name>'."""
        if spec == "mock":
            return self.backends.get("mock", MOCK_BACKEND)
        if spec.startswith("wire:"):
            name = spec.split(":", 1)[1]
            cfg = self.backends.get(name)
            if cfg is None:
                raise ConfigurationError(f"no backend named {name!r} in project config")
            if cfg.kind is not BackendKind.WIRE_API:
                raise ConfigurationError(f"backend {name!r} is not a wire_api backend")
            return cfg
        raise ConfigurationError(f"unknown backend spec {spec!r}; use 'mock' or 'wire:<name>'")


_CONFIG_KEYS = ("schema_version", "backends", "prompts", "media_slicer")


def default_config() -> ProjectConfig:
    return ProjectConfig(backends={"mock": MOCK_BACKEND})


def config_to_doc(config: ProjectConfig) -> dict[str, Any]:
    doc = dict(config.extra)
    doc.update(
        schema_version=SCHEMA_VERSION,
        backends={name: cfg.to_doc() for name, cfg in sorted(config.backends.items())},
        prompts={
            "template_version": config.prompts.template_version,
            "engagement_enabled": config.prompts.engagement_enabled,
            "describe_chunk_size": config.prompts.describe_chunk_size,
            "judge_chunk_size": config.prompts.judge_chunk_size,
        },
        media_slicer=(
            {
                "command": config.media_slicer.command,
                "output_dir": config.media_slicer.output_dir,
            }
            if config.media_slicer
            else None
        ),
    )
    return doc


def doc_to_config(doc: Mapping[str, Any], label: str = "config") -> ProjectConfig:
    check_schema_version(doc, label)
    try:
        backends = {
            name: BackendConfig.from_doc(bdoc, name=name)
            for name, bdoc in doc.get("backends", {}).items()
        }
        pdoc = doc.get("prompts", {})
        chunk = pdoc.get("judge_chunk_size")
        prompts = PromptSettings(
            template_version=str(pdoc.get("template_version", "v1")),
            engagement_enabled=bool(pdoc.get("engagement_enabled", False)),
            describe_chunk_size=int(pdoc.get("describe_chunk_size", 1)),
            judge_chunk_size=int(chunk) if chunk is not None else None,
        )
        sdoc = doc.get("media_slicer")
        slicer = (
            MediaSlicerConfig(
                command=str(sdoc["command"]),
                output_dir=str(sdoc.get("output_dir", "media/segments")),
            )
            if sdoc
            else None
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(str(exc), field_path=label) from exc
    return ProjectConfig(
        backends=backends,
        prompts=prompts,
        media_slicer=slicer,
        extra={k: v for k, v in doc.items() if k not in _CONFIG_KEYS},
    )


def load_config(path: Path) -> ProjectConfig:
    return doc_to_config(read_json(path), label=str(path))


def save_config(path: Path, config: ProjectConfig) -> None:
    write_json(path, config_to_doc(config))
