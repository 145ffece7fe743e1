"""Extraction profiles: declarative selectors describing one site family.

Profiles are plain-text files with ``key = value`` lines; repeated
``archive_link_pattern`` keys accumulate. Clone sites in a network tend to
share page structure, so one "network-default" profile covers most of them
and per-site overrides are the exception.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import ProfileError

_FIELD_KEYS = ("title", "authors", "affiliation", "doi", "pdf_link")


@dataclass(frozen=True)
class ExtractionProfile:
    name: str
    version: str = "1"
    archive_link_patterns: tuple[str, ...] = ()
    record_selector: str = ""
    field_selectors: dict[str, str] = field(default_factory=dict)
    language_filter: str | None = None

    def validate(self) -> None:
        if not self.record_selector:
            raise ProfileError(f"profile {self.name!r}: record selector is required")
        if "title" not in self.field_selectors:
            raise ProfileError(f"profile {self.name!r}: title selector is required")


def parse_profile(text: str, source: str = "<string>") -> ExtractionProfile:
    """Parse the key=value profile format; raises ProfileError when invalid."""
    name = ""
    version = "1"
    patterns: list[str] = []
    record = ""
    fields: dict[str, str] = {}
    language = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ProfileError(f"{source}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip().lower()
        value = value.strip()
        if key == "name":
            name = value
        elif key == "version":
            version = value
        elif key == "archive_link_pattern":
            patterns.append(value)
        elif key == "record":
            record = value
        elif key in _FIELD_KEYS:
            fields[key] = value
        elif key == "language_filter":
            language = value or None
        else:
            raise ProfileError(f"{source}:{lineno}: unknown key {key!r}")
    if not name:
        raise ProfileError(f"{source}: profile needs a name")
    profile = ExtractionProfile(
        name=name,
        version=version,
        archive_link_patterns=tuple(patterns),
        record_selector=record,
        field_selectors=fields,
        language_filter=language,
    )
    profile.validate()
    return profile


def load_profile(path: str | Path) -> ExtractionProfile:
    path = Path(path)
    return parse_profile(path.read_text(encoding="utf-8"), source=str(path))


def default_profile() -> ExtractionProfile:
    """The shipped profile matching the clone-network page family."""
    text = (
        resources.files("clonewatch.data")
        .joinpath("network-default.profile")
        .read_text(encoding="utf-8")
    )
    return parse_profile(text, source="network-default.profile")


def resolve_profile(spec: str | None) -> ExtractionProfile:
    """Resolve a CLI/profile argument: None/"default" -> shipped profile."""
    if spec is None or spec in ("default", "network-default"):
        return default_profile()
    return load_profile(spec)
