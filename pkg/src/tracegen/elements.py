"""Extraction of tagged requirement elements from repository text files.

Elements are XML-like blocks embedded anywhere in a text file:

    <treqs-element id="RS1" type="runtime-scenario" label="Night driving">
    free-text body, optionally with a fenced ```json block
    <treqs-link type="scopes" target="AL1" />
    </treqs-element>

Tag and attribute names are case-sensitive, attribute values are
double-quoted, attribute order is free. Blocks may nest; nesting records
independent elements and never creates a trace link.
"""

from __future__ import annotations

import bisect
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from tracegen.errors import InvalidJson, RootNotFound
from tracegen.schema import is_valid_pointer

DEFAULT_GLOBS = ("**/*.md", "**/*.txt")

_TAG_RE = re.compile(
    r"<treqs-element\b([^<>]*)>|</treqs-element>|<treqs-link\b([^<>]*?)/>"
)
_ATTR_RE = re.compile(r'\s*([A-Za-z_][\w.-]*)="([^"]*)"')
_FENCE_RE = re.compile(
    r"^```(?:json)?[ \t]*\r?\n(.*?)^```[ \t]*$", re.MULTILINE | re.DOTALL
)


@dataclass(frozen=True)
class SourceFile:
    path: str  # repository-relative, forward slashes
    content: str


@dataclass(frozen=True)
class RawLink:
    link_type: str
    target_uid: str
    file: str
    line: int


@dataclass(frozen=True)
class RawElement:
    uid: str
    element_type: str
    label: str | None
    placement: str | None
    body: str
    links: tuple[RawLink, ...]
    file: str
    line: int


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: str  # "error" | "warning"
    message: str
    file: str
    line: int


@dataclass
class _Frame:
    attrs: dict[str, str] | None  # None when the opening tag was malformed
    line: int
    body_parts: list[str] = field(default_factory=list)
    links: list[RawLink] = field(default_factory=list)


def scan_repository(
    root: str | Path, include_globs: tuple[str, ...] = DEFAULT_GLOBS
) -> tuple[list[SourceFile], list[ParseDiagnostic]]:
    """Collect matching text files under ``root``, sorted by normalized path.

    Unreadable files and non-text files become diagnostics, never failures.
    """
    root = Path(root)
    if not root.is_dir():
        raise RootNotFound(f"repository root not found: {root}")
    diagnostics: list[ParseDiagnostic] = []
    paths: set[Path] = set()
    for pattern in include_globs:
        paths.update(p for p in root.glob(pattern) if p.is_file())
    files: list[SourceFile] = []
    for path in sorted(paths, key=lambda p: p.relative_to(root).as_posix()):
        rel = path.relative_to(root).as_posix()
        try:
            content = path.read_text(encoding="utf-8")
        except UnicodeDecodeError:
            diagnostics.append(
                ParseDiagnostic("warning", "skipped non-text file", rel, 1)
            )
            continue
        except OSError as exc:
            diagnostics.append(
                ParseDiagnostic("error", f"cannot read file: {exc}", rel, 1)
            )
            continue
        if "\x00" in content:
            diagnostics.append(
                ParseDiagnostic("warning", "skipped non-text file", rel, 1)
            )
            continue
        files.append(SourceFile(path=rel, content=content))
    return files, diagnostics


def _line_starts(content: str) -> list[int]:
    starts = [0]
    for i, ch in enumerate(content):
        if ch == "\n":
            starts.append(i + 1)
    return starts


def _parse_attrs(raw: str) -> dict[str, str] | str:
    """Parse an attribute region; returns a dict or an error message."""
    attrs: dict[str, str] = {}
    pos = 0
    while pos < len(raw):
        match = _ATTR_RE.match(raw, pos)
        if match is None:
            rest = raw[pos:].strip()
            if not rest:
                break
            return f"malformed attribute syntax near {rest[:30]!r}"
        name, value = match.group(1), match.group(2)
        if name in attrs:
            return f"duplicate attribute {name!r}"
        attrs[name] = value
        pos = match.end()
    return attrs


def parse_file(file: SourceFile) -> tuple[list[RawElement], list[ParseDiagnostic]]:
    """Extract all element blocks from one file.

    Total for any input: malformed blocks become error diagnostics and are
    skipped, everything outside element blocks is ignored.
    """
    elements: list[RawElement] = []
    diagnostics: list[ParseDiagnostic] = []
    starts = _line_starts(file.content)
    stack: list[_Frame] = []
    cursor = 0

    def line_of(offset: int) -> int:
        return bisect.bisect_right(starts, offset)

    def take_text(upto: int) -> None:
        nonlocal cursor
        if stack and upto > cursor:
            stack[-1].body_parts.append(file.content[cursor:upto])
        cursor = upto

    for match in _TAG_RE.finditer(file.content):
        take_text(match.start())
        cursor = match.end()
        line = line_of(match.start())
        text = match.group(0)
        if text.startswith("<treqs-element"):
            attrs = _validate_open(match.group(1), line, file.path, diagnostics)
            stack.append(_Frame(attrs=attrs, line=line))
        elif text.startswith("</treqs-element"):
            if not stack:
                diagnostics.append(
                    ParseDiagnostic(
                        "error", "closing tag without matching opening tag", file.path, line
                    )
                )
                continue
            frame = stack.pop()
            if frame.attrs is not None:
                elements.append(
                    RawElement(
                        uid=frame.attrs["id"],
                        element_type=frame.attrs["type"],
                        label=frame.attrs.get("label"),
                        placement=frame.attrs.get("placement"),
                        body="".join(frame.body_parts),
                        links=tuple(frame.links),
                        file=file.path,
                        line=frame.line,
                    )
                )
        else:  # <treqs-link ... />
            attrs = _parse_attrs(match.group(2))
            if isinstance(attrs, str):
                diagnostics.append(ParseDiagnostic("error", attrs, file.path, line))
                continue
            if not attrs.get("type") or not attrs.get("target"):
                diagnostics.append(
                    ParseDiagnostic(
                        "error", "link tag requires type and target attributes", file.path, line
                    )
                )
                continue
            if not stack:
                diagnostics.append(
                    ParseDiagnostic(
                        "warning", "link outside any element block ignored", file.path, line
                    )
                )
                continue
            if stack[-1].attrs is not None:
                stack[-1].links.append(
                    RawLink(
                        link_type=attrs["type"],
                        target_uid=attrs["target"],
                        file=file.path,
                        line=line,
                    )
                )

    for frame in stack:
        diagnostics.append(
            ParseDiagnostic("error", "unclosed element block", file.path, frame.line)
        )
    elements.sort(key=lambda e: e.line)
    return elements, diagnostics


def _validate_open(
    raw_attrs: str, line: int, path: str, diagnostics: list[ParseDiagnostic]
) -> dict[str, str] | None:
    attrs = _parse_attrs(raw_attrs)
    if isinstance(attrs, str):
        diagnostics.append(ParseDiagnostic("error", attrs, path, line))
        return None
    problems = []
    if "id" not in attrs:
        problems.append("missing id attribute")
    elif not attrs["id"] or any(c.isspace() for c in attrs["id"]):
        problems.append("id must be non-empty and contain no whitespace")
    if "type" not in attrs or not attrs["type"]:
        problems.append("missing type attribute")
    if "placement" in attrs and not is_valid_pointer(attrs["placement"]):
        problems.append(f"placement is not a valid JSON Pointer: {attrs['placement']!r}")
    if problems:
        diagnostics.append(ParseDiagnostic("error", "; ".join(problems), path, line))
        return None
    return attrs


def json_fence_count(body: str) -> int:
    return len(_FENCE_RE.findall(body))


def extract_json_body(element: RawElement):
    """Parse the first fenced JSON block in the element body, or None.

    Raises InvalidJson with position information when a fence exists but its
    content is not valid JSON.
    """
    match = _FENCE_RE.search(element.body)
    if match is None:
        return None
    try:
        return json.loads(match.group(1))
    except json.JSONDecodeError as exc:
        raise InvalidJson(
            f"invalid JSON in fenced block: {exc.msg}", line=exc.lineno, column=exc.colno
        ) from exc
