"""
Code config files.

Key-value text, one ``key = value`` per line, ``#`` starts a comment::

    name       = ul128_105
    n          = 128
    k          = 105
    crc_poly   = 0xE21          # hex incl. leading term, or crc6/crc11/crc16/crc24c/none
    interleave = identity       # identity | ts38212 | explicit permutation
    info_set   = ts38212        # ts38212 | bhattacharyya | explicit index list

Validation collects ``ConfigIssue``s (E### errors, W### warnings) before
anything is built; ``load_code_spec`` raises ``CodeConfigError`` if any error
was found.
"""

from __future__ import annotations

import logging
import re
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from grandpolar.codes.ca_polar import CodeSpec
from grandpolar.codes.ts38212 import CRC_PRESETS
from grandpolar.errors import CodeConfigError, ConfigIssue, ConstructionError, Severity

logger = logging.getLogger(__name__)

PRESET_DIR = Path(__file__).resolve().parent / "presets"

REQUIRED_KEYS = ("n", "k", "crc_poly", "info_set")
OPTIONAL_KEYS = ("name", "interleave")
NAMED_INTERLEAVERS = {"identity", "ts38212"}
NAMED_INFO_SETS = {"ts38212", "bhattacharyya"}

_LINE_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*[=:]\s*(.*?)\s*$")
_HEX_RE = re.compile(r"^(0x)?[0-9a-fA-F]+$")


def list_presets() -> List[str]:
    return sorted(p.stem for p in PRESET_DIR.glob("*.cfg"))


def parse_config_text(text: str, source: str = "<config>") -> Dict[str, str]:
    """Split a config into raw key/value strings."""
    data: Dict[str, str] = {}
    issues: List[ConfigIssue] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE_RE.match(line)
        if not m:
            issues.append(ConfigIssue("E001", Severity.ERROR, f"cannot parse {raw.strip()!r}", f"line {lineno}"))
            continue
        key, value = m.group(1).lower(), m.group(2)
        if key in data:
            issues.append(ConfigIssue("E002", Severity.ERROR, f"duplicate key {key!r}", f"line {lineno}"))
            continue
        data[key] = value
    if issues:
        raise CodeConfigError(source, issues)
    return data


def _parse_int_list(value: str) -> Optional[List[int]]:
    tokens = [t for t in re.split(r"[\s,;]+", value.strip("[]() ")) if t]
    try:
        return [int(t) for t in tokens]
    except ValueError:
        return None


def parse_crc_poly(value: str) -> Optional[int]:
    key = value.strip().lower()
    if key in CRC_PRESETS:
        return CRC_PRESETS[key]
    if _HEX_RE.match(key):
        return int(key, 16)
    return None


def validate_config(data: Dict[str, str]) -> List[ConfigIssue]:
    """All problems with a parsed config; empty when it is valid."""
    issues: List[ConfigIssue] = []

    for key in REQUIRED_KEYS:
        if key not in data:
            issues.append(ConfigIssue("E010", Severity.ERROR, f"missing required key: {key}", key))
    for key in data:
        if key not in REQUIRED_KEYS and key not in OPTIONAL_KEYS:
            issues.append(ConfigIssue("W010", Severity.WARNING, f"unknown key ignored: {key}", key))
    if "name" not in data:
        issues.append(ConfigIssue("W011", Severity.WARNING, "config has no name", "name"))

    ints: Dict[str, int] = {}
    for key in ("n", "k"):
        if key in data:
            try:
                ints[key] = int(data[key])
            except ValueError:
                issues.append(ConfigIssue("E013", Severity.ERROR, f"{key} must be an integer, got {data[key]!r}", key))
    n, k = ints.get("n"), ints.get("k")
    if n is not None and (n < 1 or n & (n - 1)):
        issues.append(ConfigIssue("E014", Severity.ERROR, f"n must be a power of two, got {n}", "n"))
    if k is not None and k < 1:
        issues.append(ConfigIssue("E015", Severity.ERROR, f"k must be positive, got {k}", "k"))

    r: Optional[int] = None
    if "crc_poly" in data:
        poly = parse_crc_poly(data["crc_poly"])
        if poly is None:
            issues.append(ConfigIssue("E020", Severity.ERROR, f"crc_poly is not hex or a preset: {data['crc_poly']!r}", "crc_poly"))
        elif poly == 0:
            issues.append(ConfigIssue("E021", Severity.ERROR, "crc_poly is the zero polynomial", "crc_poly"))
        elif not poly & 1:
            issues.append(ConfigIssue("E022", Severity.ERROR, "crc_poly must have a nonzero trailing coefficient", "crc_poly"))
        else:
            r = poly.bit_length() - 1
    width = k + r if k is not None and r is not None else None
    if width is not None and n is not None and width > n:
        issues.append(ConfigIssue("E016", Severity.ERROR, f"k + r = {width} exceeds n = {n}", "k"))

    inter = data.get("interleave", "identity").strip().lower()
    if inter not in NAMED_INTERLEAVERS:
        perm = _parse_int_list(inter)
        if perm is None:
            issues.append(ConfigIssue("E030", Severity.ERROR, f"interleave is not a preset or index list: {inter!r}", "interleave"))
        elif width is not None and sorted(perm) != list(range(width)):
            issues.append(ConfigIssue("E031", Severity.ERROR, f"interleave is not a permutation of 0..{width - 1}", "interleave"))
    elif inter == "ts38212" and width is not None and width > 164:
        issues.append(ConfigIssue("E032", Severity.ERROR, f"ts38212 interleaver covers at most 164 bits, need {width}", "interleave"))

    if "info_set" in data:
        info = data["info_set"].strip().lower()
        if info not in NAMED_INFO_SETS:
            idx = _parse_int_list(info)
            if idx is None:
                issues.append(ConfigIssue("E040", Severity.ERROR, f"info_set is not a preset or index list: {info!r}", "info_set"))
            else:
                if width is not None and len(set(idx)) != width:
                    issues.append(ConfigIssue("E041", Severity.ERROR, f"info_set needs k + r = {width} distinct indices, got {len(set(idx))}", "info_set"))
                if n is not None and any(not 0 <= i < n for i in idx):
                    issues.append(ConfigIssue("E042", Severity.ERROR, f"info_set index outside 0..{n - 1}", "info_set"))
        elif info == "ts38212" and n is not None and n > 1024:
            issues.append(ConfigIssue("E043", Severity.ERROR, "ts38212 info set covers n <= 1024", "info_set"))

    return issues


def spec_from_config(data: Dict[str, str], source: str = "<config>") -> CodeSpec:
    issues = validate_config(data)
    for w in (i for i in issues if i.severity == Severity.WARNING):
        logger.warning("%s: %s", source, w)
    if any(i.severity == Severity.ERROR for i in issues):
        raise CodeConfigError(source, issues)

    def _list_or_name(value: str, names: set) -> Union[str, List[int]]:
        value = value.strip().lower()
        return value if value in names else (_parse_int_list(value) or [])

    try:
        return CodeSpec.make(
            n=int(data["n"]),
            k=int(data["k"]),
            crc_poly=parse_crc_poly(data["crc_poly"]),  # type: ignore[arg-type]
            interleave=_list_or_name(data.get("interleave", "identity"), NAMED_INTERLEAVERS),
            info_set=_list_or_name(data["info_set"], NAMED_INFO_SETS),
            name=data.get("name", "").strip(),
        )
    except ConstructionError as e:
        raise CodeConfigError(source, [ConfigIssue("E050", Severity.ERROR, str(e))]) from e


def resolve_config_path(ref: Union[str, Path]) -> Path:
    """A preset name or a filesystem path."""
    path = Path(ref)
    if path.exists():
        return path
    preset = PRESET_DIR / f"{ref}.cfg"
    if preset.exists():
        return preset
    raise CodeConfigError(
        str(ref),
        [ConfigIssue("E000", Severity.ERROR, f"no such config file or preset (presets: {', '.join(list_presets())})")],
    )


def load_code_spec(ref: Union[str, Path]) -> CodeSpec:
    path = resolve_config_path(ref)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise CodeConfigError(str(path), [ConfigIssue("E000", Severity.ERROR, f"unreadable: {e}")]) from e
    return spec_from_config(parse_config_text(text, str(path)), str(path))


def spec_to_config_text(spec: CodeSpec) -> str:
    """Explicit (preset-free) config text that reloads to an equal spec."""
    lines: List[Tuple[str, str]] = [
        ("name", spec.name or f"custom{spec.n}_{spec.k}"),
        ("n", str(spec.n)),
        ("k", str(spec.k)),
        ("crc_poly", f"{spec.crc_poly:#x}"),
        ("interleave", "identity" if spec.interleave is None else ",".join(map(str, spec.interleave))),
        ("info_set", ",".join(map(str, spec.info_set))),
    ]
    return "".join(f"{key:<10} = {value}\n" for key, value in lines)
