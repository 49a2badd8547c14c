"""
Records - Human, tab separated and msgpack renderings of result documents
"""
import os
from typing import Any, Dict, Iterable, List, Tuple, Union

import msgpack

FORMATS = ("human", "tsv", "msgpack")

Output = Union[str, bytes]


def pack(document: Dict[str, Any]) -> bytes:
    return msgpack.packb(document, use_bin_type=True)


def unpack(data: bytes) -> Dict[str, Any]:
    return msgpack.unpackb(data, raw=False)


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float) and value == float("inf"):
        return "inf"
    if isinstance(value, (list, tuple)):
        return ",".join(_cell(v) for v in value)
    return str(value)


def tsv_lines(pairs: Iterable[Tuple[str, Any]]) -> str:
    """One key<TAB>value line per pair; repeated keys are repeated lines"""
    return "".join(f"{key}\t{_cell(value)}\n" for key, value in pairs)


def tsv_table(header: List[str], rows: Iterable[Iterable[Any]]) -> str:
    lines = ["\t".join(header)]
    lines.extend("\t".join(_cell(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def msgpack_safe(value: Any) -> Any:
    """inf becomes the string 'inf'; tuples become lists"""
    if isinstance(value, float) and value == float("inf"):
        return "inf"
    if isinstance(value, dict):
        return {k: msgpack_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [msgpack_safe(v) for v in value]
    return value


def emit(document: Dict[str, Any], fmt: str, human: str) -> Output:
    """Render a flat document; human text is supplied by the caller"""
    if fmt == "msgpack":
        return pack(msgpack_safe(document))
    if fmt == "tsv":
        pairs = []
        for key, value in document.items():
            if isinstance(value, list) and value and not isinstance(value[0], (int, float)):
                pairs.extend((key, v) for v in value)
            else:
                pairs.append((key, value))
        return tsv_lines(pairs)
    return human if human.endswith("\n") else human + "\n"


def read_golden(path: str) -> Dict[str, Any]:
    with open(path, "rb") as fh:
        return unpack(fh.read())


def write_golden(path: str, document: Dict[str, Any]):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(pack(msgpack_safe(document)))
