"""CSV / JSON 表格读写

CSV：首行为列名，浮点数用 repr（最短可往返表示）；JSON：行对象数组。
同样的表格与参数总是写出逐字节相同的内容。
"""
import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, TextIO, Union

from loguru import logger

from src.core.errors import InputError

FORMATS = ("csv", "json")
Number = Union[int, float]


@dataclass
class Table:
    """列名 + 行数据（每行与列名等长）"""

    columns: List[str]
    rows: List[List[Number]] = field(default_factory=list)

    def column(self, name: str) -> List[Number]:
        try:
            idx = self.columns.index(name)
        except ValueError:
            raise InputError(f"table has no column {name!r} (columns: {', '.join(self.columns)})")
        return [row[idx] for row in self.rows]

    def __len__(self) -> int:
        return len(self.rows)


def format_number(value: Number) -> str:
    if isinstance(value, bool):
        raise InputError("boolean values are not valid table entries")
    if isinstance(value, int):
        return str(value)
    value = float(value)
    if not math.isfinite(value):
        raise InputError(f"cannot write non-finite value {value!r}")
    return repr(value)


def _parse_number(text: str, where: str) -> Number:
    text = text.strip()
    try:
        if text.lstrip("+-").isdigit():
            return int(text)
        value = float(text)
    except ValueError:
        raise InputError(f"{where}: cannot parse {text!r} as a number")
    return value


def resolve_format(path: Optional[Path], fmt: Optional[str]) -> str:
    """显式格式优先，其次按扩展名，默认 csv"""
    if fmt:
        fmt = fmt.lower()
        if fmt not in FORMATS:
            raise InputError(f"unsupported format {fmt!r}, expected csv or json")
        return fmt
    if path is not None and Path(path).suffix.lower() == ".json":
        return "json"
    return "csv"


def dumps(table: Table, fmt: str = "csv") -> str:
    fmt = resolve_format(None, fmt)
    if fmt == "json":
        records = []
        for row in table.rows:
            records.append({name: _json_value(v) for name, v in zip(table.columns, row)})
        return json.dumps(records, indent=2, allow_nan=False) + "\n"
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_number(v) for v in row])
    return buffer.getvalue()


def _json_value(value: Number) -> Number:
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    value = float(value)
    if not math.isfinite(value):
        raise InputError(f"cannot write non-finite value {value!r}")
    return value


def loads(text: str, fmt: str = "csv", source: str = "<input>") -> Table:
    fmt = resolve_format(None, fmt)
    if fmt == "json":
        return _loads_json(text, source)
    reader = csv.reader(io.StringIO(text))
    lines = [row for row in reader if row and any(cell.strip() for cell in row)]
    if not lines:
        raise InputError(f"{source}: table is empty")
    columns = [c.strip() for c in lines[0]]
    rows = []
    for lineno, raw in enumerate(lines[1:], start=2):
        if len(raw) != len(columns):
            raise InputError(f"{source}:{lineno}: expected {len(columns)} fields, got {len(raw)}")
        rows.append([_parse_number(cell, f"{source}:{lineno}") for cell in raw])
    return Table(columns=columns, rows=rows)


def _loads_json(text: str, source: str) -> Table:
    try:
        records = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{source}: invalid JSON ({e.msg} at line {e.lineno})")
    if not isinstance(records, list):
        raise InputError(f"{source}: expected a JSON array of row objects")
    if not records:
        raise InputError(f"{source}: table is empty")
    if not all(isinstance(r, dict) for r in records):
        raise InputError(f"{source}: every row must be a JSON object")
    columns = list(records[0].keys())
    rows = []
    for idx, record in enumerate(records):
        if list(record.keys()) != columns:
            raise InputError(f"{source}: row {idx} has columns {list(record.keys())}, expected {columns}")
        row = []
        for name in columns:
            value = record[name]
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise InputError(f"{source}: row {idx} column {name!r} is not a number")
            row.append(value)
        rows.append(row)
    return Table(columns=columns, rows=rows)


def read_table(path: Union[str, Path], fmt: Optional[str] = None) -> Table:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror or e}")
    except UnicodeDecodeError:
        raise InputError(f"{path} is not UTF-8 text")
    table = loads(text, resolve_format(path, fmt), str(path))
    logger.debug(f"读取表格 {path}: {len(table)} 行, 列 {table.columns}")
    return table


def write_table(table: Table, path: Optional[Union[str, Path]] = None, fmt: Optional[str] = None,
                stream: Optional[TextIO] = None) -> None:
    """写到 path；path 为空时写到 stream（默认标准输出由调用方传入）"""
    target = Path(path) if path else None
    text = dumps(table, resolve_format(target, fmt))
    if target is None:
        if stream is None:
            raise InputError("no output destination given")
        stream.write(text)
        return
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    logger.info(f"已写出表格 {target}（{len(table)} 行）")


def coefficient_table(coeffs: Sequence[float]) -> Table:
    return Table(columns=["m", "c"], rows=[[m, float(c)] for m, c in enumerate(coeffs)])


def read_coefficients(table: Table) -> List[float]:
    """m,c 表 -> 系数列表；m 必须从 0 起连续"""
    if len(table) == 0:
        raise InputError("coefficient table is empty")
    ms = table.column("m")
    cs = table.column("c")
    for expected, m in enumerate(ms):
        if m != expected:
            raise InputError(f"coefficient rows must be indexed 0..N-1 in order; row {expected} has m = {m!r}")
    values = [float(c) for c in cs]
    if not all(math.isfinite(v) for v in values):
        raise InputError("coefficient table contains non-finite values")
    return values
