"""插件工具的参数解析：Dify 传来的都是字符串、数字或空值"""
from collections.abc import Mapping
from typing import Any, Optional
import json

from equitable.errors import BadParams, InputError
from equitable.plane_graph import PlaneGraph, parse_graph
from equitable.settings import _norm


def require_graph(tool_parameters: Mapping[str, Any], key: str = 'graph') -> PlaneGraph:
    text = _norm(tool_parameters.get(key))
    if text is None:
        raise InputError(f'{key} 为必填参数')
    return parse_graph(text)


def optional_int(tool_parameters: Mapping[str, Any], key: str) -> Optional[int]:
    value = _norm(tool_parameters.get(key))
    if value is None:
        return None
    try:
        return int(value)
    except (TypeError, ValueError) as e:
        raise BadParams(f'{key} 必须是整数: {value!r}') from e


def optional_json(tool_parameters: Mapping[str, Any], key: str) -> Optional[Any]:
    value = _norm(tool_parameters.get(key))
    if value is None or not isinstance(value, str):
        return value
    try:
        return json.loads(value)
    except json.JSONDecodeError as e:
        raise InputError(f'{key} 不是合法 JSON: {e}') from e


def flag(tool_parameters: Mapping[str, Any], key: str) -> bool:
    value = _norm(tool_parameters.get(key))
    if isinstance(value, str):
        return value.strip().lower() in ('true', '1', 'yes')
    return bool(value)


def default_k(g: PlaneGraph, k: Optional[int]) -> int:
    return k if k is not None else max(7, g.max_degree)
