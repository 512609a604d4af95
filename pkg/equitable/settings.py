from collections.abc import Mapping
from typing import Any

from pydantic import BaseModel, Field, ValidationError

from equitable.errors import BadParams


def _norm(v: Any) -> Any:
    return None if v in (None, '', 'variable') else v


class EngineSettings(BaseModel):
    """求解器的可调参数，工具参数和命令行参数都经由这里归一化"""

    exact_vertex_limit: int = Field(16, ge=1)
    base_case_threshold: int = Field(12, ge=1)
    seed_pool_size: int = Field(40, ge=1)
    max_seed_size: int = Field(5, ge=0)
    search_budget: int = Field(20000, ge=1)
    default_seed: int = 2019
    list_palette_factor: int = Field(3, ge=1)

    @classmethod
    def from_parameters(cls, parameters: Mapping[str, Any] | None) -> 'EngineSettings':
        if not parameters:
            return cls()
        values = {}
        for name in cls.model_fields:
            value = _norm(parameters.get(name))
            if value is not None:
                values[name] = value
        try:
            return cls(**values)
        except ValidationError as e:
            raise BadParams(f'引擎参数不合法: {e.errors()[0]["loc"][0]}', {'errors': [err['msg'] for err in e.errors()]}) from e


DEFAULT_SETTINGS = EngineSettings()
