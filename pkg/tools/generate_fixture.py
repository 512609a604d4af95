from collections.abc import Generator
from typing import Any, Dict
import logging
from dify_plugin import Tool
from dify_plugin.entities.tool import ToolInvokeMessage
from dify_plugin.config.logger_format import plugin_logger_handler

from equitable.errors import EquitableError, InputError
from equitable.fixtures import dump_fixture
from equitable.params import flag, optional_json
from equitable.pipeline import generate_report
from equitable.serialize import graph_to_dot, json_safe
from equitable.settings import _norm

logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
logger.addHandler(plugin_logger_handler)

class GenerateFixtureTool(Tool):
    def _invoke(self, tool_parameters: Dict[str, Any]) -> Generator[ToolInvokeMessage]:
        """按生成器类型生成带旋转系统的平面图，并附上实测性质"""
        try:
            kind = _norm(tool_parameters.get('kind'))
            if not kind:
                raise InputError('kind 为必填参数')
            params = optional_json(tool_parameters, 'params') or {}
            if not isinstance(params, dict):
                raise InputError('params 必须是 JSON 对象')
            name = _norm(tool_parameters.get('name'))

            fixture, report = generate_report(kind, params, name)
            logger.info(f'[Generate] {fixture.name}: n={fixture.graph.order}, member={fixture.expected["member"]}')
            yield self.create_json_message({'success': True, 'message': f'已生成 {fixture.name}', 'data': json_safe(report)})
            yield self.create_blob_message(
                blob=dump_fixture(fixture).encode('utf-8'),
                meta={'file_name': f'{fixture.name}.json', 'mime_type': 'application/json'},
            )
            if flag(tool_parameters, 'output_dot'):
                yield self.create_blob_message(
                    blob=graph_to_dot(fixture.graph).encode('utf-8'),
                    meta={'file_name': f'{fixture.name}.dot', 'mime_type': 'text/vnd.graphviz'},
                )
        except EquitableError as e:
            logger.error(f'[Generate] 输入错误: {e}')
            yield self.create_json_message(e.to_payload())
        except Exception as e:
            logger.error(f'[Generate] 异常: {str(e)}')
            yield self.create_json_message({'success': False, 'message': str(e) or '生成失败', 'error': str(e)})
