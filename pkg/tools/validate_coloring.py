from collections.abc import Generator
from typing import Any, Dict
import logging
from dify_plugin import Tool
from dify_plugin.entities.tool import ToolInvokeMessage
from dify_plugin.config.logger_format import plugin_logger_handler

from equitable.errors import EquitableError, InputError
from equitable.params import optional_int, optional_json, require_graph
from equitable.pipeline import validate_report
from equitable.serialize import json_safe

logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
logger.addHandler(plugin_logger_handler)

class ValidateColoringTool(Tool):
    def _invoke(self, tool_parameters: Dict[str, Any]) -> Generator[ToolInvokeMessage]:
        try:
            g = require_graph(tool_parameters)
            coloring = optional_json(tool_parameters, 'coloring')
            if not isinstance(coloring, dict):
                raise InputError('coloring 必须是 {顶点: 颜色} 形式的 JSON 对象')
            # 允许直接粘贴着色工具的完整输出
            coloring = coloring.get('coloring', coloring)
            k = optional_int(tool_parameters, 'k')
            lists = optional_json(tool_parameters, 'lists')

            report = validate_report(g, coloring, k, lists)
            logger.info(f'[Validate] 结果: {report["passed"]}')
            yield self.create_json_message({
                'success': True,
                'message': '着色合法' if report['passed'] else f'着色不合法: {report["violation"]["kind"]}',
                'data': json_safe(report),
            })
        except EquitableError as e:
            logger.error(f'[Validate] 输入错误: {e}')
            yield self.create_json_message(e.to_payload())
        except Exception as e:
            logger.error(f'[Validate] 异常: {str(e)}')
            yield self.create_json_message({'success': False, 'message': str(e) or '校验失败', 'error': str(e)})
