from collections.abc import Generator
from typing import Any, Dict
import logging
from dify_plugin import Tool
from dify_plugin.entities.tool import ToolInvokeMessage
from dify_plugin.config.logger_format import plugin_logger_handler

from equitable.configurations import parse_configuration
from equitable.errors import EquitableError, InputError
from equitable.params import optional_json, require_graph
from equitable.pipeline import match_report
from equitable.serialize import json_safe

logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
logger.addHandler(plugin_logger_handler)

class MatchConfigurationTool(Tool):
    def _invoke(self, tool_parameters: Dict[str, Any]) -> Generator[ToolInvokeMessage]:
        try:
            g = require_graph(tool_parameters)
            raw = optional_json(tool_parameters, 'configuration')
            if raw is None:
                raise InputError('configuration 为必填参数')
            cfg = parse_configuration(raw)

            report = match_report(g, cfg)
            logger.info(f'[Match] 构型 {cfg.name}: {report["count"]} 处匹配')
            yield self.create_json_message({
                'success': True,
                'message': f'找到 {report["count"]} 处匹配',
                'data': json_safe(report),
            })
        except EquitableError as e:
            logger.error(f'[Match] 输入错误: {e}')
            yield self.create_json_message(e.to_payload())
        except Exception as e:
            logger.error(f'[Match] 异常: {str(e)}')
            yield self.create_json_message({'success': False, 'message': str(e) or '匹配失败', 'error': str(e)})
