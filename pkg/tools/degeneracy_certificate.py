from collections.abc import Generator
from typing import Any, Dict
import logging
from dify_plugin import Tool
from dify_plugin.entities.tool import ToolInvokeMessage
from dify_plugin.config.logger_format import plugin_logger_handler

from equitable.errors import EquitableError
from equitable.params import require_graph
from equitable.pipeline import degeneracy_report
from equitable.serialize import json_safe

logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
logger.addHandler(plugin_logger_handler)

class DegeneracyCertificateTool(Tool):
    def _invoke(self, tool_parameters: Dict[str, Any]) -> Generator[ToolInvokeMessage]:
        try:
            g = require_graph(tool_parameters)
            report = degeneracy_report(g)
            degeneracy = report['certificate']['degeneracy']
            logger.info(f'[Degeneracy] n={g.order}, 退化度={degeneracy}')
            yield self.create_json_message({
                'success': True,
                'message': f'退化度为 {degeneracy}',
                'data': json_safe(report),
            })
        except EquitableError as e:
            logger.error(f'[Degeneracy] 输入错误: {e}')
            yield self.create_json_message(e.to_payload())
        except Exception as e:
            logger.error(f'[Degeneracy] 异常: {str(e)}')
            yield self.create_json_message({'success': False, 'message': str(e) or '计算失败', 'error': str(e)})
