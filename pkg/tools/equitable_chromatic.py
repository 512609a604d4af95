from collections.abc import Generator
from typing import Any, Dict
import logging
from dify_plugin import Tool
from dify_plugin.entities.tool import ToolInvokeMessage
from dify_plugin.config.logger_format import plugin_logger_handler

from equitable.errors import BadParams, EquitableError
from equitable.params import require_graph
from equitable.pipeline import chromatic_report
from equitable.serialize import json_safe
from equitable.settings import EngineSettings, _norm

logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
logger.addHandler(plugin_logger_handler)

class EquitableChromaticTool(Tool):
    def _invoke(self, tool_parameters: Dict[str, Any]) -> Generator[ToolInvokeMessage]:
        try:
            g = require_graph(tool_parameters)
            which = _norm(tool_parameters.get('which')) or 'both'
            if which not in ('chie', 'chiestar', 'both', 'corollary'):
                raise BadParams(f'which 只能是 chie、chiestar、both 或 corollary: {which!r}')
            settings = EngineSettings.from_parameters(tool_parameters)

            report = chromatic_report(g, which, settings)
            logger.info(f'[Chromatic] n={g.order}, {which}: {report}')
            yield self.create_json_message({'success': True, 'message': '计算完成', 'data': json_safe(report)})
        except EquitableError as e:
            logger.error(f'[Chromatic] 输入错误: {e}')
            yield self.create_json_message(e.to_payload())
        except Exception as e:
            logger.error(f'[Chromatic] 异常: {str(e)}')
            yield self.create_json_message({'success': False, 'message': str(e) or '计算失败', 'error': str(e)})
