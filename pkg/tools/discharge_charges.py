from collections.abc import Generator
from typing import Any, Dict
import logging
from dify_plugin import Tool
from dify_plugin.entities.tool import ToolInvokeMessage
from dify_plugin.config.logger_format import plugin_logger_handler

from equitable.errors import EquitableError
from equitable.params import flag, require_graph
from equitable.pipeline import discharge_report
from equitable.serialize import json_safe
from equitable.settings import _norm

logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
logger.addHandler(plugin_logger_handler)

class DischargeChargesTool(Tool):
    def _invoke(self, tool_parameters: Dict[str, Any]) -> Generator[ToolInvokeMessage]:
        """按规则表转移电荷，可选对最终电荷做审计"""
        try:
            g = require_graph(tool_parameters)
            scheme = _norm(tool_parameters.get('scheme'))
            rules = _norm(tool_parameters.get('rules')) or 'auto'
            audit = flag(tool_parameters, 'audit')

            report = discharge_report(g, scheme, rules, audit)
            logger.info(f'[Discharge] 规则集 {report["ruleset"]}, 转移 {len(report["ledger"]["transfers"])} 次')
            message = f'规则集 {report["ruleset"]} 已应用'
            if audit:
                unexplained = report['audit']['unexplained']
                message += f'，未解释的负电荷 {len(unexplained)} 处'
            yield self.create_json_message({'success': True, 'message': message, 'data': json_safe(report)})
        except EquitableError as e:
            logger.error(f'[Discharge] 输入错误: {e}')
            yield self.create_json_message(e.to_payload())
        except Exception as e:
            logger.error(f'[Discharge] 异常: {str(e)}')
            yield self.create_json_message({'success': False, 'message': str(e) or '放电失败', 'error': str(e)})
