from collections.abc import Generator
from typing import Any, Dict
import logging
from dify_plugin import Tool
from dify_plugin.entities.tool import ToolInvokeMessage
from dify_plugin.config.logger_format import plugin_logger_handler

from equitable.errors import EquitableError
from equitable.params import default_k, flag, optional_int, require_graph
from equitable.pipeline import color_report
from equitable.serialize import coloring_to_dot, json_safe
from equitable.settings import EngineSettings, _norm

logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
logger.addHandler(plugin_logger_handler)

class EquitableColorTool(Tool):
    def _invoke(self, tool_parameters: Dict[str, Any]) -> Generator[ToolInvokeMessage]:
        """均匀 k-着色：exact 为小图上的精确搜索，constructive 为逐个剥离可约集再回填"""
        try:
            g = require_graph(tool_parameters)
            k = default_k(g, optional_int(tool_parameters, 'k'))
            mode = _norm(tool_parameters.get('mode')) or 'constructive'
            force = flag(tool_parameters, 'force')
            settings = EngineSettings.from_parameters(tool_parameters)

            logger.info(f'[Color] n={g.order}, k={k}, mode={mode}, force={force}')
            report = color_report(g, k, mode, force, settings)
            if 'coloring' not in report:
                yield self.create_json_message({'success': True, 'message': f'不存在均匀 {k}-着色', 'data': json_safe(report)})
                return

            anomalies = report.get('anomalies') or []
            if anomalies:
                logger.warning(f'[Color] 出现 {len(anomalies)} 处异常')
            yield self.create_json_message({
                'success': True,
                'message': '着色已通过校验' if report['passed'] else '着色未通过校验',
                'data': json_safe(report),
            })
            if flag(tool_parameters, 'output_dot'):
                yield self.create_blob_message(
                    blob=coloring_to_dot(g, report['coloring']).encode('utf-8'),
                    meta={'file_name': f'coloring_k{k}.dot', 'mime_type': 'text/vnd.graphviz'},
                )
        except EquitableError as e:
            logger.error(f'[Color] 输入错误: {e}')
            yield self.create_json_message(e.to_payload())
        except Exception as e:
            logger.error(f'[Color] 异常: {str(e)}')
            yield self.create_json_message({'success': False, 'message': str(e) or '着色失败', 'error': str(e)})
