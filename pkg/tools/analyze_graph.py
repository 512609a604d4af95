from collections.abc import Generator
from typing import Any, Dict
import logging
from dify_plugin import Tool
from dify_plugin.entities.tool import ToolInvokeMessage
from dify_plugin.config.logger_format import plugin_logger_handler

from equitable.errors import EquitableError
from equitable.params import flag, require_graph
from equitable.pipeline import analysis_dot, analyze
from equitable.serialize import json_safe

logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
logger.addHandler(plugin_logger_handler)

class AnalyzeGraphTool(Tool):
    def _invoke(self, tool_parameters: Dict[str, Any]) -> Generator[ToolInvokeMessage]:
        """检查类成员资格（弦 4/6-圈），给出面与顶点的分类"""
        try:
            g = require_graph(tool_parameters)
            logger.info(f'[Analyze] n={g.order}, m={g.size}, faces={len(g.faces)}')
            report = analyze(g)
            member = report['membership']['is_member']
            yield self.create_json_message({
                'success': True,
                'message': '属于该图类' if member else '不属于该图类',
                'data': json_safe(report),
            })
            if flag(tool_parameters, 'output_dot'):
                yield self.create_blob_message(
                    blob=analysis_dot(g).encode('utf-8'),
                    meta={'file_name': 'graph.dot', 'mime_type': 'text/vnd.graphviz'},
                )
        except EquitableError as e:
            logger.error(f'[Analyze] 输入错误: {e}')
            yield self.create_json_message(e.to_payload())
        except Exception as e:
            logger.error(f'[Analyze] 异常: {str(e)}')
            yield self.create_json_message({'success': False, 'message': str(e) or '分析失败', 'error': str(e)})
